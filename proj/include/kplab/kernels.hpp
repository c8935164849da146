#pragma once

#include "kplab/fft.hpp"

#include <span>

// Data-parallel building blocks of the spectral pipeline. The functions in
// kplab::kernels run with OpenMP; kplab::kernels::reference holds serial twins
// with the same arithmetic, used by the tests and the benchmark. Reductions are
// formed per row and summed in row order, so results do not depend on the
// number of threads.
namespace kplab::kernels {

void scale(std::span<double> v, double s);

/// out[j*cols + k] = in[j*cols + k] * mx[j] * my[k]
void scale_separable(std::span<const cplx> in, std::span<cplx> out, std::span<const cplx> mx,
                     std::span<const cplx> my);

/// out[r] = sum_c a[r*cols + c] * b[r*cols + c]
void row_sum_products(std::span<const double> a, std::span<const double> b, int rows, int cols,
                      std::span<double> out);

double max_abs(std::span<const double> v);

/// out = u^(p+1) / (p+1)
void power_flux(std::span<const double> u, std::span<double> out, int p);

/// out[i] = a[i] * m[i]
void multiply(std::span<const cplx> a, std::span<const cplx> m, std::span<cplx> out);

/// out[r*cols + c] -= sigma[r] * (u[r*cols + c] - m[c]), m[c] = sum_r sigma u / sum_r sigma:
/// damping supported where sigma > 0 whose column sums vanish.
void absorb(std::span<const double> u, std::span<const double> sigma, int rows, int cols,
            std::span<double> out);

/// out = e * (u + c * k)
void if_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out);

/// out = e * u + c * k
void exp_axpy(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out);

/// u <- e2*u + (e2*k1 + 2*e*(k2 + k3) + k4) / 6
void if_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> e2, std::span<const cplx> k1,
              std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4);

/// out = e * u + q * n
void etd_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> q,
               std::span<const cplx> n, std::span<cplx> out);

/// u <- e*u + f1*nu + 2*f2*(na + nb) + f3*nc
void etd_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> f1, std::span<const cplx> f2,
               std::span<const cplx> f3, std::span<const cplx> nu, std::span<const cplx> na,
               std::span<const cplx> nb, std::span<const cplx> nc);

namespace reference {

void scale(std::span<double> v, double s);
void scale_separable(std::span<const cplx> in, std::span<cplx> out, std::span<const cplx> mx,
                     std::span<const cplx> my);
void row_sum_products(std::span<const double> a, std::span<const double> b, int rows, int cols,
                      std::span<double> out);
double max_abs(std::span<const double> v);
void power_flux(std::span<const double> u, std::span<double> out, int p);
void multiply(std::span<const cplx> a, std::span<const cplx> m, std::span<cplx> out);
void absorb(std::span<const double> u, std::span<const double> sigma, int rows, int cols,
            std::span<double> out);
void if_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out);
void exp_axpy(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> k, double c,
              std::span<cplx> out);
void if_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> e2, std::span<const cplx> k1,
              std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4);
void etd_stage(std::span<const cplx> e, std::span<const cplx> u, std::span<const cplx> q,
               std::span<const cplx> n, std::span<cplx> out);
void etd_final(std::span<cplx> u, std::span<const cplx> e, std::span<const cplx> f1, std::span<const cplx> f2,
               std::span<const cplx> f3, std::span<const cplx> nu, std::span<const cplx> na,
               std::span<const cplx> nb, std::span<const cplx> nc);

} // namespace reference
} // namespace kplab::kernels
