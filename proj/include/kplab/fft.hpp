#pragma once

#include <complex>
#include <memory>

namespace kplab {

using cplx = std::complex<double>;

namespace fft {

/// Real-to-complex transform pair on an n0 x n1 row-major array; the complex
/// side has n0 x (n1/2 + 1) entries. Forward is unnormalized, inverse is the
/// plain backward sum (callers divide by n0 * n1). Plans are read-only and may
/// be executed from several threads at once.
class Plan2d {
public:
    Plan2d(int n0, int n1);
    ~Plan2d();
    Plan2d(const Plan2d&) = delete;
    Plan2d& operator=(const Plan2d&) = delete;

    void forward(const double* in, cplx* out) const;
    /// Destroys `in`.
    void inverse(cplx* in, double* out) const;

    int n0() const { return n0_; }
    int n1() const { return n1_; }

private:
    int n0_, n1_;
    void* fwd_;
    void* inv_;
};

/// One-dimensional real transform pair of length n.
class Plan1d {
public:
    explicit Plan1d(int n);
    ~Plan1d();
    Plan1d(const Plan1d&) = delete;
    Plan1d& operator=(const Plan1d&) = delete;

    void forward(const double* in, cplx* out) const;
    void inverse(cplx* in, double* out) const;

    int n() const { return n_; }

private:
    int n_;
    void* fwd_;
    void* inv_;
};

/// Cached plans; creation is serialized, the returned plan is shared.
std::shared_ptr<const Plan2d> plan2d(int n0, int n1);
std::shared_ptr<const Plan1d> plan1d(int n);

} // namespace fft
} // namespace kplab
