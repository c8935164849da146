#include "kplab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace kplab::fft {

namespace {

// Plans are cached for the process lifetime, so this mutex must outlive them.
std::mutex& planner_mutex() {
    static auto* m = new std::mutex;
    return *m;
}

constexpr unsigned plan_flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

Plan2d::Plan2d(int n0, int n1) : n0_(n0), n1_(n1) {
    const std::size_t nr = std::size_t(n0) * n1, nc = std::size_t(n0) * (n1 / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_2d(n0, n1, r, c, plan_flags);
        inv_ = fftw_plan_dft_c2r_2d(n0, n1, c, r, plan_flags);
    }
    fftw_free(r);
    fftw_free(c);
}

Plan2d::~Plan2d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Plan2d::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in), as_fftw(out));
}

void Plan2d::inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), as_fftw(in), out);
}

Plan1d::Plan1d(int n) : n_(n) {
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(n, r, c, plan_flags);
        inv_ = fftw_plan_dft_c2r_1d(n, c, r, plan_flags);
    }
    fftw_free(r);
    fftw_free(c);
}

Plan1d::~Plan1d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Plan1d::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in), as_fftw(out));
}

void Plan1d::inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), as_fftw(in), out);
}

std::shared_ptr<const Plan2d> plan2d(int n0, int n1) {
    static std::mutex cache_mutex;
    static auto* cache = new std::map<std::pair<int, int>, std::shared_ptr<const Plan2d>>;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = (*cache)[{n0, n1}];
    if (!slot) slot = std::make_shared<const Plan2d>(n0, n1);
    return slot;
}

std::shared_ptr<const Plan1d> plan1d(int n) {
    static std::mutex cache_mutex;
    static auto* cache = new std::map<int, std::shared_ptr<const Plan1d>>;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = (*cache)[n];
    if (!slot) slot = std::make_shared<const Plan1d>(n);
    return slot;
}

} // namespace kplab::fft
