// OpenMP kernels against their serial twins, plus one full solver step.

#include "kplab/datagen.hpp"
#include "kplab/kernels.hpp"
#include "kplab/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using kplab::cplx;
namespace k = kplab::kernels;
namespace ref = kplab::kernels::reference;

std::vector<double> reals(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<cplx> complexes(std::size_t n, unsigned seed) {
    const auto r = reals(2 * n, seed);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {r[2 * i], r[2 * i + 1]};
    return v;
}

template <bool Parallel>
void BM_if_final(benchmark::State& st) {
    const int n = int(st.range(0));
    const std::size_t m = std::size_t(n) * (n / 2 + 1);
    auto u = complexes(m, 1);
    const auto e = complexes(m, 2), e2 = complexes(m, 3), k1 = complexes(m, 4), k2 = complexes(m, 5),
               k3 = complexes(m, 6), k4 = complexes(m, 7);
    for (auto _ : st) {
        if constexpr (Parallel) k::if_final(u, e, e2, k1, k2, k3, k4);
        else ref::if_final(u, e, e2, k1, k2, k3, k4);
        benchmark::DoNotOptimize(u.data());
    }
    st.SetItemsProcessed(st.iterations() * std::int64_t(m));
}

template <bool Parallel>
void BM_power_flux(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto u = reals(std::size_t(n) * n, 1);
    std::vector<double> out(u.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::power_flux(u, out, 1);
        else ref::power_flux(u, out, 1);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * std::int64_t(u.size()));
}

template <bool Parallel>
void BM_row_sum_products(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto a = reals(std::size_t(n) * n, 1), b = reals(std::size_t(n) * n, 2);
    std::vector<double> out(n);
    for (auto _ : st) {
        if constexpr (Parallel) k::row_sum_products(a, b, n, n, out);
        else ref::row_sum_products(a, b, n, n, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * std::int64_t(a.size()));
}

template <bool Parallel>
void BM_absorb(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto u = reals(std::size_t(n) * n, 1);
    auto sigma = reals(n, 2);
    for (auto& s : sigma) s = s * s;
    std::vector<double> out(u.size());
    for (auto _ : st) {
        if constexpr (Parallel) k::absorb(u, sigma, n, n, out);
        else ref::absorb(u, sigma, n, n, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * std::int64_t(u.size()));
}

void BM_solver_step(benchmark::State& st) {
    const int n = int(st.range(0));
    kplab::SolverConfig c;
    c.grid = kplab::Grid(n, n, 32, 32);
    c.dt = 2.5e-4;
    kplab::Field u = kplab::make_data(c.grid, kplab::DataSpec{});
    for (auto _ : st) u = kplab::step(u, c);
}

} // namespace

BENCHMARK(BM_if_final<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_if_final<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_power_flux<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_power_flux<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_row_sum_products<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_row_sum_products<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_absorb<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_absorb<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_solver_step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
