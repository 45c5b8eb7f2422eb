// Micro-benchmark for the compute kernels: GFLOP/s of the GEMM variants at
// the shapes the trainer actually issues, per backend.

#include <chrono>
#include <cstdio>
#include <vector>

#include "dom2/kernels.hpp"
#include "dom2/rng.hpp"
#include "dom2/tensor.hpp"

using namespace dom2;
using Clock = std::chrono::steady_clock;

template <class T>
double bench_gemm(int M, int K, int N, double seconds) {
    Mat<T> A(M, K), B(K, N), C(M, N);
    Rng rng(42);
    rng.fill_uniform(A.data(), A.size(), -1.0, 1.0);
    rng.fill_uniform(B.data(), B.size(), -1.0, 1.0);
    C.zero();
    const auto& ops = kernels::ops<T>();
    // warmup
    for (int i = 0; i < 3; ++i) ops.gemm(false, M, K, N, A.data(), B.data(), C.data());
    const double flops = 2.0 * M * K * N;
    size_t iters = 0;
    auto t0 = Clock::now();
    double el = 0.0;
    while (el < seconds) {
        ops.gemm(false, M, K, N, A.data(), B.data(), C.data());
        ++iters;
        el = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    return flops * static_cast<double>(iters) / el / 1e9;
}

template <class T>
double bench_mish(size_t n, double seconds) {
    std::vector<T> x(n), y(n);
    Rng rng(7);
    rng.fill_uniform(x.data(), n, -4.0, 4.0);
    const auto& ops = kernels::ops<T>();
    size_t iters = 0;
    auto t0 = Clock::now();
    double el = 0.0;
    while (el < seconds) {
        ops.mish_fwd(n, x.data(), y.data());
        ++iters;
        el = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    return static_cast<double>(n) * iters / el / 1e9; // Gelem/s
}

int main(int argc, char** argv) {
    using kernels::Backend;
    const double secs = argc > 1 ? std::atof(argv[1]) : 0.3;
    struct Shape {
        int M, K, N;
    };
    const Shape shapes[] = {{256, 64, 64},   {256, 54, 64},   {2816, 23, 64},
                            {2816, 64, 64},  {2816, 64, 1},   {256, 256, 256},
                            {64, 256, 64},   {256, 36, 256},  {20, 64, 64}};
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::avx512}) {
        if (!kernels::backend_supported(b)) {
            std::printf("backend %s: unsupported\n", kernels::backend_name(b));
            continue;
        }
        kernels::force_backend(b);
        std::printf("backend %s:\n", kernels::backend_name(b));
        for (const auto& s : shapes) {
            const double g32 = bench_gemm<float>(s.M, s.K, s.N, secs);
            const double g64 = bench_gemm<double>(s.M, s.K, s.N, secs);
            std::printf("  gemm %5dx%3dx%3d  f32 %7.2f GF/s   f64 %7.2f GF/s\n", s.M, s.K,
                        s.N, g32, g64);
        }
        std::printf("  mish_fwd f32 %7.3f Gelem/s\n", bench_mish<float>(1 << 16, secs));
    }
    return 0;
}
