#pragma once

#include <cstddef>
#include <cstdint>

namespace dom2::kernels {

// Runtime-dispatched compute kernels. Every op has a scalar reference
// implementation; AVX2/FMA and AVX-512 variants are selected once at startup
// from CPUID and can be forced (e.g. by the equivalence tests). Within one
// backend every reduction runs in a fixed order, so repeated runs on the same
// machine are bit-identical.
enum class Backend : int { scalar = 0, avx2 = 1, avx512 = 2 };

const char* backend_name(Backend b);
Backend active_backend();
bool backend_supported(Backend b);
// Test hook; throws ConfigError if the CPU lacks the requested ISA.
void force_backend(Backend b);

template <class T>
struct Ops {
    // C (+)= A(MxK) . B(KxN); all dense row-major.
    void (*gemm)(bool accumulate, int M, int K, int N, const T* A, const T* B, T* C);
    // dst(cols x rows) = src(rows x cols)^T
    void (*transpose)(int rows, int cols, const T* src, T* dst);
    // Y(MxN) rows += b(N)
    void (*bias_add)(int M, int N, T* Y, const T* b);
    // out(N) = column sums of Y(MxN)
    void (*colsum)(int M, int N, const T* Y, T* out);
    void (*mish_fwd)(size_t n, const T* x, T* y);
    // dx = dy * mish'(x)
    void (*mish_bwd)(size_t n, const T* x, const T* dy, T* dx);
    void (*tanh_fwd)(size_t n, const T* x, T* y);
    // dx = dy * (1 - y^2), y = tanh(x) from the forward pass
    void (*tanh_bwd)(size_t n, const T* y, const T* dy, T* dx);
    // y = a*x + b*y
    void (*axpby)(size_t n, T a, const T* x, T b, T* y);
    // Adam update; bc1/bc2 are the precomputed bias corrections 1/(1-beta^t).
    void (*adam_step)(size_t n, T* p, T* m, T* v, const T* g, T lr, T beta1, T beta2,
                      T eps, T bc1, T bc2);
    void (*clamp)(size_t n, T* x, T lo, T hi);
    T (*reduce_sum)(size_t n, const T* x);
    T (*reduce_sumsq)(size_t n, const T* x);
};

const Ops<float>& f32();
const Ops<double>& f64();

template <class T>
const Ops<T>& ops();
template <>
inline const Ops<float>& ops<float>() { return f32(); }
template <>
inline const Ops<double>& ops<double>() { return f64(); }

namespace detail {
// Each backend fills the tables it implements; unimplemented slots fall back
// to scalar.
void fill_scalar(Ops<float>&, Ops<double>&);
void fill_avx2(Ops<float>&, Ops<double>&);
void fill_avx512(Ops<float>&, Ops<double>&);
} // namespace detail

} // namespace dom2::kernels
