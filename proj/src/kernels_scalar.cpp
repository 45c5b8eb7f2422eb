#include <algorithm>
#include <cmath>

#include "dom2/kernels.hpp"

// Scalar reference kernels. These define the semantics the SIMD variants are
// equivalence-tested against. Per C element the summation runs over k in
// ascending order; the SIMD kernels keep the same per-element order.

namespace dom2::kernels {
namespace {

template <class T>
void gemm(bool accumulate, int M, int K, int N, const T* A, const T* B, T* C) {
    for (int i = 0; i < M; ++i) {
        T* c = C + static_cast<size_t>(i) * N;
        if (!accumulate)
            for (int j = 0; j < N; ++j) c[j] = T(0);
        const T* a = A + static_cast<size_t>(i) * K;
        for (int k = 0; k < K; ++k) {
            const T ak = a[k];
            const T* b = B + static_cast<size_t>(k) * N;
            for (int j = 0; j < N; ++j) c[j] += ak * b[j];
        }
    }
}

template <class T>
void transpose(int rows, int cols, const T* src, T* dst) {
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            dst[static_cast<size_t>(j) * rows + i] = src[static_cast<size_t>(i) * cols + j];
}

template <class T>
void bias_add(int M, int N, T* Y, const T* b) {
    for (int i = 0; i < M; ++i) {
        T* y = Y + static_cast<size_t>(i) * N;
        for (int j = 0; j < N; ++j) y[j] += b[j];
    }
}

template <class T>
void colsum(int M, int N, const T* Y, T* out) {
    for (int j = 0; j < N; ++j) out[j] = T(0);
    for (int i = 0; i < M; ++i) {
        const T* y = Y + static_cast<size_t>(i) * N;
        for (int j = 0; j < N; ++j) out[j] += y[j];
    }
}

template <class T>
T softplus(T x) {
    return std::max(x, T(0)) + std::log1p(std::exp(-std::abs(x)));
}

template <class T>
void mish_fwd(size_t n, const T* x, T* y) {
    for (size_t i = 0; i < n; ++i) y[i] = x[i] * std::tanh(softplus(x[i]));
}

template <class T>
void mish_bwd(size_t n, const T* x, const T* dy, T* dx) {
    for (size_t i = 0; i < n; ++i) {
        const T t = std::tanh(softplus(x[i]));
        const T s = T(1) / (T(1) + std::exp(-x[i]));
        dx[i] = dy[i] * (t + x[i] * (T(1) - t * t) * s);
    }
}

template <class T>
void tanh_fwd(size_t n, const T* x, T* y) {
    for (size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

template <class T>
void tanh_bwd(size_t n, const T* y, const T* dy, T* dx) {
    for (size_t i = 0; i < n; ++i) dx[i] = dy[i] * (T(1) - y[i] * y[i]);
}

template <class T>
void axpby(size_t n, T a, const T* x, T b, T* y) {
    for (size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

template <class T>
void adam_step(size_t n, T* p, T* m, T* v, const T* g, T lr, T beta1, T beta2, T eps,
               T bc1, T bc2) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (T(1) - beta1) * g[i];
        v[i] = beta2 * v[i] + (T(1) - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
    }
}

template <class T>
void clamp_(size_t n, T* x, T lo, T hi) {
    for (size_t i = 0; i < n; ++i) x[i] = std::min(std::max(x[i], lo), hi);
}

template <class T>
T reduce_sum(size_t n, const T* x) {
    T s = T(0);
    for (size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

template <class T>
T reduce_sumsq(size_t n, const T* x) {
    T s = T(0);
    for (size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

template <class T>
void fill(Ops<T>& o) {
    o.gemm = &gemm<T>;
    o.transpose = &transpose<T>;
    o.bias_add = &bias_add<T>;
    o.colsum = &colsum<T>;
    o.mish_fwd = &mish_fwd<T>;
    o.mish_bwd = &mish_bwd<T>;
    o.tanh_fwd = &tanh_fwd<T>;
    o.tanh_bwd = &tanh_bwd<T>;
    o.axpby = &axpby<T>;
    o.adam_step = &adam_step<T>;
    o.clamp = &clamp_<T>;
    o.reduce_sum = &reduce_sum<T>;
    o.reduce_sumsq = &reduce_sumsq<T>;
}

} // namespace

void detail::fill_scalar(Ops<float>& f, Ops<double>& d) {
    fill(f);
    fill(d);
}

} // namespace dom2::kernels
