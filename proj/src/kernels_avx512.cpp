#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dom2/kernels.hpp"

// AVX-512 variants: GEMM (4 rows x 64 columns f32, 4 x 32 f64) with masked
// column tails, plus the hot elementwise ops.

namespace dom2::kernels {
namespace {

inline void micro4x64_f32(bool acc, int K, int N, const float* A, const float* B,
                          float* C, int i0, int j0) {
    __m512 c[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            c[r][c4] = acc ? _mm512_loadu_ps(C + static_cast<size_t>(i0 + r) * N + j0 + 16 * c4)
                           : _mm512_setzero_ps();
    for (int k = 0; k < K; ++k) {
        const float* brow = B + static_cast<size_t>(k) * N + j0;
        const __m512 b0 = _mm512_loadu_ps(brow);
        const __m512 b1 = _mm512_loadu_ps(brow + 16);
        const __m512 b2 = _mm512_loadu_ps(brow + 32);
        const __m512 b3 = _mm512_loadu_ps(brow + 48);
        for (int r = 0; r < 4; ++r) {
            const __m512 a = _mm512_set1_ps(A[static_cast<size_t>(i0 + r) * K + k]);
            c[r][0] = _mm512_fmadd_ps(a, b0, c[r][0]);
            c[r][1] = _mm512_fmadd_ps(a, b1, c[r][1]);
            c[r][2] = _mm512_fmadd_ps(a, b2, c[r][2]);
            c[r][3] = _mm512_fmadd_ps(a, b3, c[r][3]);
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            _mm512_storeu_ps(C + static_cast<size_t>(i0 + r) * N + j0 + 16 * c4, c[r][c4]);
}

inline void micro1x16m_f32(bool acc, int K, int N, const float* A, const float* B, float* C,
                           int i, int j0, __mmask16 m) {
    __m512 c0 = acc ? _mm512_maskz_loadu_ps(m, C + static_cast<size_t>(i) * N + j0)
                    : _mm512_setzero_ps();
    const float* a = A + static_cast<size_t>(i) * K;
    for (int k = 0; k < K; ++k) {
        const __m512 b = _mm512_maskz_loadu_ps(m, B + static_cast<size_t>(k) * N + j0);
        c0 = _mm512_fmadd_ps(_mm512_set1_ps(a[k]), b, c0);
    }
    _mm512_mask_storeu_ps(C + static_cast<size_t>(i) * N + j0, m, c0);
}

inline float dot_f32(int K, const float* a, const float* b) {
    __m512 accv = _mm512_setzero_ps();
    int k = 0;
    for (; k + 16 <= K; k += 16)
        accv = _mm512_fmadd_ps(_mm512_loadu_ps(a + k), _mm512_loadu_ps(b + k), accv);
    float s = _mm512_reduce_add_ps(accv);
    for (; k < K; ++k) s += a[k] * b[k];
    return s;
}

void gemm_narrow_f32(bool acc, int M, int K, int N, const float* A, const float* B, float* C) {
    static thread_local std::vector<float> cols;
    cols.resize(static_cast<size_t>(N) * K);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < K; ++k)
            cols[static_cast<size_t>(j) * K + k] = B[static_cast<size_t>(k) * N + j];
    for (int i = 0; i < M; ++i) {
        const float* a = A + static_cast<size_t>(i) * K;
        float* c = C + static_cast<size_t>(i) * N;
        for (int j = 0; j < N; ++j) {
            const float s = dot_f32(K, a, cols.data() + static_cast<size_t>(j) * K);
            c[j] = acc ? c[j] + s : s;
        }
    }
}

void gemm_f32(bool acc, int M, int K, int N, const float* A, const float* B, float* C) {
    if (N <= 4 && K >= 16) {
        gemm_narrow_f32(acc, M, K, N, A, B, C);
        return;
    }
    int j0 = 0;
    for (; j0 + 64 <= N; j0 += 64) {
        int i = 0;
        for (; i + 4 <= M; i += 4) micro4x64_f32(acc, K, N, A, B, C, i, j0);
        for (; i < M; ++i)
            for (int jj = 0; jj < 64; jj += 16)
                micro1x16m_f32(acc, K, N, A, B, C, i, j0 + jj, static_cast<__mmask16>(0xFFFF));
    }
    for (; j0 + 16 <= N; j0 += 16)
        for (int i = 0; i < M; ++i)
            micro1x16m_f32(acc, K, N, A, B, C, i, j0, static_cast<__mmask16>(0xFFFF));
    if (j0 < N) {
        const auto m = static_cast<__mmask16>((1u << (N - j0)) - 1u);
        for (int i = 0; i < M; ++i) micro1x16m_f32(acc, K, N, A, B, C, i, j0, m);
    }
}

inline void micro4x32_f64(bool acc, int K, int N, const double* A, const double* B,
                          double* C, int i0, int j0) {
    __m512d c[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            c[r][c4] = acc ? _mm512_loadu_pd(C + static_cast<size_t>(i0 + r) * N + j0 + 8 * c4)
                           : _mm512_setzero_pd();
    for (int k = 0; k < K; ++k) {
        const double* brow = B + static_cast<size_t>(k) * N + j0;
        const __m512d b0 = _mm512_loadu_pd(brow);
        const __m512d b1 = _mm512_loadu_pd(brow + 8);
        const __m512d b2 = _mm512_loadu_pd(brow + 16);
        const __m512d b3 = _mm512_loadu_pd(brow + 24);
        for (int r = 0; r < 4; ++r) {
            const __m512d a = _mm512_set1_pd(A[static_cast<size_t>(i0 + r) * K + k]);
            c[r][0] = _mm512_fmadd_pd(a, b0, c[r][0]);
            c[r][1] = _mm512_fmadd_pd(a, b1, c[r][1]);
            c[r][2] = _mm512_fmadd_pd(a, b2, c[r][2]);
            c[r][3] = _mm512_fmadd_pd(a, b3, c[r][3]);
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            _mm512_storeu_pd(C + static_cast<size_t>(i0 + r) * N + j0 + 8 * c4, c[r][c4]);
}

inline void micro1x8m_f64(bool acc, int K, int N, const double* A, const double* B, double* C,
                          int i, int j0, __mmask8 m) {
    __m512d c0 = acc ? _mm512_maskz_loadu_pd(m, C + static_cast<size_t>(i) * N + j0)
                     : _mm512_setzero_pd();
    const double* a = A + static_cast<size_t>(i) * K;
    for (int k = 0; k < K; ++k) {
        const __m512d b = _mm512_maskz_loadu_pd(m, B + static_cast<size_t>(k) * N + j0);
        c0 = _mm512_fmadd_pd(_mm512_set1_pd(a[k]), b, c0);
    }
    _mm512_mask_storeu_pd(C + static_cast<size_t>(i) * N + j0, m, c0);
}

void gemm_f64(bool acc, int M, int K, int N, const double* A, const double* B, double* C) {
    int j0 = 0;
    for (; j0 + 32 <= N; j0 += 32) {
        int i = 0;
        for (; i + 4 <= M; i += 4) micro4x32_f64(acc, K, N, A, B, C, i, j0);
        for (; i < M; ++i)
            for (int jj = 0; jj < 32; jj += 8)
                micro1x8m_f64(acc, K, N, A, B, C, i, j0 + jj, static_cast<__mmask8>(0xFF));
    }
    for (; j0 + 8 <= N; j0 += 8)
        for (int i = 0; i < M; ++i)
            micro1x8m_f64(acc, K, N, A, B, C, i, j0, static_cast<__mmask8>(0xFF));
    if (j0 < N) {
        const auto m = static_cast<__mmask8>((1u << (N - j0)) - 1u);
        for (int i = 0; i < M; ++i) micro1x8m_f64(acc, K, N, A, B, C, i, j0, m);
    }
}

// --------------------------------------------------------- elementwise f32

inline __m512 exp_ps512(__m512 x) {
    x = _mm512_min_ps(_mm512_max_ps(x, _mm512_set1_ps(-87.0f)), _mm512_set1_ps(88.02f));
    const __m512 log2e = _mm512_set1_ps(1.44269504088896341f);
    const __m512 ln2_hi = _mm512_set1_ps(0.693359375f);
    const __m512 ln2_lo = _mm512_set1_ps(-2.12194440e-4f);
    const __m512 n = _mm512_roundscale_ps(_mm512_mul_ps(x, log2e), _MM_FROUND_TO_NEAREST_INT);
    __m512 r = _mm512_fnmadd_ps(n, ln2_hi, x);
    r = _mm512_fnmadd_ps(n, ln2_lo, r);
    __m512 p = _mm512_set1_ps(1.0f / 720.0f);
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(1.0f / 120.0f));
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(1.0f / 24.0f));
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(1.0f / 6.0f));
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(0.5f));
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(1.0f));
    p = _mm512_fmadd_ps(p, r, _mm512_set1_ps(1.0f));
    const __m512i ni = _mm512_cvtps_epi32(n);
    const __m512i bits = _mm512_slli_epi32(_mm512_add_epi32(ni, _mm512_set1_epi32(127)), 23);
    return _mm512_mul_ps(p, _mm512_castsi512_ps(bits));
}

inline void mish_core512(__m512 x, __m512& t_out, __m512& sig_out) {
    const __m512 one = _mm512_set1_ps(1.0f);
    const __m512 two = _mm512_set1_ps(2.0f);
    const __m512 ax = _mm512_abs_ps(x);
    const __m512 e = exp_ps512(_mm512_sub_ps(_mm512_setzero_ps(), ax));
    const __m512 e2 = _mm512_mul_ps(e, e);
    const __m512 num_p = _mm512_fmadd_ps(two, e, one);
    const __m512 den_p = _mm512_fmadd_ps(two, e2, num_p);
    const __m512 num_n = _mm512_fmadd_ps(two, e, e2);
    const __m512 den_n = _mm512_add_ps(two, num_n);
    const __mmask16 neg = _mm512_cmp_ps_mask(x, _mm512_setzero_ps(), _CMP_LT_OQ);
    t_out = _mm512_div_ps(_mm512_mask_blend_ps(neg, num_p, num_n),
                          _mm512_mask_blend_ps(neg, den_p, den_n));
    sig_out = _mm512_div_ps(_mm512_mask_blend_ps(neg, one, e), _mm512_add_ps(one, e));
}

void mish_fwd_f32e(size_t n, const float* x, float* y) {
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m512 xv = _mm512_loadu_ps(x + i);
        __m512 t, sig;
        mish_core512(xv, t, sig);
        _mm512_storeu_ps(y + i, _mm512_mul_ps(xv, t));
    }
    for (; i < n; ++i) {
        const float sp = std::max(x[i], 0.0f) + std::log1p(std::exp(-std::abs(x[i])));
        y[i] = x[i] * std::tanh(sp);
    }
}

void mish_bwd_f32e(size_t n, const float* x, const float* dy, float* dx) {
    const __m512 one = _mm512_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m512 xv = _mm512_loadu_ps(x + i);
        __m512 t, sig;
        mish_core512(xv, t, sig);
        const __m512 omt2 = _mm512_fnmadd_ps(t, t, one);
        const __m512 d = _mm512_fmadd_ps(_mm512_mul_ps(xv, omt2), sig, t);
        _mm512_storeu_ps(dx + i, _mm512_mul_ps(_mm512_loadu_ps(dy + i), d));
    }
    for (; i < n; ++i) {
        const float sp = std::max(x[i], 0.0f) + std::log1p(std::exp(-std::abs(x[i])));
        const float t = std::tanh(sp);
        const float s = 1.0f / (1.0f + std::exp(-x[i]));
        dx[i] = dy[i] * (t + x[i] * (1.0f - t * t) * s);
    }
}

void tanh_fwd_f32e(size_t n, const float* x, float* y) {
    const __m512 one = _mm512_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m512 xv = _mm512_loadu_ps(x + i);
        const __m512 ax = _mm512_abs_ps(xv);
        const __m512 q = exp_ps512(_mm512_mul_ps(_mm512_set1_ps(-2.0f), ax));
        __m512 t = _mm512_div_ps(_mm512_sub_ps(one, q), _mm512_add_ps(one, q));
        const __m512 sign = _mm512_and_ps(xv, _mm512_set1_ps(-0.0f));
        t = _mm512_or_ps(t, sign);
        _mm512_storeu_ps(y + i, t);
    }
    for (; i < n; ++i) y[i] = std::tanh(x[i]);
}

void adam_step_f32e(size_t n, float* p, float* m, float* v, const float* g, float lr,
                    float beta1, float beta2, float eps, float bc1, float bc2) {
    const __m512 b1 = _mm512_set1_ps(beta1), ob1 = _mm512_set1_ps(1.0f - beta1);
    const __m512 b2 = _mm512_set1_ps(beta2), ob2 = _mm512_set1_ps(1.0f - beta2);
    const __m512 lrv = _mm512_set1_ps(lr), epsv = _mm512_set1_ps(eps);
    const __m512 bc1v = _mm512_set1_ps(bc1), bc2v = _mm512_set1_ps(bc2);
    size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m512 gv = _mm512_loadu_ps(g + i);
        __m512 mv = _mm512_fmadd_ps(ob1, gv, _mm512_mul_ps(b1, _mm512_loadu_ps(m + i)));
        __m512 vv = _mm512_fmadd_ps(ob2, _mm512_mul_ps(gv, gv),
                                    _mm512_mul_ps(b2, _mm512_loadu_ps(v + i)));
        _mm512_storeu_ps(m + i, mv);
        _mm512_storeu_ps(v + i, vv);
        const __m512 denom = _mm512_add_ps(_mm512_sqrt_ps(_mm512_mul_ps(vv, bc2v)), epsv);
        const __m512 upd = _mm512_div_ps(_mm512_mul_ps(lrv, _mm512_mul_ps(mv, bc1v)), denom);
        _mm512_storeu_ps(p + i, _mm512_sub_ps(_mm512_loadu_ps(p + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
    }
}

} // namespace

void detail::fill_avx512(Ops<float>& f, Ops<double>& d) {
    f.gemm = &gemm_f32;
    f.mish_fwd = &mish_fwd_f32e;
    f.mish_bwd = &mish_bwd_f32e;
    f.tanh_fwd = &tanh_fwd_f32e;
    f.adam_step = &adam_step_f32e;
    d.gemm = &gemm_f64;
}

} // namespace dom2::kernels
