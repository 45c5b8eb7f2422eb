#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dom2/kernels.hpp"

// AVX2/FMA kernels. GEMM uses a broadcast-A register-blocked microkernel
// (4 rows x 32 columns f32, 4 x 16 f64); per C element the k-summation order
// matches the scalar reference. f32 transcendentals use polynomial exp and a
// short atanh series for log1p, accurate to ~1e-6 relative, which the
// scalar-equivalence tolerances account for.

namespace dom2::kernels {
namespace {

// ---------------------------------------------------------------- f32 gemm

inline void micro4x32_f32(bool acc, int K, int N, const float* A, const float* B,
                          float* C, int i0, int j0) {
    __m256 c[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            c[r][c4] = acc ? _mm256_loadu_ps(C + static_cast<size_t>(i0 + r) * N + j0 + 8 * c4)
                           : _mm256_setzero_ps();
    for (int k = 0; k < K; ++k) {
        const float* brow = B + static_cast<size_t>(k) * N + j0;
        const __m256 b0 = _mm256_loadu_ps(brow);
        const __m256 b1 = _mm256_loadu_ps(brow + 8);
        const __m256 b2 = _mm256_loadu_ps(brow + 16);
        const __m256 b3 = _mm256_loadu_ps(brow + 24);
        for (int r = 0; r < 4; ++r) {
            const __m256 a = _mm256_broadcast_ss(A + static_cast<size_t>(i0 + r) * K + k);
            c[r][0] = _mm256_fmadd_ps(a, b0, c[r][0]);
            c[r][1] = _mm256_fmadd_ps(a, b1, c[r][1]);
            c[r][2] = _mm256_fmadd_ps(a, b2, c[r][2]);
            c[r][3] = _mm256_fmadd_ps(a, b3, c[r][3]);
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            _mm256_storeu_ps(C + static_cast<size_t>(i0 + r) * N + j0 + 8 * c4, c[r][c4]);
}

inline void micro1x8_f32(bool acc, int K, int N, const float* A, const float* B, float* C,
                         int i, int j0) {
    __m256 c0 = acc ? _mm256_loadu_ps(C + static_cast<size_t>(i) * N + j0) : _mm256_setzero_ps();
    const float* a = A + static_cast<size_t>(i) * K;
    for (int k = 0; k < K; ++k) {
        const __m256 b = _mm256_loadu_ps(B + static_cast<size_t>(k) * N + j0);
        c0 = _mm256_fmadd_ps(_mm256_broadcast_ss(a + k), b, c0);
    }
    _mm256_storeu_ps(C + static_cast<size_t>(i) * N + j0, c0);
}

// Narrow outputs (final layers, N<=4) as per-row dot products over K.
inline float hsum(__m256 v) {
    const __m128 lo = _mm256_castps256_ps128(v);
    const __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
    return _mm_cvtss_f32(s);
}

inline float dot_f32(int K, const float* a, const float* b) {
    __m256 accv = _mm256_setzero_ps();
    int k = 0;
    for (; k + 8 <= K; k += 8)
        accv = _mm256_fmadd_ps(_mm256_loadu_ps(a + k), _mm256_loadu_ps(b + k), accv);
    float s = hsum(accv);
    for (; k < K; ++k) s += a[k] * b[k];
    return s;
}

void gemm_narrow_f32(bool acc, int M, int K, int N, const float* A, const float* B, float* C) {
    // Repack the narrow B (KxN, N<=4) into contiguous columns once.
    static thread_local std::vector<float> cols;
    cols.resize(static_cast<size_t>(N) * K);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < K; ++k) cols[static_cast<size_t>(j) * K + k] = B[static_cast<size_t>(k) * N + j];
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
    for (; j0 + 32 <= N; j0 += 32) {
        int i = 0;
        for (; i + 4 <= M; i += 4) micro4x32_f32(acc, K, N, A, B, C, i, j0);
        for (; i < M; ++i) {
            micro1x8_f32(acc, K, N, A, B, C, i, j0);
            micro1x8_f32(acc, K, N, A, B, C, i, j0 + 8);
            micro1x8_f32(acc, K, N, A, B, C, i, j0 + 16);
            micro1x8_f32(acc, K, N, A, B, C, i, j0 + 24);
        }
    }
    for (; j0 + 8 <= N; j0 += 8)
        for (int i = 0; i < M; ++i) micro1x8_f32(acc, K, N, A, B, C, i, j0);
    if (j0 < N) {
        for (int i = 0; i < M; ++i) {
            float* c = C + static_cast<size_t>(i) * N;
            if (!acc)
                for (int j = j0; j < N; ++j) c[j] = 0.0f;
            const float* a = A + static_cast<size_t>(i) * K;
            for (int k = 0; k < K; ++k) {
                const float ak = a[k];
                const float* b = B + static_cast<size_t>(k) * N;
                for (int j = j0; j < N; ++j) c[j] += ak * b[j];
            }
        }
    }
}

// ---------------------------------------------------------------- f64 gemm

inline void micro4x16_f64(bool acc, int K, int N, const double* A, const double* B,
                          double* C, int i0, int j0) {
    __m256d c[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            c[r][c4] = acc ? _mm256_loadu_pd(C + static_cast<size_t>(i0 + r) * N + j0 + 4 * c4)
                           : _mm256_setzero_pd();
    for (int k = 0; k < K; ++k) {
        const double* brow = B + static_cast<size_t>(k) * N + j0;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        const __m256d b2 = _mm256_loadu_pd(brow + 8);
        const __m256d b3 = _mm256_loadu_pd(brow + 12);
        for (int r = 0; r < 4; ++r) {
            const __m256d a = _mm256_broadcast_sd(A + static_cast<size_t>(i0 + r) * K + k);
            c[r][0] = _mm256_fmadd_pd(a, b0, c[r][0]);
            c[r][1] = _mm256_fmadd_pd(a, b1, c[r][1]);
            c[r][2] = _mm256_fmadd_pd(a, b2, c[r][2]);
            c[r][3] = _mm256_fmadd_pd(a, b3, c[r][3]);
        }
    }
    for (int r = 0; r < 4; ++r)
        for (int c4 = 0; c4 < 4; ++c4)
            _mm256_storeu_pd(C + static_cast<size_t>(i0 + r) * N + j0 + 4 * c4, c[r][c4]);
}

inline void micro1x4_f64(bool acc, int K, int N, const double* A, const double* B, double* C,
                         int i, int j0) {
    __m256d c0 = acc ? _mm256_loadu_pd(C + static_cast<size_t>(i) * N + j0) : _mm256_setzero_pd();
    const double* a = A + static_cast<size_t>(i) * K;
    for (int k = 0; k < K; ++k) {
        const __m256d b = _mm256_loadu_pd(B + static_cast<size_t>(k) * N + j0);
        c0 = _mm256_fmadd_pd(_mm256_broadcast_sd(a + k), b, c0);
    }
    _mm256_storeu_pd(C + static_cast<size_t>(i) * N + j0, c0);
}

void gemm_f64(bool acc, int M, int K, int N, const double* A, const double* B, double* C) {
    int j0 = 0;
    for (; j0 + 16 <= N; j0 += 16) {
        int i = 0;
        for (; i + 4 <= M; i += 4) micro4x16_f64(acc, K, N, A, B, C, i, j0);
        for (; i < M; ++i)
            for (int jj = 0; jj < 16; jj += 4) micro1x4_f64(acc, K, N, A, B, C, i, j0 + jj);
    }
    for (; j0 + 4 <= N; j0 += 4)
        for (int i = 0; i < M; ++i) micro1x4_f64(acc, K, N, A, B, C, i, j0);
    if (j0 < N) {
        for (int i = 0; i < M; ++i) {
            double* c = C + static_cast<size_t>(i) * N;
            if (!acc)
                for (int j = j0; j < N; ++j) c[j] = 0.0;
            const double* a = A + static_cast<size_t>(i) * K;
            for (int k = 0; k < K; ++k) {
                const double ak = a[k];
                const double* b = B + static_cast<size_t>(k) * N;
                for (int j = j0; j < N; ++j) c[j] += ak * b[j];
            }
        }
    }
}

// ------------------------------------------------------- f32 transcendentals

inline __m256 exp_ps(__m256 x) {
    const __m256 hi = _mm256_set1_ps(88.02f);
    const __m256 lo = _mm256_set1_ps(-87.0f);
    x = _mm256_min_ps(_mm256_max_ps(x, lo), hi);
    const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
    const __m256 ln2_hi = _mm256_set1_ps(0.693359375f);
    const __m256 ln2_lo = _mm256_set1_ps(-2.12194440e-4f);
    __m256 n = _mm256_round_ps(_mm256_mul_ps(x, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256 r = _mm256_fnmadd_ps(n, ln2_hi, x);
    r = _mm256_fnmadd_ps(n, ln2_lo, r);
    // degree-6 Taylor of e^r on |r| <= ln2/2
    __m256 p = _mm256_set1_ps(1.0f / 720.0f);
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(1.0f / 120.0f));
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(1.0f / 24.0f));
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(1.0f / 6.0f));
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(0.5f));
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(1.0f));
    p = _mm256_fmadd_ps(p, r, _mm256_set1_ps(1.0f));
    const __m256i ni = _mm256_cvtps_epi32(n);
    const __m256i bits = _mm256_slli_epi32(_mm256_add_epi32(ni, _mm256_set1_epi32(127)), 23);
    return _mm256_mul_ps(p, _mm256_castsi256_ps(bits));
}

// tanh(softplus(x)) and sigmoid(x) from the single exponential e = exp(-|x|):
//   x >= 0: tanh(sp) = (1+2e)/(1+2e+2e^2),      sigmoid = 1/(1+e)
//   x <  0: tanh(sp) = (2e+e^2)/(2+2e+e^2),     sigmoid = e/(1+e)
inline void mish_core(__m256 x, __m256& t_out, __m256& sig_out) {
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 two = _mm256_set1_ps(2.0f);
    const __m256 sign_mask = _mm256_set1_ps(-0.0f);
    const __m256 ax = _mm256_andnot_ps(sign_mask, x);
    const __m256 e = exp_ps(_mm256_sub_ps(_mm256_setzero_ps(), ax));
    const __m256 e2 = _mm256_mul_ps(e, e);
    const __m256 num_p = _mm256_fmadd_ps(two, e, one);
    const __m256 den_p = _mm256_fmadd_ps(two, e2, num_p);
    const __m256 num_n = _mm256_fmadd_ps(two, e, e2);
    const __m256 den_n = _mm256_add_ps(two, num_n);
    const __m256 neg = _mm256_cmp_ps(x, _mm256_setzero_ps(), _CMP_LT_OQ);
    const __m256 t = _mm256_div_ps(_mm256_blendv_ps(num_p, num_n, neg),
                                   _mm256_blendv_ps(den_p, den_n, neg));
    const __m256 sig =
        _mm256_div_ps(_mm256_blendv_ps(one, e, neg), _mm256_add_ps(one, e));
    t_out = t;
    sig_out = sig;
}

void mish_fwd_f32(size_t n, const float* x, float* y) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 xv = _mm256_loadu_ps(x + i);
        __m256 t, sig;
        mish_core(xv, t, sig);
        _mm256_storeu_ps(y + i, _mm256_mul_ps(xv, t));
    }
    for (; i < n; ++i) {
        const float sp = std::max(x[i], 0.0f) + std::log1p(std::exp(-std::abs(x[i])));
        y[i] = x[i] * std::tanh(sp);
    }
}

void mish_bwd_f32(size_t n, const float* x, const float* dy, float* dx) {
    const __m256 one = _mm256_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 xv = _mm256_loadu_ps(x + i);
        __m256 t, sig;
        mish_core(xv, t, sig);
        const __m256 omt2 = _mm256_fnmadd_ps(t, t, one);
        const __m256 d = _mm256_fmadd_ps(_mm256_mul_ps(xv, omt2), sig, t);
        _mm256_storeu_ps(dx + i, _mm256_mul_ps(_mm256_loadu_ps(dy + i), d));
    }
    for (; i < n; ++i) {
        const float sp = std::max(x[i], 0.0f) + std::log1p(std::exp(-std::abs(x[i])));
        const float t = std::tanh(sp);
        const float s = 1.0f / (1.0f + std::exp(-x[i]));
        dx[i] = dy[i] * (t + x[i] * (1.0f - t * t) * s);
    }
}

void tanh_fwd_f32(size_t n, const float* x, float* y) {
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 sign_mask = _mm256_set1_ps(-0.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 xv = _mm256_loadu_ps(x + i);
        const __m256 ax = _mm256_andnot_ps(sign_mask, xv);
        const __m256 q = exp_ps(_mm256_mul_ps(_mm256_set1_ps(-2.0f), ax));
        __m256 t = _mm256_div_ps(_mm256_sub_ps(one, q), _mm256_add_ps(one, q));
        t = _mm256_or_ps(t, _mm256_and_ps(sign_mask, xv)); // restore sign
        _mm256_storeu_ps(y + i, t);
    }
    for (; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_bwd_f32(size_t n, const float* y, const float* dy, float* dx) {
    const __m256 one = _mm256_set1_ps(1.0f);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 yv = _mm256_loadu_ps(y + i);
        _mm256_storeu_ps(dx + i,
                         _mm256_mul_ps(_mm256_loadu_ps(dy + i), _mm256_fnmadd_ps(yv, yv, one)));
    }
    for (; i < n; ++i) dx[i] = dy[i] * (1.0f - y[i] * y[i]);
}

// ----------------------------------------------------------- elementwise ops

void bias_add_f32(int M, int N, float* Y, const float* b) {
    for (int i = 0; i < M; ++i) {
        float* y = Y + static_cast<size_t>(i) * N;
        int j = 0;
        for (; j + 8 <= N; j += 8)
            _mm256_storeu_ps(y + j, _mm256_add_ps(_mm256_loadu_ps(y + j), _mm256_loadu_ps(b + j)));
        for (; j < N; ++j) y[j] += b[j];
    }
}

void colsum_f32(int M, int N, const float* Y, float* out) {
    for (int j = 0; j < N; ++j) out[j] = 0.0f;
    for (int i = 0; i < M; ++i) {
        const float* y = Y + static_cast<size_t>(i) * N;
        int j = 0;
        for (; j + 8 <= N; j += 8)
            _mm256_storeu_ps(out + j, _mm256_add_ps(_mm256_loadu_ps(out + j), _mm256_loadu_ps(y + j)));
        for (; j < N; ++j) out[j] += y[j];
    }
}

void axpby_f32(size_t n, float a, const float* x, float b, float* y) {
    const __m256 av = _mm256_set1_ps(a);
    const __m256 bv = _mm256_set1_ps(b);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 yv = _mm256_mul_ps(bv, _mm256_loadu_ps(y + i));
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), yv));
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void adam_step_f32(size_t n, float* p, float* m, float* v, const float* g, float lr,
                   float beta1, float beta2, float eps, float bc1, float bc2) {
    const __m256 b1 = _mm256_set1_ps(beta1), ob1 = _mm256_set1_ps(1.0f - beta1);
    const __m256 b2 = _mm256_set1_ps(beta2), ob2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 lrv = _mm256_set1_ps(lr), epsv = _mm256_set1_ps(eps);
    const __m256 bc1v = _mm256_set1_ps(bc1), bc2v = _mm256_set1_ps(bc2);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gv = _mm256_loadu_ps(g + i);
        __m256 mv = _mm256_fmadd_ps(ob1, gv, _mm256_mul_ps(b1, _mm256_loadu_ps(m + i)));
        __m256 vv = _mm256_fmadd_ps(ob2, _mm256_mul_ps(gv, gv),
                                    _mm256_mul_ps(b2, _mm256_loadu_ps(v + i)));
        _mm256_storeu_ps(m + i, mv);
        _mm256_storeu_ps(v + i, vv);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(_mm256_mul_ps(vv, bc2v)), epsv);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(lrv, _mm256_mul_ps(mv, bc1v)), denom);
        _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
    }
}

void clamp_f32(size_t n, float* x, float lo, float hi) {
    const __m256 lov = _mm256_set1_ps(lo), hiv = _mm256_set1_ps(hi);
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(x + i, _mm256_min_ps(_mm256_max_ps(_mm256_loadu_ps(x + i), lov), hiv));
    for (; i < n; ++i) x[i] = std::min(std::max(x[i], lo), hi);
}

float reduce_sum_f32(size_t n, const float* x) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    alignas(32) float lanes[8];
    _mm256_store_ps(lanes, acc);
    float s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
              ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
    for (; i < n; ++i) s += x[i];
    return s;
}

float reduce_sumsq_f32(size_t n, const float* x) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        acc = _mm256_fmadd_ps(v, v, acc);
    }
    alignas(32) float lanes[8];
    _mm256_store_ps(lanes, acc);
    float s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
              ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

// f64 elementwise

void axpby_f64(size_t n, double a, const double* x, double b, double* y) {
    const __m256d av = _mm256_set1_pd(a), bv = _mm256_set1_pd(b);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yv = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv));
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

// f32 8x8 in-register transpose for large activation matrices.
inline void transpose8x8_f32(const float* src, int scols, float* dst, int dcols) {
    __m256 r0 = _mm256_loadu_ps(src + 0 * scols);
    __m256 r1 = _mm256_loadu_ps(src + 1 * scols);
    __m256 r2 = _mm256_loadu_ps(src + 2 * scols);
    __m256 r3 = _mm256_loadu_ps(src + 3 * scols);
    __m256 r4 = _mm256_loadu_ps(src + 4 * scols);
    __m256 r5 = _mm256_loadu_ps(src + 5 * scols);
    __m256 r6 = _mm256_loadu_ps(src + 6 * scols);
    __m256 r7 = _mm256_loadu_ps(src + 7 * scols);
    __m256 t0 = _mm256_unpacklo_ps(r0, r1);
    __m256 t1 = _mm256_unpackhi_ps(r0, r1);
    __m256 t2 = _mm256_unpacklo_ps(r2, r3);
    __m256 t3 = _mm256_unpackhi_ps(r2, r3);
    __m256 t4 = _mm256_unpacklo_ps(r4, r5);
    __m256 t5 = _mm256_unpackhi_ps(r4, r5);
    __m256 t6 = _mm256_unpacklo_ps(r6, r7);
    __m256 t7 = _mm256_unpackhi_ps(r6, r7);
    __m256 s0 = _mm256_shuffle_ps(t0, t2, 0x44);
    __m256 s1 = _mm256_shuffle_ps(t0, t2, 0xEE);
    __m256 s2 = _mm256_shuffle_ps(t1, t3, 0x44);
    __m256 s3 = _mm256_shuffle_ps(t1, t3, 0xEE);
    __m256 s4 = _mm256_shuffle_ps(t4, t6, 0x44);
    __m256 s5 = _mm256_shuffle_ps(t4, t6, 0xEE);
    __m256 s6 = _mm256_shuffle_ps(t5, t7, 0x44);
    __m256 s7 = _mm256_shuffle_ps(t5, t7, 0xEE);
    _mm256_storeu_ps(dst + 0 * dcols, _mm256_permute2f128_ps(s0, s4, 0x20));
    _mm256_storeu_ps(dst + 1 * dcols, _mm256_permute2f128_ps(s1, s5, 0x20));
    _mm256_storeu_ps(dst + 2 * dcols, _mm256_permute2f128_ps(s2, s6, 0x20));
    _mm256_storeu_ps(dst + 3 * dcols, _mm256_permute2f128_ps(s3, s7, 0x20));
    _mm256_storeu_ps(dst + 4 * dcols, _mm256_permute2f128_ps(s0, s4, 0x31));
    _mm256_storeu_ps(dst + 5 * dcols, _mm256_permute2f128_ps(s1, s5, 0x31));
    _mm256_storeu_ps(dst + 6 * dcols, _mm256_permute2f128_ps(s2, s6, 0x31));
    _mm256_storeu_ps(dst + 7 * dcols, _mm256_permute2f128_ps(s3, s7, 0x31));
}

void transpose_f32(int rows, int cols, const float* src, float* dst) {
    const int rb = rows & ~7;
    const int cb = cols & ~7;
    for (int i = 0; i < rb; i += 8)
        for (int j = 0; j < cb; j += 8)
            transpose8x8_f32(src + static_cast<size_t>(i) * cols + j, cols,
                             dst + static_cast<size_t>(j) * rows + i, rows);
    for (int i = 0; i < rb; ++i)
        for (int j = cb; j < cols; ++j)
            dst[static_cast<size_t>(j) * rows + i] = src[static_cast<size_t>(i) * cols + j];
    for (int i = rb; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            dst[static_cast<size_t>(j) * rows + i] = src[static_cast<size_t>(i) * cols + j];
}

} // namespace

void detail::fill_avx2(Ops<float>& f, Ops<double>& d) {
    f.gemm = &gemm_f32;
    f.transpose = &transpose_f32;
    f.bias_add = &bias_add_f32;
    f.colsum = &colsum_f32;
    f.mish_fwd = &mish_fwd_f32;
    f.mish_bwd = &mish_bwd_f32;
    f.tanh_fwd = &tanh_fwd_f32;
    f.tanh_bwd = &tanh_bwd_f32;
    f.axpby = &axpby_f32;
    f.adam_step = &adam_step_f32;
    f.clamp = &clamp_f32;
    f.reduce_sum = &reduce_sum_f32;
    f.reduce_sumsq = &reduce_sumsq_f32;
    d.gemm = &gemm_f64;
    d.axpby = &axpby_f64;
    // remaining f64 slots keep the scalar reference (only used by small tests)
}

} // namespace dom2::kernels
