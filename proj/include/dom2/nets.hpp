#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dom2/kernels.hpp"
#include "dom2/rng.hpp"
#include "dom2/serialize.hpp"
#include "dom2/tensor.hpp"

namespace dom2 {

enum class Mode { train, eval };

template <class T>
struct Param {
    std::string name;
    Mat<T> w, g, m, v; // value, gradient, Adam moments

    void init(const std::string& n, int rows, int cols) {
        name = n;
        w.resize(rows, cols);
        g.resize(rows, cols);
        m.resize(rows, cols);
        v.resize(rows, cols);
        g.zero();
        m.zero();
        v.zero();
    }
};

// Fully-connected layer. Weights are stored input-major (in x out) so the
// forward pass is a plain row-major GEMM; a transposed copy is kept in sync
// for the input-gradient GEMM.
template <class T>
struct Linear {
    int in = 0, out = 0;
    Param<T> W, b;
    Mat<T> Wt; // out x in, refreshed after every weight change

    void init(const std::string& name, int in_dim, int out_dim, Rng& rng, bool zero_init);
    void refresh_transpose();
    // Y = X.W + b
    void forward(const Mat<T>& X, Mat<T>& Y) const;
    // Accumulates gW/gb; writes dX if non-null. scratch holds X^T.
    void backward(const Mat<T>& X, const Mat<T>& dY, Mat<T>* dX, Mat<T>& scratch);

  private:
    Mat<T> colbuf_;
};

// Batch normalization over features. Training mode normalizes by batch
// statistics and updates running statistics; evaluation mode uses the stored
// running statistics.
template <class T>
struct BatchNorm {
    int dim = 0;
    T momentum = T(0.1);
    T eps = T(1e-5);
    Param<T> gamma, beta;
    Mat<T> running_mean, running_var;

    struct Ctx {
        Mat<T> xhat;
        std::vector<T> invstd;
        Mode mode = Mode::train;
    };

    void init(const std::string& name, int d);
    void forward(const Mat<T>& X, Mat<T>& Y, Mode mode, Ctx& ctx);
    void backward(const Ctx& ctx, const Mat<T>& dY, Mat<T>* dX);
};

// Inverted dropout; the kept mask already carries the 1/(1-p) scale.
template <class T>
struct Dropout {
    T rate = T(0.1);

    void forward(Mat<T>& X, Mat<T>& mask, Mode mode, Rng* rng) const;
    static void backward(const Mat<T>& mask, Mat<T>& dX);
};

// Noise-prediction network: sinusoidal step embedding concatenated with the
// observation and noisy action, a stem layer, residual blocks with dropout
// after each block output, and a tanh-squashed head.
template <class T>
class ScoreNetwork {
  public:
    struct Config {
        int action_dim = 0;
        int obs_dim = 0;
        int n_steps = 0;       // diffusion step count N; valid indices 0..N
        int hidden = 256;
        int blocks = 3;
        int temb_dim = 32;
        T dropout = T(0.1);
    };

    struct Ctx {
        Mat<T> x0;                      // concatenated input
        Mat<T> pre_stem, h_stem;
        std::vector<Mat<T>> pre1, m1, pre2, hin, mask, hout;
        Mat<T> pre_head, eps;
        Mode mode = Mode::eval;
    };

    ScoreNetwork() = default;
    ScoreNetwork(const Config& cfg, Rng& rng);

    const Config& config() const { return cfg_; }

    // eps_hat = net(a_noisy, obs, step index). `idx` is per-row when
    // `per_row_idx` is non-null, otherwise `idx` applies to the whole batch.
    void forward(const Mat<T>& a_noisy, const Mat<T>& obs, int idx, const int* per_row_idx,
                 Mode mode, Rng* dropout_rng, Ctx& ctx) const;

    // Accumulates parameter gradients; if dA is non-null, writes the gradient
    // w.r.t. the noisy action input.
    void backward(const Ctx& ctx, const Mat<T>& d_eps, Mat<T>* dA);

    std::vector<Param<T>*> params();
    std::vector<const Param<T>*> params() const;
    void refresh_transposes();
    void save(ByteWriter& w) const;
    void load(ByteReader& r);

  private:
    Config cfg_;
    Linear<T> stem_, head_;
    std::vector<Linear<T>> block_l1_, block_l2_;
    Mat<T> temb_; // (N+1) x temb_dim
    Mat<T> scratch_, dh_, dtmp_, dm1_, dpre_stem_, dpre_head_, dx0_;
};

// Twin-style scalar critic: input batch norm, two Mish hidden layers, linear
// head (unbounded output).
template <class T>
class QNetwork {
  public:
    struct Config {
        int obs_dim = 0;
        int action_dim = 0;
        int hidden = 256;
    };

    struct Ctx {
        Mat<T> x0, xn;
        typename BatchNorm<T>::Ctx bn;
        Mat<T> pre1, h1, pre2, h2, y;
        Mode mode = Mode::eval;
    };

    QNetwork() = default;
    QNetwork(const Config& cfg, Rng& rng);

    const Config& config() const { return cfg_; }

    // y[S x 1] = Q(obs, action)
    void forward(const Mat<T>& obs, const Mat<T>& act, Mode mode, Ctx& ctx) const;
    // If dA is non-null, writes gradient w.r.t. the action slice of the input.
    void backward(const Ctx& ctx, const Mat<T>& dy, Mat<T>* dA);

    std::vector<Param<T>*> params();
    std::vector<const Param<T>*> params() const;
    void refresh_transposes();
    void copy_running_stats_from(const QNetwork& src) {
        bn_.running_mean = src.bn_.running_mean;
        bn_.running_var = src.bn_.running_var;
    }
    void save(ByteWriter& w) const;
    void load(ByteReader& r);

  private:
    Config cfg_;
    BatchNorm<T> bn_;
    Linear<T> l1_, l2_, l3_;
    Mat<T> scratch_, dh_, dpre_, dxn_, dx0_;
};

// Deterministic tanh actor for the TD3-style baseline.
template <class T>
class DeterministicActor {
  public:
    struct Config {
        int obs_dim = 0;
        int action_dim = 0;
        int hidden = 256;
    };

    struct Ctx {
        Mat<T> xn;
        typename BatchNorm<T>::Ctx bn;
        Mat<T> pre1, h1, pre2, h2, pre3, a;
        Mode mode = Mode::eval;
    };

    DeterministicActor() = default;
    DeterministicActor(const Config& cfg, Rng& rng);

    const Config& config() const { return cfg_; }

    void forward(const Mat<T>& obs, Mode mode, Ctx& ctx) const;
    void backward(const Ctx& ctx, const Mat<T>& dA);

    std::vector<Param<T>*> params();
    std::vector<const Param<T>*> params() const;
    void refresh_transposes();
    void copy_running_stats_from(const DeterministicActor& src) {
        bn_.running_mean = src.bn_.running_mean;
        bn_.running_var = src.bn_.running_var;
    }
    void save(ByteWriter& w) const;
    void load(ByteReader& r);

  private:
    Config cfg_;
    BatchNorm<T> bn_;
    Linear<T> l1_, l2_, l3_;
    Mat<T> scratch_, dh_, dpre_, dxn_, dpre3_;
};

// target <- rho*online + (1-rho)*target, elementwise over congruent params.
template <class T>
void soft_update(std::vector<Param<T>*> target, std::vector<const Param<T>*> online, T rho);

template <class T>
void zero_grads(std::vector<Param<T>*> params);

// Adam with bias correction; step count is part of the serialized state.
template <class T>
class Adam {
  public:
    Adam() = default;
    explicit Adam(T lr, T beta1 = T(0.9), T beta2 = T(0.999), T eps = T(1e-8))
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(std::vector<Param<T>*> params);
    uint64_t steps() const { return t_; }
    T lr() const { return lr_; }
    void save(ByteWriter& w) const { w.u64(t_); }
    void load(ByteReader& r) { t_ = r.u64(); }

  private:
    T lr_ = T(1e-3), beta1_ = T(0.9), beta2_ = T(0.999), eps_ = T(1e-8);
    uint64_t t_ = 0;
};

// Copies parameter values (and running statistics) between congruent nets.
template <class T, class Net>
void copy_net(Net& dst, const Net& src) {
    ByteWriter w;
    src.save(w);
    ByteReader r(w.buf.data(), w.buf.size());
    dst.load(r);
}

// Max relative error between analytic parameter gradients of `loss` and
// central finite differences over >=`samples` randomly chosen parameters.
// `loss` must recompute the scalar loss AND refill gradients when asked.
template <class T>
struct GradCheckReport {
    double max_rel_err = 0.0;
    int checked = 0;
    bool pass(double tol) const { return max_rel_err < tol; }
};

template <class T, class LossFn>
GradCheckReport<T> grad_check(std::vector<Param<T>*> params, LossFn&& loss, Rng& rng,
                              int samples = 50, double fd_step = 1e-5) {
    // Analytic gradients once.
    for (auto* p : params) p->g.zero();
    (void)loss(true);
    std::vector<Mat<T>> saved;
    saved.reserve(params.size());
    for (auto* p : params) saved.push_back(p->g);

    size_t total = 0;
    for (auto* p : params) total += p->w.size();
    GradCheckReport<T> rep;
    for (int s = 0; s < samples; ++s) {
        size_t flat = rng.below(total);
        size_t pi = 0;
        while (flat >= params[pi]->w.size()) {
            flat -= params[pi]->w.size();
            ++pi;
        }
        T* entry = params[pi]->w.data() + flat;
        const T orig = *entry;
        const double step = fd_step * std::max(1.0, std::abs(static_cast<double>(orig)));
        *entry = orig + static_cast<T>(step);
        const double lp = loss(false);
        *entry = orig - static_cast<T>(step);
        const double lm = loss(false);
        *entry = orig;
        const double fd = (lp - lm) / (2.0 * step);
        const double an = static_cast<double>(saved[pi].data()[flat]);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
        rep.max_rel_err = std::max(rep.max_rel_err, std::abs(fd - an) / denom);
        ++rep.checked;
    }
    return rep;
}

} // namespace dom2
