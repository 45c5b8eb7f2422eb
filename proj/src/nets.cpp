#include "dom2/nets.hpp"

#include <cmath>
#include <cstring>

#include "dom2/errors.hpp"

namespace dom2 {

namespace {
template <class T>
const kernels::Ops<T>& K() {
    return kernels::ops<T>();
}
} // namespace

// ------------------------------------------------------------------- Linear

template <class T>
void Linear<T>::init(const std::string& name, int in_dim, int out_dim, Rng& rng,
                     bool zero_init) {
    in = in_dim;
    out = out_dim;
    W.init(name + ".W", in, out);
    b.init(name + ".b", 1, out);
    if (zero_init) {
        W.w.zero();
        b.w.zero();
    } else {
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        rng.fill_uniform(W.w.data(), W.w.size(), -bound, bound);
        rng.fill_uniform(b.w.data(), b.w.size(), -bound, bound);
    }
    refresh_transpose();
}

template <class T>
void Linear<T>::refresh_transpose() {
    Wt.resize(out, in);
    K<T>().transpose(in, out, W.w.data(), Wt.data());
}

template <class T>
void Linear<T>::forward(const Mat<T>& X, Mat<T>& Y) const {
    Y.resize(X.rows(), out);
    K<T>().gemm(false, X.rows(), in, out, X.data(), W.w.data(), Y.data());
    K<T>().bias_add(X.rows(), out, Y.data(), b.w.data());
}

template <class T>
void Linear<T>::backward(const Mat<T>& X, const Mat<T>& dY, Mat<T>* dX, Mat<T>& scratch) {
    const int S = X.rows();
    scratch.resize(in, S);
    K<T>().transpose(S, in, X.data(), scratch.data());
    K<T>().gemm(true, in, S, out, scratch.data(), dY.data(), W.g.data());
    colbuf_.resize(1, out);
    K<T>().colsum(S, out, dY.data(), colbuf_.data());
    K<T>().axpby(out, T(1), colbuf_.data(), T(1), b.g.data());
    if (dX) {
        dX->resize(S, in);
        K<T>().gemm(false, S, out, in, dY.data(), Wt.data(), dX->data());
    }
}

// ---------------------------------------------------------------- BatchNorm

template <class T>
void BatchNorm<T>::init(const std::string& name, int d) {
    dim = d;
    gamma.init(name + ".gamma", 1, d);
    beta.init(name + ".beta", 1, d);
    gamma.w.fill(T(1));
    beta.w.zero();
    running_mean.resize(1, d);
    running_var.resize(1, d);
    running_mean.zero();
    running_var.fill(T(1));
}

template <class T>
void BatchNorm<T>::forward(const Mat<T>& X, Mat<T>& Y, Mode mode, Ctx& ctx) {
    const int S = X.rows();
    const int F = dim;
    DOM2_REQUIRE(X.cols() == F, "BatchNorm: feature dimension mismatch");
    Y.resize(S, F);
    ctx.xhat.resize(S, F);
    ctx.invstd.assign(F, T(0));
    ctx.mode = mode;

    std::vector<T> mean(F, T(0)), var(F, T(0));
    if (mode == Mode::train) {
        for (int i = 0; i < S; ++i) {
            const T* x = X.row(i);
            for (int f = 0; f < F; ++f) mean[f] += x[f];
        }
        for (int f = 0; f < F; ++f) mean[f] /= static_cast<T>(S);
        for (int i = 0; i < S; ++i) {
            const T* x = X.row(i);
            for (int f = 0; f < F; ++f) {
                const T d = x[f] - mean[f];
                var[f] += d * d;
            }
        }
        for (int f = 0; f < F; ++f) var[f] /= static_cast<T>(S);
        for (int f = 0; f < F; ++f) {
            running_mean.data()[f] = (T(1) - momentum) * running_mean.data()[f] + momentum * mean[f];
            const T uvar = S > 1 ? var[f] * static_cast<T>(S) / static_cast<T>(S - 1) : var[f];
            running_var.data()[f] = (T(1) - momentum) * running_var.data()[f] + momentum * uvar;
        }
    } else {
        for (int f = 0; f < F; ++f) {
            mean[f] = running_mean.data()[f];
            var[f] = running_var.data()[f];
        }
    }
    for (int f = 0; f < F; ++f)
        ctx.invstd[f] = T(1) / std::sqrt(var[f] + eps);
    for (int i = 0; i < S; ++i) {
        const T* x = X.row(i);
        T* xh = ctx.xhat.row(i);
        T* y = Y.row(i);
        for (int f = 0; f < F; ++f) {
            xh[f] = (x[f] - mean[f]) * ctx.invstd[f];
            y[f] = gamma.w.data()[f] * xh[f] + beta.w.data()[f];
        }
    }
}

template <class T>
void BatchNorm<T>::backward(const Ctx& ctx, const Mat<T>& dY, Mat<T>* dX) {
    const int S = dY.rows();
    const int F = dim;
    std::vector<T> sum_dy(F, T(0)), sum_dy_xhat(F, T(0));
    for (int i = 0; i < S; ++i) {
        const T* dy = dY.row(i);
        const T* xh = ctx.xhat.row(i);
        for (int f = 0; f < F; ++f) {
            sum_dy[f] += dy[f];
            sum_dy_xhat[f] += dy[f] * xh[f];
        }
    }
    for (int f = 0; f < F; ++f) {
        gamma.g.data()[f] += sum_dy_xhat[f];
        beta.g.data()[f] += sum_dy[f];
    }
    if (!dX) return;
    dX->resize(S, F);
    if (ctx.mode == Mode::train) {
        const T invS = T(1) / static_cast<T>(S);
        for (int i = 0; i < S; ++i) {
            const T* dy = dY.row(i);
            const T* xh = ctx.xhat.row(i);
            T* dx = dX->row(i);
            for (int f = 0; f < F; ++f) {
                dx[f] = gamma.w.data()[f] * ctx.invstd[f] *
                        (dy[f] - sum_dy[f] * invS - xh[f] * sum_dy_xhat[f] * invS);
            }
        }
    } else {
        for (int i = 0; i < S; ++i) {
            const T* dy = dY.row(i);
            T* dx = dX->row(i);
            for (int f = 0; f < F; ++f) dx[f] = dy[f] * gamma.w.data()[f] * ctx.invstd[f];
        }
    }
}

// ------------------------------------------------------------------ Dropout

template <class T>
void Dropout<T>::forward(Mat<T>& X, Mat<T>& mask, Mode mode, Rng* rng) const {
    if (mode == Mode::eval || rate <= T(0)) {
        mask.resize(0, 0);
        return;
    }
    DOM2_REQUIRE(rng != nullptr, "Dropout: training mode needs an rng stream");
    const size_t n = X.size();
    mask.resize(X.rows(), X.cols());
    const auto thr = static_cast<uint32_t>(
        std::llround(static_cast<double>(rate) * 4294967296.0));
    const T scale = T(1) / (T(1) - rate);
    T* x = X.data();
    T* m = mask.data();
    size_t i = 0;
    while (i < n) {
        const uint64_t r = rng->next_u64();
        for (int half = 0; half < 2 && i < n; ++half, ++i) {
            const auto lane = static_cast<uint32_t>(r >> (32 * half));
            const T mv = lane < thr ? T(0) : scale;
            m[i] = mv;
            x[i] *= mv;
        }
    }
}

template <class T>
void Dropout<T>::backward(const Mat<T>& mask, Mat<T>& dX) {
    if (mask.size() == 0) return;
    T* dx = dX.data();
    const T* m = mask.data();
    for (size_t i = 0; i < dX.size(); ++i) dx[i] *= m[i];
}

// ------------------------------------------------------------- ScoreNetwork

template <class T>
ScoreNetwork<T>::ScoreNetwork(const Config& cfg, Rng& rng) : cfg_(cfg) {
    DOM2_REQUIRE(cfg.action_dim > 0 && cfg.obs_dim > 0 && cfg.n_steps >= 1,
                 "ScoreNetwork: bad dimensions");
    const int din = cfg.action_dim + cfg.obs_dim + cfg.temb_dim;
    stem_.init("stem", din, cfg.hidden, rng, false);
    block_l1_.resize(cfg.blocks);
    block_l2_.resize(cfg.blocks);
    for (int k = 0; k < cfg.blocks; ++k) {
        block_l1_[k].init("block" + std::to_string(k) + ".l1", cfg.hidden, cfg.hidden, rng, false);
        block_l2_[k].init("block" + std::to_string(k) + ".l2", cfg.hidden, cfg.hidden, rng, false);
    }
    head_.init("head", cfg.hidden, cfg.action_dim, rng, true);

    // Sinusoidal embedding of the integer step index, precomputed for 0..N.
    temb_.resize(cfg.n_steps + 1, cfg.temb_dim);
    const int half = cfg.temb_dim / 2;
    for (int i = 0; i <= cfg.n_steps; ++i) {
        T* row = temb_.row(i);
        for (int k = 0; k < half; ++k) {
            const double freq =
                half > 1 ? std::exp(-std::log(10000.0) * k / (half - 1)) : 1.0;
            row[k] = static_cast<T>(std::sin(i * freq));
            row[half + k] = static_cast<T>(std::cos(i * freq));
        }
    }
}

template <class T>
void ScoreNetwork<T>::forward(const Mat<T>& a_noisy, const Mat<T>& obs, int idx,
                              const int* per_row_idx, Mode mode, Rng* dropout_rng,
                              Ctx& ctx) const {
    const int S = a_noisy.rows();
    const int da = cfg_.action_dim, dob = cfg_.obs_dim, dt = cfg_.temb_dim;
    DOM2_REQUIRE(a_noisy.cols() == da, "ScoreNetwork: action dim mismatch");
    DOM2_REQUIRE(obs.rows() == S && obs.cols() == dob, "ScoreNetwork: obs dim mismatch");
    ctx.mode = mode;
    ctx.x0.resize(S, da + dob + dt);
    for (int i = 0; i < S; ++i) {
        T* x = ctx.x0.row(i);
        std::memcpy(x, a_noisy.row(i), da * sizeof(T));
        std::memcpy(x + da, obs.row(i), dob * sizeof(T));
        const int id = per_row_idx ? per_row_idx[i] : idx;
        DOM2_REQUIRE(id >= 0 && id <= cfg_.n_steps, "ScoreNetwork: step index out of range");
        std::memcpy(x + da + dob, temb_.row(id), dt * sizeof(T));
    }
    const int B = cfg_.blocks;
    ctx.pre1.resize(B);
    ctx.m1.resize(B);
    ctx.pre2.resize(B);
    ctx.mask.resize(B);
    ctx.hout.resize(B);

    stem_.forward(ctx.x0, ctx.pre_stem);
    ctx.h_stem.resize(S, cfg_.hidden);
    K<T>().mish_fwd(ctx.pre_stem.size(), ctx.pre_stem.data(), ctx.h_stem.data());

    const Dropout<T> drop{cfg_.dropout};
    const Mat<T>* h = &ctx.h_stem;
    for (int k = 0; k < B; ++k) {
        block_l1_[k].forward(*h, ctx.pre1[k]);
        ctx.m1[k].resize(S, cfg_.hidden);
        K<T>().mish_fwd(ctx.pre1[k].size(), ctx.pre1[k].data(), ctx.m1[k].data());
        block_l2_[k].forward(ctx.m1[k], ctx.pre2[k]);
        ctx.hout[k] = ctx.pre2[k];
        K<T>().axpby(ctx.hout[k].size(), T(1), h->data(), T(1), ctx.hout[k].data());
        drop.forward(ctx.hout[k], ctx.mask[k], mode, dropout_rng);
        h = &ctx.hout[k];
    }
    head_.forward(*h, ctx.pre_head);
    ctx.eps.resize(S, da);
    K<T>().tanh_fwd(ctx.pre_head.size(), ctx.pre_head.data(), ctx.eps.data());
}

template <class T>
void ScoreNetwork<T>::backward(const Ctx& ctx, const Mat<T>& d_eps, Mat<T>* dA) {
    const int S = ctx.x0.rows();
    const int B = cfg_.blocks;
    dh_.resize(S, cfg_.hidden);
    dtmp_.resize(S, cfg_.hidden);

    dpre_head_.resize(S, cfg_.action_dim);
    K<T>().tanh_bwd(ctx.eps.size(), ctx.eps.data(), d_eps.data(), dpre_head_.data());
    const Mat<T>& h_last = B > 0 ? ctx.hout[B - 1] : ctx.h_stem;
    head_.backward(h_last, dpre_head_, &dh_, scratch_);

    for (int k = B - 1; k >= 0; --k) {
        if (ctx.mode == Mode::train) Dropout<T>::backward(ctx.mask[k], dh_);
        // dh_ now holds the gradient at r = hin + l2(mish(l1(hin)))
        block_l2_[k].backward(ctx.m1[k], dh_, &dtmp_, scratch_);
        dm1_.resize(S, cfg_.hidden);
        K<T>().mish_bwd(ctx.pre1[k].size(), ctx.pre1[k].data(), dtmp_.data(), dm1_.data());
        const Mat<T>& hin = k > 0 ? ctx.hout[k - 1] : ctx.h_stem;
        block_l1_[k].backward(hin, dm1_, &dtmp_, scratch_);
        K<T>().axpby(dh_.size(), T(1), dtmp_.data(), T(1), dh_.data());
    }
    dpre_stem_.resize(S, cfg_.hidden);
    K<T>().mish_bwd(ctx.pre_stem.size(), ctx.pre_stem.data(), dh_.data(), dpre_stem_.data());
    stem_.backward(ctx.x0, dpre_stem_, dA ? &dx0_ : nullptr, scratch_);
    if (dA) {
        dA->resize(S, cfg_.action_dim);
        for (int i = 0; i < S; ++i)
            std::memcpy(dA->row(i), dx0_.row(i), cfg_.action_dim * sizeof(T));
    }
}

template <class T>
std::vector<Param<T>*> ScoreNetwork<T>::params() {
    std::vector<Param<T>*> out{&stem_.W, &stem_.b};
    for (int k = 0; k < cfg_.blocks; ++k) {
        out.push_back(&block_l1_[k].W);
        out.push_back(&block_l1_[k].b);
        out.push_back(&block_l2_[k].W);
        out.push_back(&block_l2_[k].b);
    }
    out.push_back(&head_.W);
    out.push_back(&head_.b);
    return out;
}

template <class T>
std::vector<const Param<T>*> ScoreNetwork<T>::params() const {
    auto mut = const_cast<ScoreNetwork<T>*>(this)->params();
    return {mut.begin(), mut.end()};
}

template <class T>
void ScoreNetwork<T>::refresh_transposes() {
    stem_.refresh_transpose();
    for (int k = 0; k < cfg_.blocks; ++k) {
        block_l1_[k].refresh_transpose();
        block_l2_[k].refresh_transpose();
    }
    head_.refresh_transpose();
}

template <class T>
void ScoreNetwork<T>::save(ByteWriter& w) const {
    for (const auto* p : params()) {
        w.array(p->w.data(), p->w.size());
        w.array(p->m.data(), p->m.size());
        w.array(p->v.data(), p->v.size());
    }
}

template <class T>
void ScoreNetwork<T>::load(ByteReader& r) {
    for (auto* p : params()) {
        r.array(p->w.data(), p->w.size());
        r.array(p->m.data(), p->m.size());
        r.array(p->v.data(), p->v.size());
    }
    refresh_transposes();
}

// ----------------------------------------------------------------- QNetwork

template <class T>
QNetwork<T>::QNetwork(const Config& cfg, Rng& rng) : cfg_(cfg) {
    const int F = cfg.obs_dim + cfg.action_dim;
    bn_.init("bn", F);
    l1_.init("l1", F, cfg.hidden, rng, false);
    l2_.init("l2", cfg.hidden, cfg.hidden, rng, false);
    l3_.init("l3", cfg.hidden, 1, rng, true);
}

template <class T>
void QNetwork<T>::forward(const Mat<T>& obs, const Mat<T>& act, Mode mode, Ctx& ctx) const {
    const int S = obs.rows();
    DOM2_REQUIRE(obs.cols() == cfg_.obs_dim && act.cols() == cfg_.action_dim &&
                     act.rows() == S,
                 "QNetwork: input dim mismatch");
    ctx.mode = mode;
    ctx.x0.resize(S, cfg_.obs_dim + cfg_.action_dim);
    for (int i = 0; i < S; ++i) {
        std::memcpy(ctx.x0.row(i), obs.row(i), cfg_.obs_dim * sizeof(T));
        std::memcpy(ctx.x0.row(i) + cfg_.obs_dim, act.row(i), cfg_.action_dim * sizeof(T));
    }
    const_cast<BatchNorm<T>&>(bn_).forward(ctx.x0, ctx.xn, mode, ctx.bn);
    l1_.forward(ctx.xn, ctx.pre1);
    ctx.h1.resize(S, cfg_.hidden);
    K<T>().mish_fwd(ctx.pre1.size(), ctx.pre1.data(), ctx.h1.data());
    l2_.forward(ctx.h1, ctx.pre2);
    ctx.h2.resize(S, cfg_.hidden);
    K<T>().mish_fwd(ctx.pre2.size(), ctx.pre2.data(), ctx.h2.data());
    l3_.forward(ctx.h2, ctx.y);
}

template <class T>
void QNetwork<T>::backward(const Ctx& ctx, const Mat<T>& dy, Mat<T>* dA) {
    const int S = ctx.x0.rows();
    l3_.backward(ctx.h2, dy, &dh_, scratch_);
    dpre_.resize(S, cfg_.hidden);
    K<T>().mish_bwd(ctx.pre2.size(), ctx.pre2.data(), dh_.data(), dpre_.data());
    l2_.backward(ctx.h1, dpre_, &dh_, scratch_);
    dpre_.resize(S, cfg_.hidden);
    K<T>().mish_bwd(ctx.pre1.size(), ctx.pre1.data(), dh_.data(), dpre_.data());
    l1_.backward(ctx.xn, dpre_, &dxn_, scratch_);
    bn_.backward(ctx.bn, dxn_, dA ? &dx0_ : nullptr);
    if (dA) {
        dA->resize(S, cfg_.action_dim);
        for (int i = 0; i < S; ++i)
            std::memcpy(dA->row(i), dx0_.row(i) + cfg_.obs_dim, cfg_.action_dim * sizeof(T));
    }
}

template <class T>
std::vector<Param<T>*> QNetwork<T>::params() {
    return {&bn_.gamma, &bn_.beta, &l1_.W, &l1_.b, &l2_.W, &l2_.b, &l3_.W, &l3_.b};
}

template <class T>
std::vector<const Param<T>*> QNetwork<T>::params() const {
    auto mut = const_cast<QNetwork<T>*>(this)->params();
    return {mut.begin(), mut.end()};
}

template <class T>
void QNetwork<T>::refresh_transposes() {
    l1_.refresh_transpose();
    l2_.refresh_transpose();
    l3_.refresh_transpose();
}

template <class T>
void QNetwork<T>::save(ByteWriter& w) const {
    for (const auto* p : params()) {
        w.array(p->w.data(), p->w.size());
        w.array(p->m.data(), p->m.size());
        w.array(p->v.data(), p->v.size());
    }
    w.array(bn_.running_mean.data(), bn_.running_mean.size());
    w.array(bn_.running_var.data(), bn_.running_var.size());
}

template <class T>
void QNetwork<T>::load(ByteReader& r) {
    for (auto* p : params()) {
        r.array(p->w.data(), p->w.size());
        r.array(p->m.data(), p->m.size());
        r.array(p->v.data(), p->v.size());
    }
    r.array(bn_.running_mean.data(), bn_.running_mean.size());
    r.array(bn_.running_var.data(), bn_.running_var.size());
    refresh_transposes();
}

// ------------------------------------------------------- DeterministicActor

template <class T>
DeterministicActor<T>::DeterministicActor(const Config& cfg, Rng& rng) : cfg_(cfg) {
    bn_.init("bn", cfg.obs_dim);
    l1_.init("l1", cfg.obs_dim, cfg.hidden, rng, false);
    l2_.init("l2", cfg.hidden, cfg.hidden, rng, false);
    l3_.init("l3", cfg.hidden, cfg.action_dim, rng, true);
}

template <class T>
void DeterministicActor<T>::forward(const Mat<T>& obs, Mode mode, Ctx& ctx) const {
    const int S = obs.rows();
    DOM2_REQUIRE(obs.cols() == cfg_.obs_dim, "DeterministicActor: obs dim mismatch");
    ctx.mode = mode;
    const_cast<BatchNorm<T>&>(bn_).forward(obs, ctx.xn, mode, ctx.bn);
    l1_.forward(ctx.xn, ctx.pre1);
    ctx.h1.resize(S, cfg_.hidden);
    K<T>().mish_fwd(ctx.pre1.size(), ctx.pre1.data(), ctx.h1.data());
    l2_.forward(ctx.h1, ctx.pre2);
    ctx.h2.resize(S, cfg_.hidden);
    K<T>().mish_fwd(ctx.pre2.size(), ctx.pre2.data(), ctx.h2.data());
    l3_.forward(ctx.h2, ctx.pre3);
    ctx.a.resize(S, cfg_.action_dim);
    K<T>().tanh_fwd(ctx.pre3.size(), ctx.pre3.data(), ctx.a.data());
}

template <class T>
void DeterministicActor<T>::backward(const Ctx& ctx, const Mat<T>& dA) {
    const int S = ctx.a.rows();
    dpre3_.resize(S, cfg_.action_dim);
    K<T>().tanh_bwd(ctx.a.size(), ctx.a.data(), dA.data(), dpre3_.data());
    l3_.backward(ctx.h2, dpre3_, &dh_, scratch_);
    dpre_.resize(S, cfg_.hidden);
    K<T>().mish_bwd(ctx.pre2.size(), ctx.pre2.data(), dh_.data(), dpre_.data());
    l2_.backward(ctx.h1, dpre_, &dh_, scratch_);
    dpre_.resize(S, cfg_.hidden);
    K<T>().mish_bwd(ctx.pre1.size(), ctx.pre1.data(), dh_.data(), dpre_.data());
    l1_.backward(ctx.xn, dpre_, &dxn_, scratch_);
    bn_.backward(ctx.bn, dxn_, nullptr);
}

template <class T>
std::vector<Param<T>*> DeterministicActor<T>::params() {
    return {&bn_.gamma, &bn_.beta, &l1_.W, &l1_.b, &l2_.W, &l2_.b, &l3_.W, &l3_.b};
}

template <class T>
std::vector<const Param<T>*> DeterministicActor<T>::params() const {
    auto mut = const_cast<DeterministicActor<T>*>(this)->params();
    return {mut.begin(), mut.end()};
}

template <class T>
void DeterministicActor<T>::refresh_transposes() {
    l1_.refresh_transpose();
    l2_.refresh_transpose();
    l3_.refresh_transpose();
}

template <class T>
void DeterministicActor<T>::save(ByteWriter& w) const {
    for (const auto* p : params()) {
        w.array(p->w.data(), p->w.size());
        w.array(p->m.data(), p->m.size());
        w.array(p->v.data(), p->v.size());
    }
    w.array(bn_.running_mean.data(), bn_.running_mean.size());
    w.array(bn_.running_var.data(), bn_.running_var.size());
}

template <class T>
void DeterministicActor<T>::load(ByteReader& r) {
    for (auto* p : params()) {
        r.array(p->w.data(), p->w.size());
        r.array(p->m.data(), p->m.size());
        r.array(p->v.data(), p->v.size());
    }
    r.array(bn_.running_mean.data(), bn_.running_mean.size());
    r.array(bn_.running_var.data(), bn_.running_var.size());
    refresh_transposes();
}

// ------------------------------------------------------------------ helpers

template <class T>
void soft_update(std::vector<Param<T>*> target, std::vector<const Param<T>*> online, T rho) {
    DOM2_REQUIRE(target.size() == online.size(), "soft_update: parameter lists differ");
    for (size_t i = 0; i < target.size(); ++i) {
        DOM2_REQUIRE(target[i]->w.size() == online[i]->w.size(),
                     "soft_update: parameter shapes differ");
        kernels::ops<T>().axpby(target[i]->w.size(), rho, online[i]->w.data(), T(1) - rho,
                                target[i]->w.data());
    }
}

template <class T>
void zero_grads(std::vector<Param<T>*> params) {
    for (auto* p : params) p->g.zero();
}

template <class T>
void Adam<T>::step(std::vector<Param<T>*> params) {
    ++t_;
    const double b1t = std::pow(static_cast<double>(beta1_), static_cast<double>(t_));
    const double b2t = std::pow(static_cast<double>(beta2_), static_cast<double>(t_));
    const T bc1 = static_cast<T>(1.0 / (1.0 - b1t));
    const T bc2 = static_cast<T>(1.0 / (1.0 - b2t));
    for (auto* p : params)
        kernels::ops<T>().adam_step(p->w.size(), p->w.data(), p->m.data(), p->v.data(),
                                    p->g.data(), lr_, beta1_, beta2_, eps_, bc1, bc2);
}

// explicit instantiations
template struct Linear<float>;
template struct Linear<double>;
template struct BatchNorm<float>;
template struct BatchNorm<double>;
template struct Dropout<float>;
template struct Dropout<double>;
template class ScoreNetwork<float>;
template class ScoreNetwork<double>;
template class QNetwork<float>;
template class QNetwork<double>;
template class DeterministicActor<float>;
template class DeterministicActor<double>;
template class Adam<float>;
template class Adam<double>;
template void soft_update<float>(std::vector<Param<float>*>, std::vector<const Param<float>*>, float);
template void soft_update<double>(std::vector<Param<double>*>, std::vector<const Param<double>*>, double);
template void zero_grads<float>(std::vector<Param<float>*>);
template void zero_grads<double>(std::vector<Param<double>*>);

} // namespace dom2
