#include "dom2/diffusion.hpp"

#include <cmath>

#include "dom2/errors.hpp"

namespace dom2 {

namespace {
template <class T>
const kernels::Ops<T>& K() {
    return kernels::ops<T>();
}
} // namespace

template <class T>
DiffusionCoeffs<T>::DiffusionCoeffs(const NoiseSchedule& s) : n(s.n_steps()) {
    alpha.resize(n + 1);
    sigma.resize(n + 1);
    ratio.resize(n + 1);
    eps_coef.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        alpha[i] = static_cast<T>(s.alpha(i));
        sigma[i] = static_cast<T>(s.sigma(i));
    }
    ratio[0] = T(0);
    eps_coef[0] = T(0);
    for (int i = 1; i <= n; ++i) {
        ratio[i] = static_cast<T>(s.alpha(i - 1) / s.alpha(i));
        eps_coef[i] =
            static_cast<T>(s.sigma(i - 1) * (std::exp(s.lambda(i - 1) - s.lambda(i)) - 1.0));
    }
}

template <class T>
double bc_loss(ScoreNetwork<T>& theta, const Mat<T>& obs, const Mat<T>& act,
               const DiffusionCoeffs<T>& c, Rng& noise_rng, Rng* dropout_rng, Mode mode,
               bool with_grad) {
    const int S = obs.rows();
    DOM2_REQUIRE(S > 0, "bc_loss: empty batch");
    const int da = theta.config().action_dim;
    DOM2_REQUIRE(act.rows() == S && act.cols() == da, "bc_loss: action batch mismatch");

    Mat<T> eps(S, da), a_noisy(S, da);
    std::vector<int> idx(S);
    for (int r = 0; r < S; ++r) {
        idx[r] = static_cast<int>(noise_rng.below(static_cast<uint64_t>(c.n) + 1));
        noise_rng.fill_gaussian(eps.row(r), da);
        const T av = c.alpha[idx[r]];
        const T sv = c.sigma[idx[r]];
        for (int j = 0; j < da; ++j) a_noisy(r, j) = av * act(r, j) + sv * eps(r, j);
    }
    typename ScoreNetwork<T>::Ctx ctx;
    theta.forward(a_noisy, obs, 0, idx.data(), mode, dropout_rng, ctx);

    double loss = 0.0;
    Mat<T> d_eps_hat(S, da);
    for (int r = 0; r < S; ++r) {
        for (int j = 0; j < da; ++j) {
            const double diff = static_cast<double>(ctx.eps(r, j)) - static_cast<double>(eps(r, j));
            loss += diff * diff;
            d_eps_hat(r, j) = static_cast<T>(2.0 * diff / S);
        }
    }
    loss /= S;
    if (with_grad) theta.backward(ctx, d_eps_hat, nullptr);
    return loss;
}

template <class T>
void sample_action_from(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                        const DiffusionCoeffs<T>& c, const Mat<T>& terminal, Mode mode,
                        Rng* dropout_rng, SampleChain<T>& out, bool keep_ctx) {
    const int S = obs.rows();
    const int da = theta.config().action_dim;
    const int N = c.n;
    DOM2_REQUIRE(theta.config().n_steps == N, "sample_action: schedule/network step mismatch");
    DOM2_REQUIRE(terminal.rows() == S && terminal.cols() == da,
                 "sample_action: terminal noise shape mismatch");

    out.terminal = terminal;
    out.has_ctx = keep_ctx;
    out.iterates.resize(N + 1);
    if (keep_ctx) out.ctxs.resize(N + 1);
    out.iterates[N] = terminal;

    typename ScoreNetwork<T>::Ctx local_ctx;
    for (int i = N; i >= 1; --i) {
        auto& ctx = keep_ctx ? out.ctxs[i] : local_ctx;
        theta.forward(out.iterates[i], obs, i, nullptr, mode, dropout_rng, ctx);
        Mat<T>& next = out.iterates[i - 1];
        next.resize(S, da);
        const T r = c.ratio[i];
        const T e = c.eps_coef[i];
        const T* cur = out.iterates[i].data();
        const T* eh = ctx.eps.data();
        T* nx = next.data();
        for (size_t t = 0; t < next.size(); ++t) nx[t] = r * cur[t] - e * eh[t];
    }
    out.pre_clamp = out.iterates[0];
    out.action = out.pre_clamp;
    K<T>().clamp(out.action.size(), out.action.data(), T(-1), T(1));
}

template <class T>
void sample_action(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                   const DiffusionCoeffs<T>& c, Rng& rng, Mode mode, Rng* dropout_rng,
                   SampleChain<T>& out, bool keep_ctx) {
    Mat<T> terminal(obs.rows(), theta.config().action_dim);
    rng.fill_gaussian(terminal.data(), terminal.size());
    sample_action_from(theta, obs, c, terminal, mode, dropout_rng, out, keep_ctx);
}

template <class T>
void chain_backward(ScoreNetwork<T>& theta, SampleChain<T>& chain, const Mat<T>& d_action,
                    const DiffusionCoeffs<T>& c) {
    DOM2_REQUIRE(chain.has_ctx, "chain_backward: chain was sampled without contexts");
    const int N = c.n;
    const size_t n = d_action.size();

    // clamp subgradient: pass-through inside [-1,1]
    Mat<T> g = d_action;
    {
        const T* pc = chain.pre_clamp.data();
        T* gd = g.data();
        for (size_t t = 0; t < n; ++t)
            if (pc[t] < T(-1) || pc[t] > T(1)) gd[t] = T(0);
    }
    Mat<T> d_eps(d_action.rows(), d_action.cols());
    Mat<T> ga_net;
    for (int i = 1; i <= N; ++i) {
        const T e = c.eps_coef[i];
        const T r = c.ratio[i];
        const T* gd = g.data();
        T* de = d_eps.data();
        for (size_t t = 0; t < n; ++t) de[t] = -e * gd[t];
        theta.backward(chain.ctxs[i], d_eps, &ga_net);
        T* gmut = g.data();
        const T* ga = ga_net.data();
        for (size_t t = 0; t < n; ++t) gmut[t] = r * gmut[t] + ga[t];
    }
}

template <class T>
void ode_oracle_sample(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                       const NoiseSchedule& sched, const Mat<T>& terminal, int euler_steps,
                       Mat<T>& out) {
    DOM2_REQUIRE(euler_steps >= 1, "ode_oracle_sample: need at least one step");
    const double dt = 1.0 / euler_steps;
    out = terminal;
    typename ScoreNetwork<T>::Ctx ctx;
    for (int s = 0; s < euler_steps; ++s) {
        const double tau = 1.0 - s * dt;
        const auto [f, g2] = sched.drift_diffusion(tau);
        const double sig = sched.sigma_at(tau);
        const int idx = sched.nearest_index(tau);
        theta.forward(out, obs, idx, nullptr, Mode::eval, nullptr, ctx);
        const double cf = g2 / (2.0 * sig);
        T* a = out.data();
        const T* eh = ctx.eps.data();
        for (size_t t = 0; t < out.size(); ++t) {
            const double deriv = f * static_cast<double>(a[t]) + cf * static_cast<double>(eh[t]);
            a[t] = static_cast<T>(static_cast<double>(a[t]) - dt * deriv);
        }
    }
}

template <class T>
QLossInfo q_loss(ScoreNetwork<T>& theta, QNetwork<T>& critic, const Mat<T>& obs,
                 const Mat<T>& act_data, const DiffusionCoeffs<T>& c, double eta,
                 QNormMode norm_mode, Rng& chain_rng, Rng* dropout_rng, Mode policy_mode,
                 bool with_grad) {
    const int S = obs.rows();
    DOM2_REQUIRE(S > 0, "q_loss: empty batch");
    QLossInfo info;
    if (eta == 0.0) return info;

    // normalization constant from the dataset actions (stop-gradient)
    typename QNetwork<T>::Ctx qctx;
    critic.forward(obs, act_data, Mode::eval, qctx);
    double d = 0.0;
    for (int r = 0; r < S; ++r) {
        const double q = static_cast<double>(qctx.y(r, 0));
        d += norm_mode == QNormMode::abs ? std::abs(q) : q;
    }
    d /= S;
    if (norm_mode == QNormMode::abs) {
        d = std::max(d, 1e-6);
    } else if (std::abs(d) < 1e-8) {
        throw NumericError("q_loss: paper-mode normalizer too close to zero");
    }
    info.denom = d;
    info.eta_tilde = eta / d;

    SampleChain<T> chain;
    sample_action(theta, obs, c, chain_rng, policy_mode, dropout_rng, chain, with_grad);

    critic.forward(obs, chain.action, Mode::eval, qctx);
    double mean_q = 0.0;
    for (int r = 0; r < S; ++r) mean_q += static_cast<double>(qctx.y(r, 0));
    mean_q /= S;
    info.loss = -info.eta_tilde * mean_q;

    if (with_grad) {
        Mat<T> dq(S, 1);
        dq.fill(static_cast<T>(-info.eta_tilde / S));
        Mat<T> d_action;
        critic.backward(qctx, dq, &d_action);
        chain_backward(theta, chain, d_action, c);
    }
    return info;
}

template <class T>
PolicyLossInfo policy_loss(ScoreNetwork<T>& theta, QNetwork<T>& critic, const Mat<T>& obs,
                           const Mat<T>& act_data, const DiffusionCoeffs<T>& c, double eta,
                           QNormMode norm_mode, Rng& bc_rng, Rng& chain_rng,
                           Rng* dropout_rng, Mode mode, bool with_grad) {
    PolicyLossInfo info;
    info.bc = bc_loss(theta, obs, act_data, c, bc_rng, dropout_rng, mode, with_grad);
    if (eta != 0.0) {
        info.q = q_loss(theta, critic, obs, act_data, c, eta, norm_mode, chain_rng,
                        dropout_rng, mode, with_grad)
                     .loss;
    }
    info.total = info.bc + info.q;
    return info;
}

// explicit instantiations
template struct DiffusionCoeffs<float>;
template struct DiffusionCoeffs<double>;
template double bc_loss<float>(ScoreNetwork<float>&, const Mat<float>&, const Mat<float>&,
                               const DiffusionCoeffs<float>&, Rng&, Rng*, Mode, bool);
template double bc_loss<double>(ScoreNetwork<double>&, const Mat<double>&, const Mat<double>&,
                                const DiffusionCoeffs<double>&, Rng&, Rng*, Mode, bool);
template void sample_action<float>(const ScoreNetwork<float>&, const Mat<float>&,
                                   const DiffusionCoeffs<float>&, Rng&, Mode, Rng*,
                                   SampleChain<float>&, bool);
template void sample_action<double>(const ScoreNetwork<double>&, const Mat<double>&,
                                    const DiffusionCoeffs<double>&, Rng&, Mode, Rng*,
                                    SampleChain<double>&, bool);
template void sample_action_from<float>(const ScoreNetwork<float>&, const Mat<float>&,
                                        const DiffusionCoeffs<float>&, const Mat<float>&, Mode,
                                        Rng*, SampleChain<float>&, bool);
template void sample_action_from<double>(const ScoreNetwork<double>&, const Mat<double>&,
                                         const DiffusionCoeffs<double>&, const Mat<double>&,
                                         Mode, Rng*, SampleChain<double>&, bool);
template void chain_backward<float>(ScoreNetwork<float>&, SampleChain<float>&,
                                    const Mat<float>&, const DiffusionCoeffs<float>&);
template void chain_backward<double>(ScoreNetwork<double>&, SampleChain<double>&,
                                     const Mat<double>&, const DiffusionCoeffs<double>&);
template void ode_oracle_sample<float>(const ScoreNetwork<float>&, const Mat<float>&,
                                       const NoiseSchedule&, const Mat<float>&, int,
                                       Mat<float>&);
template void ode_oracle_sample<double>(const ScoreNetwork<double>&, const Mat<double>&,
                                        const NoiseSchedule&, const Mat<double>&, int,
                                        Mat<double>&);
template QLossInfo q_loss<float>(ScoreNetwork<float>&, QNetwork<float>&, const Mat<float>&,
                                 const Mat<float>&, const DiffusionCoeffs<float>&, double,
                                 QNormMode, Rng&, Rng*, Mode, bool);
template QLossInfo q_loss<double>(ScoreNetwork<double>&, QNetwork<double>&,
                                  const Mat<double>&, const Mat<double>&,
                                  const DiffusionCoeffs<double>&, double, QNormMode, Rng&,
                                  Rng*, Mode, bool);
template PolicyLossInfo policy_loss<float>(ScoreNetwork<float>&, QNetwork<float>&,
                                           const Mat<float>&, const Mat<float>&,
                                           const DiffusionCoeffs<float>&, double, QNormMode,
                                           Rng&, Rng&, Rng*, Mode, bool);
template PolicyLossInfo policy_loss<double>(ScoreNetwork<double>&, QNetwork<double>&,
                                            const Mat<double>&, const Mat<double>&,
                                            const DiffusionCoeffs<double>&, double, QNormMode,
                                            Rng&, Rng&, Rng*, Mode, bool);

} // namespace dom2
