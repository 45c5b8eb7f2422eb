#include "dom2/critic.hpp"

#include <cmath>

#include "dom2/errors.hpp"

namespace dom2 {

double logsumexp(const double* x, int n) {
    double mx = x[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, x[i]);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(x[i] - mx);
    return mx + std::log(s);
}

template <class T>
CriticPair<T>::CriticPair(const Config& cfg, Rng& init_rng) : cfg_(cfg) {
    DOM2_REQUIRE(cfg.m_samples >= 1, "CriticPair: need at least one regularizer sample");
    DOM2_REQUIRE(cfg.zeta >= 0.0, "CriticPair: zeta must be nonnegative");
    DOM2_REQUIRE(cfg.gamma >= 0.0 && cfg.gamma < 1.0, "CriticPair: gamma must be in [0,1)");
    typename QNetwork<T>::Config qc{cfg.obs_dim, cfg.action_dim, cfg.hidden};
    q1_ = QNetwork<T>(qc, init_rng);
    q2_ = QNetwork<T>(qc, init_rng);
    tq1_ = QNetwork<T>(qc, init_rng);
    tq2_ = QNetwork<T>(qc, init_rng);
    copy_net<T>(tq1_, q1_);
    copy_net<T>(tq2_, q2_);
    opt_ = Adam<T>(static_cast<T>(cfg.lr));
}

template <class T>
void CriticPair<T>::td_target(const Mat<T>& rew, const Mat<T>& obs_next, const Mat<T>& done,
                              const Mat<T>& a_next, Mat<T>& y) const {
    const int S = rew.rows();
    typename QNetwork<T>::Ctx c1, c2;
    tq1_.forward(obs_next, a_next, Mode::eval, c1);
    tq2_.forward(obs_next, a_next, Mode::eval, c2);
    y.resize(S, 1);
    const T gamma = static_cast<T>(cfg_.gamma);
    for (int i = 0; i < S; ++i) {
        const T qmin = std::min(c1.y(i, 0), c2.y(i, 0));
        y(i, 0) = rew(i, 0) + (T(1) - done(i, 0)) * gamma * qmin;
    }
}

template <class T>
typename CriticPair<T>::LossDiag CriticPair<T>::critic_loss_one(QNetwork<T>& q,
                                                                const Mat<T>& obs_cat,
                                                                const Mat<T>& act_cat,
                                                                const Mat<T>& y, int S,
                                                                bool with_grad) {
    const int M = cfg_.m_samples;
    typename QNetwork<T>::Ctx ctx;
    q.forward(obs_cat, act_cat, Mode::train, ctx);

    LossDiag d;
    dy_.resize(obs_cat.rows(), 1);
    dy_.zero();
    std::vector<double> qr(M);
    for (int s = 0; s < S; ++s) {
        const double qd = static_cast<double>(ctx.y(s, 0));
        const double resid = qd - static_cast<double>(y(s, 0));
        d.td += resid * resid;
        d.mean_q_data += qd;
        for (int m = 0; m < M; ++m) {
            qr[m] = static_cast<double>(ctx.y(S + s * M + m, 0));
            d.mean_q_random += qr[m];
        }
        double lse = logsumexp(qr.data(), M);
        if (cfg_.subtract_log_m) lse -= std::log(static_cast<double>(M));
        d.reg += lse - qd;
        if (with_grad) {
            dy_(s, 0) = static_cast<T>(2.0 * resid / S - cfg_.zeta / S);
            const double mx = *std::max_element(qr.begin(), qr.end());
            double denom = 0.0;
            for (int m = 0; m < M; ++m) denom += std::exp(qr[m] - mx);
            for (int m = 0; m < M; ++m)
                dy_(S + s * M + m, 0) =
                    static_cast<T>(cfg_.zeta / S * std::exp(qr[m] - mx) / denom);
        }
    }
    d.td /= S;
    d.reg /= S;
    d.mean_q_data /= S;
    d.mean_q_random /= static_cast<double>(S) * M;
    d.total = d.td + cfg_.zeta * d.reg;
    if (with_grad) q.backward(ctx, dy_, nullptr);
    return d;
}

template <class T>
typename CriticPair<T>::LossDiag CriticPair<T>::cql_loss(const Mat<T>& obs, const Mat<T>& act,
                                                         const Mat<T>& y, Rng& action_rng,
                                                         bool with_grad) {
    const int S = obs.rows();
    DOM2_REQUIRE(S > 0, "cql_loss: empty batch");
    const int M = cfg_.m_samples;
    const int da = cfg_.action_dim;

    obs_cat_.resize(S + S * M, cfg_.obs_dim);
    act_cat_.resize(S + S * M, da);
    for (int s = 0; s < S; ++s) {
        std::memcpy(obs_cat_.row(s), obs.row(s), cfg_.obs_dim * sizeof(T));
        std::memcpy(act_cat_.row(s), act.row(s), da * sizeof(T));
    }
    for (int s = 0; s < S; ++s) {
        for (int m = 0; m < M; ++m) {
            const int r = S + s * M + m;
            std::memcpy(obs_cat_.row(r), obs.row(s), cfg_.obs_dim * sizeof(T));
            action_rng.fill_uniform(act_cat_.row(r), da, -1.0, 1.0);
        }
    }
    // The local gradient scale is per-critic; averaging over k happens here.
    const LossDiag d1 = critic_loss_one(q1_, obs_cat_, act_cat_, y, S, with_grad);
    const LossDiag d2 = critic_loss_one(q2_, obs_cat_, act_cat_, y, S, with_grad);
    LossDiag d;
    d.total = 0.5 * (d1.total + d2.total);
    d.td = 0.5 * (d1.td + d2.td);
    d.reg = 0.5 * (d1.reg + d2.reg);
    d.mean_q_data = 0.5 * (d1.mean_q_data + d2.mean_q_data);
    d.mean_q_random = 0.5 * (d1.mean_q_random + d2.mean_q_random);
    return d;
}

template <class T>
typename CriticPair<T>::LossDiag CriticPair<T>::update(const Mat<T>& obs, const Mat<T>& act,
                                                       const Mat<T>& y, Rng& action_rng) {
    zero_grads(q1_.params());
    zero_grads(q2_.params());
    const LossDiag d = cql_loss(obs, act, y, action_rng, true);
    if (!std::isfinite(d.total))
        throw NumericError("critic update: non-finite loss (td=" + std::to_string(d.td) +
                           " reg=" + std::to_string(d.reg) + ")");
    auto params = q1_.params();
    const auto p2 = q2_.params();
    params.insert(params.end(), p2.begin(), p2.end());
    opt_.step(params);
    q1_.refresh_transposes();
    q2_.refresh_transposes();
    return d;
}

template <class T>
void CriticPair<T>::soft_update_targets(T rho) {
    soft_update<T>(tq1_.params(), const_cast<const QNetwork<T>&>(q1_).params(), rho);
    soft_update<T>(tq2_.params(), const_cast<const QNetwork<T>&>(q2_).params(), rho);
    tq1_.refresh_transposes();
    tq2_.refresh_transposes();
    tq1_.copy_running_stats_from(q1_);
    tq2_.copy_running_stats_from(q2_);
}

template <class T>
void CriticPair<T>::save(ByteWriter& w) const {
    q1_.save(w);
    q2_.save(w);
    tq1_.save(w);
    tq2_.save(w);
    opt_.save(w);
}

template <class T>
void CriticPair<T>::load(ByteReader& r) {
    q1_.load(r);
    q2_.load(r);
    tq1_.load(r);
    tq2_.load(r);
    opt_.load(r);
}

template class CriticPair<float>;
template class CriticPair<double>;

} // namespace dom2
