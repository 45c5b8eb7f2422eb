#pragma once

#include "dom2/nets.hpp"
#include "dom2/rng.hpp"
#include "dom2/tensor.hpp"

namespace dom2 {

// Twin conservative critics with target copies. The TD term uses the minimum
// of the two target critics; the regularizer penalizes
// logsumexp over M uniform random actions minus the data action's Q.
template <class T>
class CriticPair {
  public:
    struct Config {
        int obs_dim = 0;
        int action_dim = 0;
        int hidden = 256;
        double gamma = 0.95;
        double zeta = 5.0;
        int m_samples = 10;
        bool subtract_log_m = false; // corrected regularizer mode
        double lr = 3e-4;
    };

    struct LossDiag {
        double total = 0.0;
        double td = 0.0;
        double reg = 0.0;
        double mean_q_data = 0.0;
        double mean_q_random = 0.0;
    };

    CriticPair() = default;
    CriticPair(const Config& cfg, Rng& init_rng);

    const Config& config() const { return cfg_; }

    // y = r + (1-done)*gamma*min_k targetQ_k(o', a'); evaluation mode, no
    // gradients reach the target parameters.
    void td_target(const Mat<T>& rew, const Mat<T>& obs_next, const Mat<T>& done,
                   const Mat<T>& a_next, Mat<T>& y) const;

    // Mean over both critics of TD + zeta * regularizer. Random actions are
    // uniform on [-1,1]^d_a, drawn once per batch and shared by both critics.
    // Accumulates gradients into the online critics when with_grad.
    LossDiag cql_loss(const Mat<T>& obs, const Mat<T>& act, const Mat<T>& y, Rng& action_rng,
                      bool with_grad);

    // Zero grads, compute cql_loss, divergence-guard, one Adam step on both
    // online critics. Targets untouched.
    LossDiag update(const Mat<T>& obs, const Mat<T>& act, const Mat<T>& y, Rng& action_rng);

    void soft_update_targets(T rho);

    QNetwork<T>& q1() { return q1_; }
    QNetwork<T>& q2() { return q2_; }
    const QNetwork<T>& q1() const { return q1_; }
    const QNetwork<T>& q2() const { return q2_; }
    QNetwork<T>& target_q1() { return tq1_; }
    QNetwork<T>& target_q2() { return tq2_; }
    const QNetwork<T>& target_q1() const { return tq1_; }
    const QNetwork<T>& target_q2() const { return tq2_; }
    Adam<T>& optimizer() { return opt_; }

    void save(ByteWriter& w) const;
    void load(ByteReader& r);

  private:
    LossDiag critic_loss_one(QNetwork<T>& q, const Mat<T>& obs_cat, const Mat<T>& act_cat,
                             const Mat<T>& y, int S, bool with_grad);

    Config cfg_;
    QNetwork<T> q1_, q2_, tq1_, tq2_;
    Adam<T> opt_;
    Mat<T> obs_cat_, act_cat_, dy_;
};

// Overflow-safe log(sum(exp(x))) over a contiguous range.
double logsumexp(const double* x, int n);

} // namespace dom2
