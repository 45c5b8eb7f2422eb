#pragma once

#include <vector>

#include "dom2/nets.hpp"
#include "dom2/rng.hpp"
#include "dom2/schedule.hpp"
#include "dom2/tensor.hpp"

namespace dom2 {

// Per-dtype coefficient tables for the denoising recursion
//   a^{tau_{i-1}} = ratio[i] * a^{tau_i} - eps_coef[i] * eps_hat(a^{tau_i}, o, i)
// with ratio[i] = alpha_{i-1}/alpha_i and
// eps_coef[i] = sigma_{i-1} * (exp(lambda_{i-1} - lambda_i) - 1), derived in
// double precision from the schedule and cast once.
template <class T>
struct DiffusionCoeffs {
    int n = 0;
    std::vector<T> alpha, sigma;   // index 0..N
    std::vector<T> ratio, eps_coef; // index 1..N (entry 0 unused)

    DiffusionCoeffs() = default;
    explicit DiffusionCoeffs(const NoiseSchedule& s);
};

// Everything produced by one batched denoising pass. `iterates[i]` holds
// a^{tau_i}; ctxs[i] is the network context of the step i -> i-1 (kept only
// when the caller needs gradients through the chain).
template <class T>
struct SampleChain {
    Mat<T> terminal;                 // a^{tau_N} draw
    std::vector<Mat<T>> iterates;    // size N+1
    std::vector<typename ScoreNetwork<T>::Ctx> ctxs; // size N+1, [i] for step i
    Mat<T> pre_clamp;                // a^{tau_0}
    Mat<T> action;                   // clamp(a^{tau_0}, -1, 1)
    bool has_ctx = false;
};

// Score-matching behavior-cloning loss. Per batch row draws a step index
// uniformly from {0..N} and eps ~ N(0,I), noises the action and regresses the
// network output onto eps. Accumulates d(loss)/d(theta) when with_grad.
template <class T>
double bc_loss(ScoreNetwork<T>& theta, const Mat<T>& obs, const Mat<T>& act,
               const DiffusionCoeffs<T>& c, Rng& noise_rng, Rng* dropout_rng, Mode mode,
               bool with_grad);

// First-order denoising from a fresh Gaussian terminal draw. Deterministic
// given (parameters, obs, rng state). keep_ctx retains per-step activations
// so chain_backward can run afterwards.
template <class T>
void sample_action(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                   const DiffusionCoeffs<T>& c, Rng& rng, Mode mode, Rng* dropout_rng,
                   SampleChain<T>& out, bool keep_ctx);

// Same denoising recursion but from a caller-supplied terminal value.
template <class T>
void sample_action_from(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                        const DiffusionCoeffs<T>& c, const Mat<T>& terminal, Mode mode,
                        Rng* dropout_rng, SampleChain<T>& out, bool keep_ctx);

// Reverse-mode pass through the whole chain: d_action is the gradient at the
// clamped output; parameter gradients accumulate into theta.
template <class T>
void chain_backward(ScoreNetwork<T>& theta, SampleChain<T>& chain, const Mat<T>& d_action,
                    const DiffusionCoeffs<T>& c);

// Fixed-step Euler integration of da/dtau = f(tau) a + g^2(tau)/(2 sigma_tau)
// * eps_hat(a, o, nearest grid index) backward from tau=1 to tau=0, starting
// at `terminal`. Test oracle for the denoising recursion.
template <class T>
void ode_oracle_sample(const ScoreNetwork<T>& theta, const Mat<T>& obs,
                       const NoiseSchedule& sched, const Mat<T>& terminal, int euler_steps,
                       Mat<T>& out);

enum class QNormMode { abs, paper };

struct QLossInfo {
    double loss = 0.0;
    double denom = 1.0;
    double eta_tilde = 0.0;
};

// Q-guided policy improvement term: -eta~ * mean Q(o, a^{tau_0}) with
// eta~ = eta / D. D is mean |Q(o, a_data)| floored at 1e-6 (QNormMode::abs)
// or the raw mean (QNormMode::paper; numerical-guard error when |D| < 1e-8).
// D is a constant (no gradient). The critic is used as a frozen evaluator in
// evaluation mode; gradients flow into theta through the full sampling chain.
template <class T>
QLossInfo q_loss(ScoreNetwork<T>& theta, QNetwork<T>& critic, const Mat<T>& obs,
                 const Mat<T>& act_data, const DiffusionCoeffs<T>& c, double eta,
                 QNormMode norm_mode, Rng& chain_rng, Rng* dropout_rng, Mode policy_mode,
                 bool with_grad);

struct PolicyLossInfo {
    double total = 0.0;
    double bc = 0.0;
    double q = 0.0;
};

// Combined loss on one batch: bc_loss + q_loss (q part skipped when eta == 0,
// which leaves gradients and rng streams untouched).
template <class T>
PolicyLossInfo policy_loss(ScoreNetwork<T>& theta, QNetwork<T>& critic, const Mat<T>& obs,
                           const Mat<T>& act_data, const DiffusionCoeffs<T>& c, double eta,
                           QNormMode norm_mode, Rng& bc_rng, Rng& chain_rng,
                           Rng* dropout_rng, Mode mode, bool with_grad);

} // namespace dom2
