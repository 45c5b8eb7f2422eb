#pragma once

#include <utility>
#include <vector>

namespace dom2 {

// Discretized variance-preserving noise schedule on the uniform grid
// tau_i = i/N, i = 0..N, with
//   beta(tau)  = 1 - exp(h(tau)),
//   h(tau)     = -beta_min/(N+1) - (beta_max-beta_min)*(2*N*tau+1)/(2*(N+1)^2),
//   alpha      = 1 - beta = exp(h),  sigma^2 = 1 - alpha^2,
//   lambda     = log(alpha/sigma)  (strictly decreasing in i).
// The same h() provides the continuous extension used by the ODE oracle:
// f(tau) = h'(tau) (constant) and g^2(tau) = d(sigma^2)/dtau - 2*f*sigma^2,
// which simplifies to -2*h'(tau).
//
// All arithmetic is double precision; immutable after construction.
class NoiseSchedule {
  public:
    NoiseSchedule(int n_steps, double beta_min, double beta_max);

    static NoiseSchedule defaults(int n_steps) { return {n_steps, 0.1, 20.0}; }

    int n_steps() const { return n_; }
    double beta_min() const { return beta_min_; }
    double beta_max() const { return beta_max_; }

    double tau(int i) const { return tau_[i]; }
    double beta(int i) const { return beta_[i]; }
    double alpha(int i) const { return alpha_[i]; }
    double sigma(int i) const { return sigma_[i]; }
    double lambda(int i) const { return lambda_[i]; }

    // Continuous extension at tau in [0,1].
    double h(double tau) const;
    double alpha_at(double tau) const;
    double sigma_at(double tau) const;

    // (f, g^2) of the forward SDE at tau; throws outside [0,1].
    std::pair<double, double> drift_diffusion(double tau) const;

    // Grid index whose tau_i is nearest to tau (ties go to the larger index).
    int nearest_index(double tau) const;

  private:
    int n_;
    double beta_min_, beta_max_;
    std::vector<double> tau_, beta_, alpha_, sigma_, lambda_;
};

} // namespace dom2
