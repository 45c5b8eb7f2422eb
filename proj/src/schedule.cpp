#include "dom2/schedule.hpp"

#include <cmath>
#include <string>

#include "dom2/errors.hpp"

namespace dom2 {

NoiseSchedule::NoiseSchedule(int n_steps, double beta_min, double beta_max)
    : n_(n_steps), beta_min_(beta_min), beta_max_(beta_max) {
    if (n_steps < 1) throw ConfigError("NoiseSchedule: need at least 1 diffusion step");
    if (!(beta_min > 0.0) || !(beta_min < beta_max))
        throw ConfigError("NoiseSchedule: require 0 < beta_min < beta_max, got beta_min=" +
                          std::to_string(beta_min) + " beta_max=" + std::to_string(beta_max));
    tau_.resize(n_ + 1);
    beta_.resize(n_ + 1);
    alpha_.resize(n_ + 1);
    sigma_.resize(n_ + 1);
    lambda_.resize(n_ + 1);
    for (int i = 0; i <= n_; ++i) {
        tau_[i] = static_cast<double>(i) / n_;
        const double a = std::exp(h(tau_[i]));
        alpha_[i] = a;
        beta_[i] = 1.0 - a;
        sigma_[i] = std::sqrt(1.0 - a * a);
        lambda_[i] = std::log(alpha_[i] / sigma_[i]);
    }
}

double NoiseSchedule::h(double tau) const {
    const double n = static_cast<double>(n_);
    return -beta_min_ / (n + 1.0) -
           (beta_max_ - beta_min_) * (2.0 * n * tau + 1.0) / (2.0 * (n + 1.0) * (n + 1.0));
}

double NoiseSchedule::alpha_at(double tau) const { return std::exp(h(tau)); }

double NoiseSchedule::sigma_at(double tau) const {
    const double a = alpha_at(tau);
    return std::sqrt(1.0 - a * a);
}

std::pair<double, double> NoiseSchedule::drift_diffusion(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ContractError("drift_diffusion: tau outside [0,1]: " + std::to_string(tau));
    const double n = static_cast<double>(n_);
    const double f = -(beta_max_ - beta_min_) * n / ((n + 1.0) * (n + 1.0));
    return {f, -2.0 * f};
}

int NoiseSchedule::nearest_index(double tau) const {
    const double scaled = tau * n_;
    int i = static_cast<int>(std::floor(scaled + 0.5));
    if (i < 0) i = 0;
    if (i > n_) i = n_;
    return i;
}

} // namespace dom2
