#include "dom2/env.hpp"

#include <algorithm>
#include <cmath>

#include "dom2/errors.hpp"

namespace dom2 {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

void EnvConfig::validate() const {
    if (n_agents < 1) throw ConfigError("env: need at least one agent");
    if (landmarks.empty()) throw ConfigError("env: need at least one landmark");
    if (!(agent_size > 0.0) || !(landmark_size > 0.0)) throw ConfigError("env: sizes must be positive");
    if (!(dt > 0.0)) throw ConfigError("env: dt must be positive");
    if (!(damping >= 0.0 && damping < 1.0)) throw ConfigError("env: damping must be in [0,1)");
    if (episode_length < 1) throw ConfigError("env: episode_length must be positive");
    if (shift == ShiftKind::speed && !(speed_vmin > 0.0 && speed_vmin <= 1.0))
        throw ConfigError("env: speed shift needs v_min in (0,1]");
    if (shift == ShiftKind::dismiss && (dismiss_k < 0 || dismiss_k > n_landmarks()))
        throw ConfigError("env: dismiss count out of range");
}

EnvConfig parse_env_id(const std::string& id) {
    EnvConfig cfg;
    cfg.env_id = id;
    std::string base = id;
    std::string suffix;
    if (const auto at = id.find('@'); at != std::string::npos) {
        base = id.substr(0, at);
        suffix = id.substr(at + 1);
    }
    int m = 0;
    if (base == "coop_nav_3a6l") {
        cfg.n_agents = 3;
        m = 6;
    } else if (base == "coop_nav_3a3l") {
        cfg.n_agents = 3;
        m = 3;
    } else {
        throw ConfigError("unknown environment id: " + base);
    }
    cfg.landmarks.resize(m);
    for (int j = 0; j < m; ++j)
        cfg.landmarks[j] = {std::cos(kTwoPi * j / m), std::sin(kTwoPi * j / m)};
    if (!suffix.empty()) {
        const auto eq = suffix.find('=');
        if (eq == std::string::npos) throw ConfigError("bad env shift suffix: " + suffix);
        const std::string key = suffix.substr(0, eq);
        const std::string val = suffix.substr(eq + 1);
        try {
            if (key == "speed") {
                cfg.shift = ShiftKind::speed;
                cfg.speed_vmin = std::stod(val);
            } else if (key == "dismiss") {
                cfg.shift = ShiftKind::dismiss;
                cfg.dismiss_k = std::stoi(val);
            } else {
                throw ConfigError("unknown env shift: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad env shift value: " + suffix);
        }
    }
    cfg.validate();
    return cfg;
}

Env::Env(const EnvConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    pos_.resize(cfg_.n_agents);
    vel_.resize(cfg_.n_agents);
    active_.assign(cfg_.n_landmarks(), true);
    max_speed_.assign(cfg_.n_agents, cfg_.max_speed);
}

Mat<double> Env::reset(uint64_t seed) {
    rng_ = Rng::stream(seed, "env.reset");
    step_count_ = 0;
    was_reset_ = true;

    active_.assign(cfg_.n_landmarks(), true);
    max_speed_.assign(cfg_.n_agents, cfg_.max_speed);
    if (cfg_.shift == ShiftKind::dismiss) {
        // partial Fisher-Yates over landmark indices; first k drawn are hidden
        std::vector<int> idx(cfg_.n_landmarks());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        for (int t = 0; t < cfg_.dismiss_k; ++t) {
            const auto pick = t + static_cast<int>(rng_.below(idx.size() - t));
            std::swap(idx[t], idx[pick]);
            active_[idx[t]] = false;
        }
    } else if (cfg_.shift == ShiftKind::speed) {
        for (int j = 0; j < cfg_.n_agents; ++j)
            max_speed_[j] = rng_.uniform(cfg_.speed_vmin, 1.0);
    }
    for (int j = 0; j < cfg_.n_agents; ++j) {
        const double r = cfg_.spawn_radius * std::sqrt(rng_.uniform());
        const double th = kTwoPi * rng_.uniform();
        pos_[j] = {r * std::cos(th), r * std::sin(th)};
        vel_[j] = {0.0, 0.0};
    }
    return observations();
}

Mat<double> Env::observations() const {
    const int n = cfg_.n_agents;
    const int m = cfg_.n_landmarks();
    Mat<double> obs(n, cfg_.obs_dim());
    for (int j = 0; j < n; ++j) {
        double* o = obs.row(j);
        int k = 0;
        o[k++] = vel_[j][0];
        o[k++] = vel_[j][1];
        o[k++] = pos_[j][0];
        o[k++] = pos_[j][1];
        for (int l = 0; l < m; ++l) {
            if (active_[l]) {
                o[k++] = cfg_.landmarks[l][0] - pos_[j][0];
                o[k++] = cfg_.landmarks[l][1] - pos_[j][1];
            } else {
                o[k++] = EnvConfig::kSentinelOffset;
                o[k++] = EnvConfig::kSentinelOffset;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            o[k++] = pos_[i][0] - pos_[j][0];
            o[k++] = pos_[i][1] - pos_[j][1];
        }
    }
    return obs;
}

StepResult Env::step(const Mat<double>& actions) {
    DOM2_REQUIRE(was_reset_, "env: step before reset");
    if (done()) throw ContractError("env: step after episode end");
    DOM2_REQUIRE(actions.rows() == cfg_.n_agents && actions.cols() == 2,
                 "env: action matrix shape mismatch");
    const int n = cfg_.n_agents;
    for (int j = 0; j < n; ++j) {
        const double ax = std::clamp(actions(j, 0), -1.0, 1.0);
        const double ay = std::clamp(actions(j, 1), -1.0, 1.0);
        vel_[j][0] = (1.0 - cfg_.damping) * vel_[j][0] + ax * cfg_.accel * cfg_.dt;
        vel_[j][1] = (1.0 - cfg_.damping) * vel_[j][1] + ay * cfg_.accel * cfg_.dt;
        const double speed = std::hypot(vel_[j][0], vel_[j][1]);
        if (speed > max_speed_[j]) {
            const double scale = max_speed_[j] / speed;
            vel_[j][0] *= scale;
            vel_[j][1] *= scale;
        }
        pos_[j][0] += vel_[j][0] * cfg_.dt;
        pos_[j][1] += vel_[j][1] * cfg_.dt;
    }
    ++step_count_;

    StepResult res;
    res.rewards.assign(n, 0.0);
    res.min_dists.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (int l = 0; l < cfg_.n_landmarks(); ++l) {
            if (!active_[l]) continue;
            const double d = std::hypot(pos_[j][0] - cfg_.landmarks[l][0],
                                        pos_[j][1] - cfg_.landmarks[l][1]);
            min_dist = std::min(min_dist, d);
        }
        if (!std::isfinite(min_dist)) min_dist = 0.0; // all landmarks hidden
        res.min_dists[j] = min_dist;
        double r = -min_dist;
        if (min_dist < cfg_.agent_size + cfg_.landmark_size) r += cfg_.occupy_bonus;
        int collisions = 0;
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const double d = std::hypot(pos_[i][0] - pos_[j][0], pos_[i][1] - pos_[j][1]);
            if (d < 2.0 * cfg_.agent_size) ++collisions;
        }
        res.collision_pairs += collisions;
        r -= cfg_.collision_penalty * collisions;
        res.rewards[j] = r;
    }
    res.collision_pairs /= 2;
    res.done = done();
    res.obs = observations();
    return res;
}

ScriptKind parse_script_kind(const std::string& s) {
    if (s == "expert") return ScriptKind::expert;
    if (s == "medium") return ScriptKind::medium;
    if (s == "random") return ScriptKind::random;
    throw ConfigError("unknown behavior policy kind: " + s);
}

ScriptedPolicy::ScriptedPolicy(ScriptKind kind, const EnvConfig& cfg, int agent_index,
                               uint64_t noise_seed)
    : kind_(kind), cfg_(cfg), agent_(agent_index),
      rng_(Rng::stream(noise_seed, "script", agent_index)) {}

std::array<double, 2> ScriptedPolicy::act(const double* obs) {
    if (kind_ == ScriptKind::random)
        return {rng_.uniform(-1.0, 1.0), rng_.uniform(-1.0, 1.0)};

    const int n = cfg_.n_agents;
    const int m = cfg_.n_landmarks();
    const double vx = obs[0], vy = obs[1];
    const double px = obs[2], py = obs[3];

    std::vector<std::array<double, 2>> lm(m);
    std::vector<bool> active(m);
    for (int l = 0; l < m; ++l) {
        const double rx = obs[4 + 2 * l];
        const double ry = obs[4 + 2 * l + 1];
        active[l] = !(rx == EnvConfig::kSentinelOffset && ry == EnvConfig::kSentinelOffset);
        lm[l] = {px + rx, py + ry};
    }
    std::vector<std::array<double, 2>> agents(n);
    agents[agent_] = {px, py};
    int k = 4 + 2 * m;
    for (int i = 0; i < n; ++i) {
        if (i == agent_) continue;
        agents[i] = {px + obs[k], py + obs[k + 1]};
        k += 2;
    }

    // Greedy unique matching: repeatedly take the closest (agent, landmark)
    // pair; ties break toward the lower agent index, then lower landmark index.
    std::vector<int> assign(n, -1);
    std::vector<bool> agent_done(n, false), lm_taken(m, false);
    int active_count = 0;
    for (int l = 0; l < m; ++l)
        if (active[l]) ++active_count;
    const int rounds = std::min(n, active_count);
    for (int round = 0; round < rounds; ++round) {
        double best = std::numeric_limits<double>::infinity();
        int ba = -1, bl = -1;
        for (int a = 0; a < n; ++a) {
            if (agent_done[a]) continue;
            for (int l = 0; l < m; ++l) {
                if (!active[l] || lm_taken[l]) continue;
                const double d = std::hypot(agents[a][0] - lm[l][0], agents[a][1] - lm[l][1]);
                if (d < best) {
                    best = d;
                    ba = a;
                    bl = l;
                }
            }
        }
        assign[ba] = bl;
        agent_done[ba] = true;
        lm_taken[bl] = true;
    }
    // leftover agents (more agents than active landmarks) head to the nearest
    for (int a = 0; a < n; ++a) {
        if (assign[a] >= 0 || active_count == 0) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int l = 0; l < m; ++l) {
            if (!active[l]) continue;
            const double d = std::hypot(agents[a][0] - lm[l][0], agents[a][1] - lm[l][1]);
            if (d < best) {
                best = d;
                assign[a] = l;
            }
        }
    }

    double ax = 0.0, ay = 0.0;
    if (assign[agent_] >= 0) {
        const auto& target = lm[assign[agent_]];
        ax = kP * (target[0] - px) - kD * vx;
        ay = kP * (target[1] - py) - kD * vy;
    }
    ax = std::clamp(ax, -1.0, 1.0);
    ay = std::clamp(ay, -1.0, 1.0);
    if (kind_ == ScriptKind::medium) {
        ax = std::clamp(ax + kMediumNoise * rng_.gaussian(), -1.0, 1.0);
        ay = std::clamp(ay + kMediumNoise * rng_.gaussian(), -1.0, 1.0);
    }
    return {ax, ay};
}

} // namespace dom2
