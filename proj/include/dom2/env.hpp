#pragma once

#include <array>
#include <string>
#include <vector>

#include "dom2/rng.hpp"
#include "dom2/tensor.hpp"

namespace dom2 {

enum class ShiftKind { none, speed, dismiss };

// Cooperative-navigation particle world: n agents, m fixed landmarks on the
// unit circle, episode of fixed length. Shifts are applied at reset: `speed`
// resamples each agent's max speed in [v_min, 1], `dismiss` hides k landmarks
// (hidden landmarks appear in observations at the sentinel offset).
struct EnvConfig {
    std::string env_id;
    int n_agents = 3;
    std::vector<std::array<double, 2>> landmarks;
    double agent_size = 0.1;
    double landmark_size = 0.1;
    int episode_length = 25;
    double dt = 0.1;
    double damping = 0.25;
    double accel = 5.0;
    double occupy_bonus = 5.0;
    double collision_penalty = 1.0;
    double max_speed = 1.0;
    double spawn_radius = 0.1;
    ShiftKind shift = ShiftKind::none;
    double speed_vmin = 0.3;
    int dismiss_k = 0;

    static constexpr double kSentinelOffset = 10.0;

    int n_landmarks() const { return static_cast<int>(landmarks.size()); }
    int obs_dim() const { return 4 + 2 * n_landmarks() + 2 * (n_agents - 1); }
    int action_dim() const { return 2; }

    void validate() const;
};

// Parses "coop_nav_3a6l", "coop_nav_3a3l" with optional "@speed=<v_min>" or
// "@dismiss=<k>" suffix. Landmark j of m sits at (cos(2 pi j/m), sin(2 pi j/m)).
EnvConfig parse_env_id(const std::string& id);

struct StepResult {
    Mat<double> obs;              // n_agents x obs_dim
    std::vector<double> rewards;  // per agent
    bool done = false;
    int collision_pairs = 0;
    std::vector<double> min_dists;
};

class Env {
  public:
    explicit Env(const EnvConfig& cfg);

    const EnvConfig& config() const { return cfg_; }

    // Deterministic given seed. Returns initial observations.
    Mat<double> reset(uint64_t seed);

    // actions: n_agents x 2 in [-1,1]; stepping after done is a contract error.
    StepResult step(const Mat<double>& actions);

    Mat<double> observations() const;

    int step_count() const { return step_count_; }
    bool done() const { return step_count_ >= cfg_.episode_length; }
    const std::vector<std::array<double, 2>>& positions() const { return pos_; }
    const std::vector<std::array<double, 2>>& velocities() const { return vel_; }
    const std::vector<bool>& active_landmarks() const { return active_; }
    const std::vector<double>& max_speeds() const { return max_speed_; }

  private:
    EnvConfig cfg_;
    Rng rng_;
    std::vector<std::array<double, 2>> pos_, vel_;
    std::vector<bool> active_;
    std::vector<double> max_speed_;
    int step_count_ = 0;
    bool was_reset_ = false;
};

enum class ScriptKind { expert, medium, random };

ScriptKind parse_script_kind(const std::string& s);

// Observation-driven behavior policies. The expert reconstructs all agent and
// landmark positions from its own observation and computes a globally
// consistent greedy assignment (ties resolved by agent index, then landmark
// index), then runs a PD controller toward its assigned landmark.
class ScriptedPolicy {
  public:
    ScriptedPolicy(ScriptKind kind, const EnvConfig& cfg, int agent_index, uint64_t noise_seed);

    std::array<double, 2> act(const double* obs);

    static constexpr double kP = 2.0;
    static constexpr double kD = 0.6;
    static constexpr double kMediumNoise = 0.5;

  private:
    ScriptKind kind_;
    EnvConfig cfg_;
    int agent_;
    Rng rng_;
};

} // namespace dom2
