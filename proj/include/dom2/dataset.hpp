#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dom2/env.hpp"
#include "dom2/rng.hpp"
#include "dom2/tensor.hpp"

namespace dom2 {

// One episode. Observations are step-major, agent-minor: obs row (t*n + j)
// holds agent j's observation at step t, t = 0..T (one extra row block for
// the final observation). Actions/rewards cover steps 0..T-1.
struct Trajectory {
    std::string env_id;
    uint64_t seed = 0;
    int n_agents = 0;
    int obs_dim = 0;
    int action_dim = 0;
    int length = 0;               // T
    Mat<double> obs;              // (T+1)*n x obs_dim
    Mat<double> actions;          // T*n x action_dim
    Mat<double> rewards;          // T x n
    std::vector<uint8_t> dones;   // T
    std::vector<double> returns;  // per agent, plain reward sums

    double joint_return() const {
        double s = 0.0;
        for (double r : returns) s += r;
        return s;
    }
};

struct DatasetManifest {
    int version = 1;
    std::string env_id;
    std::string generator;
    int episodes = 0;
    uint64_t seed = 0;
    std::string obs_encoding = "ego-v1";
    double sentinel_offset = EnvConfig::kSentinelOffset;
    // present on augmented datasets
    std::optional<std::vector<double>> augment_thresholds;
    std::optional<std::string> augment_return_kind;
};

// Trajectory list; duplicates introduced by augmentation are shared pointers
// to the same underlying episode, never copies.
struct Dataset {
    DatasetManifest manifest;
    std::vector<std::shared_ptr<const Trajectory>> trajs;

    size_t size() const { return trajs.size(); }
};

enum class DatasetQuality { medium_replay, medium, medium_expert, expert };
DatasetQuality parse_quality(const std::string& s);
std::string quality_name(DatasetQuality q);

enum class ReturnKind { joint, per_agent_mean };
ReturnKind parse_return_kind(const std::string& s);
double trajectory_return(const Trajectory& t, ReturnKind kind);

// Scripted-policy rollouts; deterministic given seed.
Dataset generate_dataset(const std::string& env_id, DatasetQuality quality, int episodes,
                         uint64_t seed);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// One extra copy of every trajectory per threshold it meets; the input is
// never modified. Duplicate thresholds each add their own copy.
Dataset augment(const Dataset& ds, const std::vector<double>& thresholds, ReturnKind kind);

// {q50, q70, q90} of the dataset's returns (nearest-rank quantiles).
std::vector<double> auto_thresholds(const Dataset& ds, ReturnKind kind);

// Flattened per-agent transitions with an index multiset over trajectory
// multiplicities; minibatches draw uniformly with replacement from the index.
template <class T>
class TransitionTable {
  public:
    TransitionTable() = default;
    explicit TransitionTable(const Dataset& ds);

    int n_agents() const { return n_agents_; }
    int obs_dim() const { return obs_dim_; }
    int action_dim() const { return action_dim_; }
    size_t index_size() const { return index_.size(); }
    size_t base_size() const { return base_count_; }

    void sample(int agent, int batch, Rng& rng, Mat<T>& obs, Mat<T>& act, Mat<T>& rew,
                Mat<T>& obs_next, Mat<T>& done) const;

  private:
    struct AgentData {
        Mat<T> obs, act, obs_next;
        std::vector<T> rew;
        std::vector<uint8_t> done;
    };
    std::vector<AgentData> agents_;
    std::vector<uint32_t> index_;
    size_t base_count_ = 0;
    int n_agents_ = 0, obs_dim_ = 0, action_dim_ = 0;
};

} // namespace dom2
