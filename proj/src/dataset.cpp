#include "dom2/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dom2/errors.hpp"
#include "dom2/jsonl.hpp"

namespace dom2 {

using json = nlohmann::json;

DatasetQuality parse_quality(const std::string& s) {
    if (s == "medium-replay") return DatasetQuality::medium_replay;
    if (s == "medium") return DatasetQuality::medium;
    if (s == "medium-expert") return DatasetQuality::medium_expert;
    if (s == "expert") return DatasetQuality::expert;
    throw ConfigError("unknown dataset quality: " + s);
}

std::string quality_name(DatasetQuality q) {
    switch (q) {
        case DatasetQuality::medium_replay: return "medium-replay";
        case DatasetQuality::medium: return "medium";
        case DatasetQuality::medium_expert: return "medium-expert";
        case DatasetQuality::expert: return "expert";
    }
    return "?";
}

ReturnKind parse_return_kind(const std::string& s) {
    if (s == "joint") return ReturnKind::joint;
    if (s == "per-agent-mean") return ReturnKind::per_agent_mean;
    throw ConfigError("unknown return kind: " + s);
}

double trajectory_return(const Trajectory& t, ReturnKind kind) {
    const double joint = t.joint_return();
    return kind == ReturnKind::joint ? joint : joint / t.n_agents;
}

namespace {

std::shared_ptr<Trajectory> roll_episode(Env& env, ScriptKind kind, uint64_t env_seed,
                                         uint64_t policy_seed) {
    const auto& cfg = env.config();
    const int n = cfg.n_agents;
    const int T = cfg.episode_length;
    auto traj = std::make_shared<Trajectory>();
    traj->env_id = cfg.env_id;
    traj->seed = env_seed;
    traj->n_agents = n;
    traj->obs_dim = cfg.obs_dim();
    traj->action_dim = cfg.action_dim();
    traj->length = T;
    traj->obs.resize((T + 1) * n, cfg.obs_dim());
    traj->actions.resize(T * n, cfg.action_dim());
    traj->rewards.resize(T, n);
    traj->dones.assign(T, 0);
    traj->returns.assign(n, 0.0);

    std::vector<ScriptedPolicy> pols;
    pols.reserve(n);
    for (int j = 0; j < n; ++j) pols.emplace_back(kind, cfg, j, policy_seed);

    Mat<double> obs = env.reset(env_seed);
    Mat<double> actions(n, 2);
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < n; ++j)
            std::memcpy(traj->obs.row(t * n + j), obs.row(j), cfg.obs_dim() * sizeof(double));
        for (int j = 0; j < n; ++j) {
            auto a = pols[j].act(obs.row(j));
            actions(j, 0) = a[0];
            actions(j, 1) = a[1];
            traj->actions(t * n + j, 0) = a[0];
            traj->actions(t * n + j, 1) = a[1];
        }
        StepResult res = env.step(actions);
        for (int j = 0; j < n; ++j) {
            traj->rewards(t, j) = res.rewards[j];
            traj->returns[j] += res.rewards[j];
        }
        traj->dones[t] = res.done ? 1 : 0;
        obs = res.obs;
    }
    return traj;
}

// Expert base plus annealed Gaussian noise, for the replay-style tier.
std::shared_ptr<Trajectory> roll_noisy_episode(Env& env, double sigma, uint64_t env_seed,
                                               uint64_t policy_seed) {
    const auto& cfg = env.config();
    const int n = cfg.n_agents;
    const int T = cfg.episode_length;
    auto traj = std::make_shared<Trajectory>();
    traj->env_id = cfg.env_id;
    traj->seed = env_seed;
    traj->n_agents = n;
    traj->obs_dim = cfg.obs_dim();
    traj->action_dim = cfg.action_dim();
    traj->length = T;
    traj->obs.resize((T + 1) * n, cfg.obs_dim());
    traj->actions.resize(T * n, cfg.action_dim());
    traj->rewards.resize(T, n);
    traj->dones.assign(T, 0);
    traj->returns.assign(n, 0.0);

    std::vector<ScriptedPolicy> pols;
    std::vector<Rng> noise;
    pols.reserve(n);
    for (int j = 0; j < n; ++j) {
        pols.emplace_back(ScriptKind::expert, cfg, j, policy_seed);
        noise.push_back(Rng::stream(policy_seed, "replay.noise", j));
    }
    Mat<double> obs = env.reset(env_seed);
    Mat<double> actions(n, 2);
    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < n; ++j)
            std::memcpy(traj->obs.row(t * n + j), obs.row(j), cfg.obs_dim() * sizeof(double));
        for (int j = 0; j < n; ++j) {
            auto a = pols[j].act(obs.row(j));
            a[0] = std::clamp(a[0] + sigma * noise[j].gaussian(), -1.0, 1.0);
            a[1] = std::clamp(a[1] + sigma * noise[j].gaussian(), -1.0, 1.0);
            actions(j, 0) = a[0];
            actions(j, 1) = a[1];
            traj->actions(t * n + j, 0) = a[0];
            traj->actions(t * n + j, 1) = a[1];
        }
        StepResult res = env.step(actions);
        for (int j = 0; j < n; ++j) {
            traj->rewards(t, j) = res.rewards[j];
            traj->returns[j] += res.rewards[j];
        }
        traj->dones[t] = res.done ? 1 : 0;
        obs = res.obs;
    }
    return traj;
}

} // namespace

Dataset generate_dataset(const std::string& env_id, DatasetQuality quality, int episodes,
                         uint64_t seed) {
    if (episodes <= 0) throw ConfigError("generate_dataset: episodes must be positive");
    EnvConfig cfg = parse_env_id(env_id);
    Env env(cfg);

    Dataset ds;
    ds.manifest.env_id = env_id;
    ds.manifest.generator = quality_name(quality);
    ds.manifest.episodes = episodes;
    ds.manifest.seed = seed;
    ds.trajs.reserve(episodes);

    for (int e = 0; e < episodes; ++e) {
        const uint64_t env_seed = Rng::splitmix64_once(seed ^ 0x6765656eULL, e);
        const uint64_t pol_seed = Rng::splitmix64_once(seed ^ 0x706f6cULL, e);
        switch (quality) {
            case DatasetQuality::expert:
                ds.trajs.push_back(roll_episode(env, ScriptKind::expert, env_seed, pol_seed));
                break;
            case DatasetQuality::medium:
                ds.trajs.push_back(roll_episode(env, ScriptKind::medium, env_seed, pol_seed));
                break;
            case DatasetQuality::medium_expert:
                ds.trajs.push_back(roll_episode(
                    env, e % 2 == 0 ? ScriptKind::expert : ScriptKind::medium, env_seed,
                    pol_seed));
                break;
            case DatasetQuality::medium_replay: {
                const double frac = episodes > 1 ? static_cast<double>(e) / (episodes - 1) : 1.0;
                const double sigma = 1.5 + (0.5 - 1.5) * frac;
                ds.trajs.push_back(roll_noisy_episode(env, sigma, env_seed, pol_seed));
                break;
            }
        }
    }
    return ds;
}

namespace {

json manifest_to_json(const DatasetManifest& m) {
    json j;
    j["version"] = m.version;
    j["env_id"] = m.env_id;
    j["generator"] = m.generator;
    j["episodes"] = m.episodes;
    j["seed"] = m.seed;
    j["obs_encoding"] = {{"version", m.obs_encoding}, {"sentinel_offset", m.sentinel_offset}};
    if (m.augment_thresholds) {
        j["augment"] = {{"thresholds", *m.augment_thresholds},
                        {"return_kind", *m.augment_return_kind}};
    }
    return json{{"manifest", j}};
}

DatasetManifest manifest_from_json(const json& j) {
    if (!j.contains("manifest")) throw SchemaError("dataset: first line is not a manifest");
    const json& m = j.at("manifest");
    DatasetManifest out;
    out.version = m.at("version").get<int>();
    if (out.version != 1) throw SchemaError("dataset: unsupported manifest version");
    out.env_id = m.at("env_id").get<std::string>();
    out.generator = m.at("generator").get<std::string>();
    out.episodes = m.at("episodes").get<int>();
    out.seed = m.at("seed").get<uint64_t>();
    out.obs_encoding = m.at("obs_encoding").at("version").get<std::string>();
    out.sentinel_offset = m.at("obs_encoding").at("sentinel_offset").get<double>();
    if (m.contains("augment")) {
        out.augment_thresholds = m.at("augment").at("thresholds").get<std::vector<double>>();
        out.augment_return_kind = m.at("augment").at("return_kind").get<std::string>();
    }
    return out;
}

json trajectory_to_json(const Trajectory& t) {
    json j;
    j["env_id"] = t.env_id;
    j["seed"] = t.seed;
    const int n = t.n_agents;
    json obs = json::array();
    for (int s = 0; s <= t.length; ++s) {
        json step = json::array();
        for (int a = 0; a < n; ++a) {
            const double* row = t.obs.row(s * n + a);
            step.push_back(std::vector<double>(row, row + t.obs_dim));
        }
        obs.push_back(std::move(step));
    }
    j["obs"] = std::move(obs);
    json acts = json::array();
    for (int s = 0; s < t.length; ++s) {
        json step = json::array();
        for (int a = 0; a < n; ++a) {
            const double* row = t.actions.row(s * n + a);
            step.push_back(std::vector<double>(row, row + t.action_dim));
        }
        acts.push_back(std::move(step));
    }
    j["actions"] = std::move(acts);
    json rews = json::array();
    for (int s = 0; s < t.length; ++s) {
        const double* row = t.rewards.row(s);
        rews.push_back(std::vector<double>(row, row + n));
    }
    j["rewards"] = std::move(rews);
    json dn = json::array();
    for (int s = 0; s < t.length; ++s) dn.push_back(t.dones[s] != 0);
    j["dones"] = std::move(dn);
    j["returns"] = t.returns;
    return j;
}

std::shared_ptr<Trajectory> trajectory_from_json(const json& j, const DatasetManifest& m) {
    auto t = std::make_shared<Trajectory>();
    t->env_id = j.at("env_id").get<std::string>();
    if (t->env_id != m.env_id)
        throw SchemaError("dataset: trajectory env_id differs from manifest");
    t->seed = j.at("seed").get<uint64_t>();
    const json& obs = j.at("obs");
    const json& acts = j.at("actions");
    const json& rews = j.at("rewards");
    const json& dones = j.at("dones");
    t->length = static_cast<int>(acts.size());
    if (static_cast<int>(obs.size()) != t->length + 1)
        throw SchemaError("dataset: obs must have one more step than actions");
    if (static_cast<int>(rews.size()) != t->length ||
        static_cast<int>(dones.size()) != t->length)
        throw SchemaError("dataset: rewards/dones length mismatch");
    if (t->length < 1) throw SchemaError("dataset: empty trajectory");
    t->n_agents = static_cast<int>(obs.at(0).size());
    t->obs_dim = static_cast<int>(obs.at(0).at(0).size());
    t->action_dim = static_cast<int>(acts.at(0).at(0).size());

    t->obs.resize((t->length + 1) * t->n_agents, t->obs_dim);
    for (int s = 0; s <= t->length; ++s) {
        if (static_cast<int>(obs.at(s).size()) != t->n_agents)
            throw SchemaError("dataset: agent count varies across steps");
        for (int a = 0; a < t->n_agents; ++a) {
            const auto row = obs.at(s).at(a).get<std::vector<double>>();
            if (static_cast<int>(row.size()) != t->obs_dim)
                throw SchemaError("dataset: observation width varies");
            std::memcpy(t->obs.row(s * t->n_agents + a), row.data(),
                        t->obs_dim * sizeof(double));
        }
    }
    t->actions.resize(t->length * t->n_agents, t->action_dim);
    for (int s = 0; s < t->length; ++s)
        for (int a = 0; a < t->n_agents; ++a) {
            const auto row = acts.at(s).at(a).get<std::vector<double>>();
            if (static_cast<int>(row.size()) != t->action_dim)
                throw SchemaError("dataset: action width varies");
            std::memcpy(t->actions.row(s * t->n_agents + a), row.data(),
                        t->action_dim * sizeof(double));
        }
    t->rewards.resize(t->length, t->n_agents);
    for (int s = 0; s < t->length; ++s) {
        const auto row = rews.at(s).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != t->n_agents)
            throw SchemaError("dataset: reward width varies");
        std::memcpy(t->rewards.row(s), row.data(), t->n_agents * sizeof(double));
    }
    t->dones.resize(t->length);
    for (int s = 0; s < t->length; ++s) t->dones[s] = dones.at(s).get<bool>() ? 1 : 0;
    t->returns = j.at("returns").get<std::vector<double>>();
    if (static_cast<int>(t->returns.size()) != t->n_agents)
        throw SchemaError("dataset: returns length mismatch");
    // stored returns must match the reward sums
    for (int a = 0; a < t->n_agents; ++a) {
        double s = 0.0;
        for (int step = 0; step < t->length; ++step) s += t->rewards(step, a);
        if (std::abs(s - t->returns[a]) > 1e-9)
            throw SchemaError("dataset: stored return differs from recomputed sum");
    }
    return t;
}

} // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
    std::vector<std::string> lines;
    lines.reserve(ds.trajs.size() + 1);
    lines.push_back(manifest_to_json(ds.manifest).dump());
    for (const auto& t : ds.trajs) lines.push_back(trajectory_to_json(*t).dump());
    write_lines(path, lines);
}

Dataset load_dataset(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw SchemaError("dataset: empty file");
    Dataset ds;
    json first;
    try {
        first = json::parse(lines[0]);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("dataset: bad manifest JSON: ") + e.what());
    }
    ds.manifest = manifest_from_json(first);
    ds.trajs.reserve(lines.size() - 1);
    for (size_t i = 1; i < lines.size(); ++i) {
        json j;
        try {
            j = json::parse(lines[i]);
        } catch (const json::exception& e) {
            throw SchemaError("dataset: bad JSON on line " + std::to_string(i + 1) + ": " +
                              e.what());
        }
        ds.trajs.push_back(trajectory_from_json(j, ds.manifest));
    }
    if (!ds.trajs.empty()) {
        const auto& t0 = *ds.trajs.front();
        for (const auto& t : ds.trajs)
            if (t->n_agents != t0.n_agents || t->obs_dim != t0.obs_dim ||
                t->action_dim != t0.action_dim)
                throw SchemaError("dataset: inconsistent dimensions across trajectories");
    }
    return ds;
}

Dataset augment(const Dataset& ds, const std::vector<double>& thresholds, ReturnKind kind) {
    Dataset out;
    out.manifest = ds.manifest;
    out.manifest.augment_thresholds = thresholds;
    out.manifest.augment_return_kind =
        kind == ReturnKind::joint ? "joint" : "per-agent-mean";
    out.trajs = ds.trajs;
    for (const double th : thresholds)
        for (const auto& t : ds.trajs)
            if (trajectory_return(*t, kind) >= th) out.trajs.push_back(t);
    return out;
}

std::vector<double> auto_thresholds(const Dataset& ds, ReturnKind kind) {
    DOM2_REQUIRE(!ds.trajs.empty(), "auto_thresholds: empty dataset");
    std::vector<double> rets;
    rets.reserve(ds.trajs.size());
    for (const auto& t : ds.trajs) rets.push_back(trajectory_return(*t, kind));
    std::sort(rets.begin(), rets.end());
    const auto q = [&](double p) {
        const auto L = static_cast<long>(rets.size());
        long idx = static_cast<long>(std::ceil(p * L)) - 1;
        idx = std::clamp(idx, 0L, L - 1);
        return rets[idx];
    };
    return {q(0.5), q(0.7), q(0.9)};
}

template <class T>
TransitionTable<T>::TransitionTable(const Dataset& ds) {
    DOM2_REQUIRE(!ds.trajs.empty(), "TransitionTable: empty dataset");
    const auto& t0 = *ds.trajs.front();
    n_agents_ = t0.n_agents;
    obs_dim_ = t0.obs_dim;
    action_dim_ = t0.action_dim;

    // base transitions for unique trajectories, in first-appearance order
    std::unordered_map<const Trajectory*, uint32_t> offset;
    std::vector<const Trajectory*> uniques;
    size_t total = 0;
    for (const auto& t : ds.trajs)
        if (offset.emplace(t.get(), 0).second) {
            uniques.push_back(t.get());
            total += t->length;
        }
    base_count_ = total;
    DOM2_REQUIRE(total <= 0xFFFFFFFFull, "TransitionTable: too many transitions");

    agents_.resize(n_agents_);
    for (auto& a : agents_) {
        a.obs.resize(static_cast<int>(total), obs_dim_);
        a.obs_next.resize(static_cast<int>(total), obs_dim_);
        a.act.resize(static_cast<int>(total), action_dim_);
        a.rew.resize(total);
        a.done.resize(total);
    }
    uint32_t cursor = 0;
    for (const Trajectory* t : uniques) {
        offset[t] = cursor;
        for (int s = 0; s < t->length; ++s) {
            for (int j = 0; j < n_agents_; ++j) {
                auto& a = agents_[j];
                const double* o = t->obs.row(s * n_agents_ + j);
                const double* on = t->obs.row((s + 1) * n_agents_ + j);
                const double* av = t->actions.row(s * n_agents_ + j);
                for (int k = 0; k < obs_dim_; ++k) {
                    a.obs(cursor + s, k) = static_cast<T>(o[k]);
                    a.obs_next(cursor + s, k) = static_cast<T>(on[k]);
                }
                for (int k = 0; k < action_dim_; ++k)
                    a.act(cursor + s, k) = static_cast<T>(av[k]);
                a.rew[cursor + s] = static_cast<T>(t->rewards(s, j));
                a.done[cursor + s] = t->dones[s];
            }
        }
        cursor += t->length;
    }
    // index multiset honoring trajectory multiplicities
    index_.reserve([&] {
        size_t n = 0;
        for (const auto& t : ds.trajs) n += t->length;
        return n;
    }());
    for (const auto& t : ds.trajs) {
        const uint32_t base = offset[t.get()];
        for (int s = 0; s < t->length; ++s) index_.push_back(base + s);
    }
}

template <class T>
void TransitionTable<T>::sample(int agent, int batch, Rng& rng, Mat<T>& obs, Mat<T>& act,
                                Mat<T>& rew, Mat<T>& obs_next, Mat<T>& done) const {
    DOM2_REQUIRE(!index_.empty(), "sample_minibatch: empty dataset");
    DOM2_REQUIRE(agent >= 0 && agent < n_agents_, "sample_minibatch: bad agent index");
    const auto& a = agents_[agent];
    obs.resize(batch, obs_dim_);
    obs_next.resize(batch, obs_dim_);
    act.resize(batch, action_dim_);
    rew.resize(batch, 1);
    done.resize(batch, 1);
    for (int i = 0; i < batch; ++i) {
        const uint32_t id = index_[rng.below(index_.size())];
        std::memcpy(obs.row(i), a.obs.row(id), obs_dim_ * sizeof(T));
        std::memcpy(obs_next.row(i), a.obs_next.row(id), obs_dim_ * sizeof(T));
        std::memcpy(act.row(i), a.act.row(id), action_dim_ * sizeof(T));
        rew(i, 0) = a.rew[id];
        done(i, 0) = static_cast<T>(a.done[id]);
    }
}

template class TransitionTable<float>;
template class TransitionTable<double>;

} // namespace dom2
