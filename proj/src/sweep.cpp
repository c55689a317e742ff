#include "rlcore/sweep.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "rlcore/config.hpp"

namespace rlcore {

SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "num_layers") return SweepAxis::NumLayers;
    if (s == "topology") return SweepAxis::Topology;
    if (s == "component") return SweepAxis::Component;
    throw ConfigError("unknown sweep axis: '" + s + "'");
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep: values must be non-empty");
    if (seeds.empty()) throw ConfigError("sweep: seeds must be non-empty");
    if (total_steps < 1) throw ConfigError("sweep: total_steps must be >= 1");
    base.validate();
    for (const std::string& v : values) apply_axis(base, axis, v); // value syntax check
}

AgentConfig apply_axis(const AgentConfig& base, SweepAxis axis, const std::string& value) {
    AgentConfig cfg = base;
    switch (axis) {
        case SweepAxis::NumLayers: {
            int layers = 0;
            try {
                layers = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("sweep num_layers value not an integer: '" + value + "'");
            }
            if (layers < 1) throw ConfigError("sweep num_layers value must be >= 1");
            cfg.policy_topology.num_hidden_layers = layers;
            cfg.critic_topology.num_hidden_layers = layers;
            break;
        }
        case SweepAxis::Topology: {
            const TopologyKind kind = parse_topology_kind(value);
            cfg.policy_topology.kind = kind;
            cfg.critic_topology.kind = kind;
            break;
        }
        case SweepAxis::Component: {
            const int dense_layers = base.policy_topology.num_hidden_layers;
            auto dense_side = [&](NetworkTopology& t) {
                t.kind = TopologyKind::Dense;
                t.num_hidden_layers = dense_layers;
            };
            auto vanilla_side = [&](NetworkTopology& t) {
                t.kind = TopologyKind::Vanilla;
                t.num_hidden_layers = 2;
            };
            if (value == "both") {
                dense_side(cfg.policy_topology);
                dense_side(cfg.critic_topology);
            } else if (value == "policy_only") {
                dense_side(cfg.policy_topology);
                vanilla_side(cfg.critic_topology);
            } else if (value == "critic_only") {
                vanilla_side(cfg.policy_topology);
                dense_side(cfg.critic_topology);
            } else if (value == "neither") {
                vanilla_side(cfg.policy_topology);
                vanilla_side(cfg.critic_topology);
            } else {
                throw ConfigError("sweep component value must be "
                                  "both|policy_only|critic_only|neither, got '" + value + "'");
            }
            break;
        }
    }
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, const std::function<void(const SweepRun&)>& on_run) {
    spec.validate();
    struct Job {
        std::string value;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const std::string& v : spec.values)
        for (std::uint64_t s : spec.seeds) jobs.push_back({v, s});

    SweepResult result;
    result.runs.resize(jobs.size());

    int workers = spec.workers > 0 ? spec.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::mutex progress_mu;
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            AgentConfig cfg = apply_axis(spec.base, spec.axis, job.value);
            TrainResult tr = run_training(spec.env_name, cfg, spec.total_steps, job.seed);
            SweepRun& run = result.runs[i];
            run.axis_value = job.value;
            run.seed = job.seed;
            run.final_return = final_window_return(tr.curve);
            run.final_success = final_window_success(tr.curve);
            run.curve = std::move(tr.curve);
            if (spec.on_progress) {
                std::lock_guard<std::mutex> lock(progress_mu);
                spec.on_progress(run);
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (const SweepRun& run : result.runs)
        if (on_run) on_run(run);

    for (const std::string& v : spec.values) {
        AggregateRow row;
        row.axis_value = v;
        std::vector<double> finals;
        for (const SweepRun& run : result.runs)
            if (run.axis_value == v) finals.push_back(run.final_return);
        row.num_seeds = static_cast<int>(finals.size());
        for (double f : finals) row.final_return_mean += f / finals.size();
        if (finals.size() > 1) {
            double var = 0.0;
            for (double f : finals)
                var += (f - row.final_return_mean) * (f - row.final_return_mean);
            row.final_return_sd = std::sqrt(var / (finals.size() - 1));
        }
        result.aggregates.push_back(std::move(row));
    }
    return result;
}

} // namespace rlcore
