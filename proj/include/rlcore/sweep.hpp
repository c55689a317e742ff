#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlcore/train.hpp"

namespace rlcore {

enum class SweepAxis { NumLayers, Topology, Component };

SweepAxis parse_sweep_axis(const std::string& s);

struct SweepRun {
    std::string axis_value;
    std::uint64_t seed = 0;
    LearningCurve curve;
    double final_return = 0.0;  // mean over the last 5 evaluation points
    double final_success = 0.0;
};

/// One training run per (axis value x seed); everything else in the base
/// config is held fixed.
struct SweepSpec {
    AgentConfig base;
    std::string env_name;
    long total_steps = 30000;
    SweepAxis axis = SweepAxis::NumLayers;
    std::vector<std::string> values;
    std::vector<std::uint64_t> seeds;
    int workers = 0; // 0 = hardware concurrency

    /// Progress hook, called (under a lock) as each run finishes. Completion
    /// order depends on scheduling; results themselves do not.
    std::function<void(const SweepRun&)> on_progress;

    void validate() const;
};

struct AggregateRow {
    std::string axis_value;
    double final_return_mean = 0.0;
    double final_return_sd = 0.0; // sample sd over seeds, 0 for a single seed
    int num_seeds = 0;
};

struct SweepResult {
    std::vector<SweepRun> runs;       // ordered values x seeds
    std::vector<AggregateRow> aggregates;
};

/// Applies one axis value to the base config:
///  - num_layers: both networks get that depth
///  - topology:   both networks get that kind
///  - component:  both | policy_only | critic_only | neither; the dense side
///    keeps the base depth, the vanilla side is the 2-layer baseline
AgentConfig apply_axis(const AgentConfig& base, SweepAxis axis, const std::string& value);

/// Runs the grid, in parallel when workers allows; results are keyed by
/// (value, seed) so output is identical regardless of scheduling order.
/// on_run fires once per completed run, in grid order, after all runs finish.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const SweepRun&)>& on_run = {});

} // namespace rlcore
