#ifndef EMESH_HARNESS_HPP
#define EMESH_HARNESS_HPP

#include <string>
#include <vector>

#include "emesh/config.hpp"
#include "emesh/metrics.hpp"
#include "emesh/ordering.hpp"

namespace emesh {

// One deterministic experiment: pattern runs do warmup + measurement
// window (+ optional drain); script runs execute every transaction to
// completion. trace_path, when set, captures the packet event stream.
StatsReport run_experiment(const RunConfig& cfg, const std::string& trace_path = "");

// Independent runs over a list of offered loads.
std::vector<StatsReport> run_sweep(const RunConfig& cfg,
                                   const std::vector<double>& rates);

TableReport run_litmus_suite(const RunConfig& cfg);

// "start:stop:step" inclusive sweep specification.
std::vector<double> parse_rate_sweep(const std::string& spec);

} // namespace emesh

#endif
