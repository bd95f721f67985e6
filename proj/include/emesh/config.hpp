#ifndef EMESH_CONFIG_HPP
#define EMESH_CONFIG_HPP

#include <optional>
#include <string>

#include "emesh/metrics.hpp"
#include "emesh/multichip.hpp"
#include "emesh/traffic.hpp"

namespace emesh {

// Litmus-suite knobs (the `litmus` subcommand).
struct LitmusConfig {
    int rows = 8;
    int cols = 8;
    int trials = 1000;
    int64_t max_cycles_per_trial = 6000;
};

// A fully validated run description. Unknown keys anywhere in the JSON
// are rejected; parse errors carry line numbers.
struct RunConfig {
    int rows = 8;
    int cols = 8;
    int chips_x = 1;
    int chips_y = 1;
    AddressLayout layout{};
    std::optional<TrafficPattern> traffic;
    std::optional<std::string> script_path;
    size_t injection_depth = 4;
    size_t io_depth = 4;
    double io_payload_rate = 1.5;
    int io_clock_divider = 1;
    uint64_t seed = 1;
    int64_t warmup_cycles = 2000;
    int64_t window_cycles = 10000;
    int64_t drain_max_cycles = 20000;
    bool drain = false;
    bool trace = false;
    LitmusConfig litmus;

    FabricOptions fabric_options() const;
    SpecConfig spec_config() const;
    void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

} // namespace emesh

#endif
