#ifndef EMESH_METRICS_HPP
#define EMESH_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "emesh/multichip.hpp"
#include "emesh/noc.hpp"
#include "emesh/traffic.hpp"

namespace emesh {

// Frequency-independent accounting constants. Defaults reproduce the
// 1024-core chip figures exactly.
struct SpecConfig {
    uint64_t cores = 1024;
    uint32_t dp_flops_per_core_cycle = 2; // one fused multiply-add
    uint32_t sp_flops_per_core_cycle = 4; // 2-wide 32-bit SIMD FMA
    uint32_t bytes_per_core_cycle = 32;   // four 8-byte ports
    uint32_t planes = 3;
    uint32_t link_payload_bytes = 8;
    uint32_t cut_links = 32; // mesh columns crossing the bisection
    uint32_t io_links = 128;
    double io_link_payload = 1.5; // bytes per IO clock
};

struct SpecMetrics {
    uint64_t dp_flops_per_cycle = 0;
    uint64_t sp_flops_per_cycle = 0;
    uint64_t mem_bandwidth_bytes_per_cycle = 0;
    uint64_t bisection_bytes_per_cycle = 0;
    double io_bandwidth_bytes_per_io_clock = 0.0;
};

SpecMetrics spec_metrics(const SpecConfig& cfg);

// Zero-load latency of an h-hop packet, in cycles: 1.5 per hop plus one
// cycle of ejection overhead.
inline double zero_load_latency_cycles(int hops) { return 1.5 * hops + 1.0; }
inline int64_t zero_load_latency_ticks(int hops) { return 3 * int64_t(hops) + 2; }

struct PlaneStats {
    std::string name;
    uint64_t injected = 0;
    uint64_t delivered = 0;
    uint64_t refused = 0;
    uint64_t payload_bytes = 0;
    uint64_t delivered_window = 0;
    uint64_t payload_bytes_window = 0;
    double throughput_bytes_per_cycle = 0.0; // window payload / window cycles
    double cut_bytes_per_cycle = 0.0;
    uint64_t latency_samples = 0;
    double latency_min_cycles = 0.0;
    double latency_mean_cycles = 0.0;
    double latency_p99_cycles = 0.0;
    double latency_max_cycles = 0.0;
    double link_utilization_mean = 0.0;
    double link_utilization_max = 0.0;
};

struct StatsReport {
    int rows = 0, cols = 0, chips_x = 1, chips_y = 1;
    uint64_t seed = 0;
    std::string traffic; // pattern name or "script"
    double rate = 0.0;
    int64_t warmup_cycles = 0;
    int64_t window_cycles = 0;
    int64_t total_cycles = 0;
    std::vector<PlaneStats> planes; // rmesh, cmesh, xmesh
    double cut_total_bytes_per_cycle = 0.0;
    uint64_t errors_out_of_range = 0;
    uint64_t errors_unroutable = 0;
    bool drained = true;
};

// Snapshot counters into a report. window_cycles = 0 means "no steady
// state window": throughput fields are left zero.
StatsReport collect_stats(const Fabric& f, int64_t warmup_cycles,
                          int64_t window_cycles);

// Steady-state payload crossing the horizontal mid-cut, per plane, under
// a saturating pattern (MIRROR_HALVES by default).
StatsReport measure_bisection(const FabricOptions& opt, const TrafficPattern& pattern,
                              int64_t warmup_cycles, int64_t window_cycles);

// Latency/throughput curve over offered loads.
std::vector<StatsReport> measure_latency(const FabricOptions& opt,
                                         TrafficPattern pattern,
                                         const std::vector<double>& rates,
                                         int64_t warmup_cycles, int64_t window_cycles);

} // namespace emesh

#endif
