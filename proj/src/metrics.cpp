#include "emesh/metrics.hpp"

#include <stdexcept>

namespace emesh {

SpecMetrics spec_metrics(const SpecConfig& cfg) {
    SpecMetrics m;
    m.dp_flops_per_cycle = cfg.cores * cfg.dp_flops_per_core_cycle;
    m.sp_flops_per_cycle = cfg.cores * cfg.sp_flops_per_core_cycle;
    m.mem_bandwidth_bytes_per_cycle = cfg.cores * cfg.bytes_per_core_cycle;
    m.bisection_bytes_per_cycle =
        uint64_t(cfg.planes) * cfg.cut_links * 2 * cfg.link_payload_bytes;
    m.io_bandwidth_bytes_per_io_clock = cfg.io_links * cfg.io_link_payload;
    return m;
}

StatsReport collect_stats(const Fabric& f, int64_t warmup_cycles,
                          int64_t window_cycles) {
    StatsReport r;
    const FabricOptions& opt = f.options();
    r.rows = opt.total_rows();
    r.cols = opt.total_cols();
    r.chips_x = opt.chips_x;
    r.chips_y = opt.chips_y;
    r.seed = opt.seed;
    r.warmup_cycles = warmup_cycles;
    r.window_cycles = window_cycles;
    r.total_cycles = f.cycle();

    for (int p = 0; p < kNumPlanes; ++p) {
        PlaneStats ps;
        ps.name = network_class_name(NetworkClass(p));
        const PlaneCounters& c = f.counters[p];
        ps.injected = c.injected;
        ps.delivered = c.delivered;
        ps.refused = c.refused;
        ps.payload_bytes = c.payload_bytes;
        ps.delivered_window = c.delivered_window;
        ps.payload_bytes_window = c.payload_bytes_window;
        if (window_cycles > 0) {
            ps.throughput_bytes_per_cycle =
                double(c.payload_bytes_window) / double(window_cycles);
            ps.cut_bytes_per_cycle =
                double(c.cut_bytes_window) / double(window_cycles);
        }
        const LatencyRecorder& lat = f.latency[p];
        ps.latency_samples = lat.samples();
        if (lat.samples()) {
            ps.latency_min_cycles = double(lat.min_ticks()) / 2.0;
            ps.latency_mean_cycles = lat.mean_ticks() / 2.0;
            ps.latency_p99_cycles = double(lat.percentile_ticks(0.99)) / 2.0;
            ps.latency_max_cycles = double(lat.max_ticks()) / 2.0;
        }
        if (window_cycles > 0) {
            uint64_t links = 0;
            uint64_t accepts = 0;
            uint32_t max_accepts = 0;
            for (const Chip& ch : f.chips()) {
                for (const MeshLink& l : ch.planes[size_t(p)].links) {
                    if (!l.exists) continue;
                    ++links;
                    accepts += l.accepts_window;
                    if (l.accepts_window > max_accepts) max_accepts = l.accepts_window;
                }
            }
            if (links) {
                ps.link_utilization_mean =
                    double(accepts) / double(links) / double(window_cycles);
                ps.link_utilization_max = double(max_accepts) / double(window_cycles);
            }
        }
        r.cut_total_bytes_per_cycle += ps.cut_bytes_per_cycle;
        r.planes.push_back(ps);
    }
    r.errors_out_of_range = f.err_out_of_range;
    r.errors_unroutable = f.err_unroutable;
    return r;
}

StatsReport measure_bisection(const FabricOptions& opt, const TrafficPattern& pattern,
                              int64_t warmup_cycles, int64_t window_cycles) {
    if (opt.total_rows() % 2 != 0)
        throw std::invalid_argument("measure_bisection: needs an even row count");
    Fabric f(opt);
    f.set_pattern(pattern);
    f.run_cycles(warmup_cycles);
    f.begin_window();
    f.run_cycles(window_cycles);
    StatsReport r = collect_stats(f, warmup_cycles, window_cycles);
    r.traffic = pattern_name(pattern.kind);
    r.rate = pattern.rate;
    return r;
}

std::vector<StatsReport> measure_latency(const FabricOptions& opt,
                                         TrafficPattern pattern,
                                         const std::vector<double>& rates,
                                         int64_t warmup_cycles, int64_t window_cycles) {
    std::vector<StatsReport> out;
    for (double rate : rates) {
        pattern.rate = rate;
        Fabric f(opt);
        f.set_pattern(pattern);
        f.run_cycles(warmup_cycles);
        f.begin_window();
        f.run_cycles(window_cycles);
        StatsReport r = collect_stats(f, warmup_cycles, window_cycles);
        r.traffic = pattern_name(pattern.kind);
        r.rate = rate;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace emesh
