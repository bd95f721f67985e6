#include "emesh/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace emesh {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json plane_to_json(const PlaneStats& p) {
    ordered_json j;
    j["name"] = p.name;
    j["injected"] = p.injected;
    j["delivered"] = p.delivered;
    j["refused"] = p.refused;
    j["payload_bytes"] = p.payload_bytes;
    j["delivered_window"] = p.delivered_window;
    j["payload_bytes_window"] = p.payload_bytes_window;
    j["throughput_bytes_per_cycle"] = p.throughput_bytes_per_cycle;
    j["cut_bytes_per_cycle"] = p.cut_bytes_per_cycle;
    j["latency_samples"] = p.latency_samples;
    j["latency_min_cycles"] = p.latency_min_cycles;
    j["latency_mean_cycles"] = p.latency_mean_cycles;
    j["latency_p99_cycles"] = p.latency_p99_cycles;
    j["latency_max_cycles"] = p.latency_max_cycles;
    j["link_utilization_mean"] = p.link_utilization_mean;
    j["link_utilization_max"] = p.link_utilization_max;
    return j;
}

PlaneStats plane_from_json(const ordered_json& j) {
    PlaneStats p;
    p.name = j.at("name").get<std::string>();
    p.injected = j.at("injected").get<uint64_t>();
    p.delivered = j.at("delivered").get<uint64_t>();
    p.refused = j.at("refused").get<uint64_t>();
    p.payload_bytes = j.at("payload_bytes").get<uint64_t>();
    p.delivered_window = j.at("delivered_window").get<uint64_t>();
    p.payload_bytes_window = j.at("payload_bytes_window").get<uint64_t>();
    p.throughput_bytes_per_cycle = j.at("throughput_bytes_per_cycle").get<double>();
    p.cut_bytes_per_cycle = j.at("cut_bytes_per_cycle").get<double>();
    p.latency_samples = j.at("latency_samples").get<uint64_t>();
    p.latency_min_cycles = j.at("latency_min_cycles").get<double>();
    p.latency_mean_cycles = j.at("latency_mean_cycles").get<double>();
    p.latency_p99_cycles = j.at("latency_p99_cycles").get<double>();
    p.latency_max_cycles = j.at("latency_max_cycles").get<double>();
    p.link_utilization_mean = j.at("link_utilization_mean").get<double>();
    p.link_utilization_max = j.at("link_utilization_max").get<double>();
    return p;
}

} // namespace

std::string report_to_json(const StatsReport& r) {
    ordered_json j;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["chips_x"] = r.chips_x;
    j["chips_y"] = r.chips_y;
    j["seed"] = r.seed;
    j["traffic"] = r.traffic;
    j["rate"] = r.rate;
    j["warmup_cycles"] = r.warmup_cycles;
    j["window_cycles"] = r.window_cycles;
    j["total_cycles"] = r.total_cycles;
    j["planes"] = ordered_json::array();
    for (const PlaneStats& p : r.planes) j["planes"].push_back(plane_to_json(p));
    j["cut_total_bytes_per_cycle"] = r.cut_total_bytes_per_cycle;
    j["errors_out_of_range"] = r.errors_out_of_range;
    j["errors_unroutable"] = r.errors_unroutable;
    j["drained"] = r.drained;
    return j.dump(2) + "\n";
}

StatsReport report_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    StatsReport r;
    r.rows = j.at("rows").get<int>();
    r.cols = j.at("cols").get<int>();
    r.chips_x = j.at("chips_x").get<int>();
    r.chips_y = j.at("chips_y").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    r.traffic = j.at("traffic").get<std::string>();
    r.rate = j.at("rate").get<double>();
    r.warmup_cycles = j.at("warmup_cycles").get<int64_t>();
    r.window_cycles = j.at("window_cycles").get<int64_t>();
    r.total_cycles = j.at("total_cycles").get<int64_t>();
    for (const auto& pj : j.at("planes")) r.planes.push_back(plane_from_json(pj));
    r.cut_total_bytes_per_cycle = j.at("cut_total_bytes_per_cycle").get<double>();
    r.errors_out_of_range = j.at("errors_out_of_range").get<uint64_t>();
    r.errors_unroutable = j.at("errors_unroutable").get<uint64_t>();
    r.drained = j.at("drained").get<bool>();
    return r;
}

std::string reports_to_csv(const std::vector<StatsReport>& rs) {
    std::ostringstream out;
    out << "rows,cols,chips_x,chips_y,seed,traffic,rate,warmup_cycles,window_cycles,"
           "total_cycles,plane,injected,delivered,refused,payload_bytes,"
           "delivered_window,payload_bytes_window,throughput_bytes_per_cycle,"
           "cut_bytes_per_cycle,latency_samples,latency_min_cycles,"
           "latency_mean_cycles,latency_p99_cycles,latency_max_cycles,"
           "link_utilization_mean,link_utilization_max\n";
    for (const StatsReport& r : rs) {
        for (const PlaneStats& p : r.planes) {
            out << r.rows << ',' << r.cols << ',' << r.chips_x << ',' << r.chips_y
                << ',' << r.seed << ',' << r.traffic << ',' << r.rate << ','
                << r.warmup_cycles << ',' << r.window_cycles << ',' << r.total_cycles
                << ',' << p.name << ',' << p.injected << ',' << p.delivered << ','
                << p.refused << ',' << p.payload_bytes << ',' << p.delivered_window
                << ',' << p.payload_bytes_window << ','
                << p.throughput_bytes_per_cycle << ',' << p.cut_bytes_per_cycle << ','
                << p.latency_samples << ',' << p.latency_min_cycles << ','
                << p.latency_mean_cycles << ',' << p.latency_p99_cycles << ','
                << p.latency_max_cycles << ',' << p.link_utilization_mean << ','
                << p.link_utilization_max << '\n';
        }
    }
    return out.str();
}

std::string report_to_text(const StatsReport& r) {
    std::ostringstream out;
    out << "mesh " << r.cols << "x" << r.rows;
    if (r.chips_x * r.chips_y > 1)
        out << " (" << r.chips_x << "x" << r.chips_y << " chips)";
    out << ", traffic " << r.traffic << " rate " << r.rate << ", seed " << r.seed
        << "\n";
    out << "cycles: warmup " << r.warmup_cycles << ", window " << r.window_cycles
        << ", total " << r.total_cycles << "\n";
    for (const PlaneStats& p : r.planes) {
        out << "  " << p.name << ": injected " << p.injected << ", delivered "
            << p.delivered << ", refused " << p.refused << "\n";
        if (p.latency_samples)
            out << "    latency cycles min/mean/p99/max: " << p.latency_min_cycles
                << "/" << p.latency_mean_cycles << "/" << p.latency_p99_cycles << "/"
                << p.latency_max_cycles << " (" << p.latency_samples << " samples)\n";
        if (r.window_cycles > 0)
            out << "    window throughput " << p.throughput_bytes_per_cycle
                << " B/cycle, cut " << p.cut_bytes_per_cycle << " B/cycle, util mean "
                << p.link_utilization_mean << " max " << p.link_utilization_max
                << "\n";
    }
    out << "cut total: " << r.cut_total_bytes_per_cycle << " B/cycle\n";
    out << "errors: out_of_range " << r.errors_out_of_range << ", unroutable "
        << r.errors_unroutable << "\n";
    return out.str();
}

std::string spec_metrics_to_json(const SpecMetrics& m) {
    ordered_json j;
    j["dp_flops_per_cycle"] = m.dp_flops_per_cycle;
    j["sp_flops_per_cycle"] = m.sp_flops_per_cycle;
    j["mem_bandwidth_bytes_per_cycle"] = m.mem_bandwidth_bytes_per_cycle;
    j["noc_bisection_bytes_per_cycle"] = m.bisection_bytes_per_cycle;
    j["io_bandwidth_bytes_per_io_clock"] = m.io_bandwidth_bytes_per_io_clock;
    return j.dump(2) + "\n";
}

std::string spec_metrics_to_text(const SpecMetrics& m) {
    std::ostringstream out;
    out << "64-bit FLOPS:               " << m.dp_flops_per_cycle
        << " / clock cycle\n";
    out << "32-bit FLOPS:               " << m.sp_flops_per_cycle
        << " / clock cycle\n";
    out << "Aggregate Memory Bandwidth: " << m.mem_bandwidth_bytes_per_cycle
        << " Bytes / clock cycle\n";
    out << "NOC Bisection Bandwidth:    " << m.bisection_bytes_per_cycle
        << " Bytes / clock cycle\n";
    out << "IO Bandwidth:               " << m.io_bandwidth_bytes_per_io_clock
        << " Bytes / IO clock cycle\n";
    return out.str();
}

std::string table_report_to_json(const TableReport& t) {
    ordered_json j;
    j["rows"] = ordered_json::array();
    for (const RowReport& r : t.rows) {
        ordered_json rj;
        rj["pair"] = r.name;
        rj["expected_deterministic"] = r.expected_deterministic;
        rj["trials"] = r.obs.trials;
        rj["preserved"] = r.obs.preserved;
        rj["reversed"] = r.obs.reversed;
        rj["value_anomalies"] = r.obs.value_anomalies;
        rj["incomplete"] = r.obs.incomplete;
        rj["verdict"] = r.verdict;
        j["rows"].push_back(rj);
    }
    j["verdict"] = t.verdict;
    return j.dump(2) + "\n";
}

std::string table_report_to_text(const TableReport& t) {
    std::ostringstream out;
    for (const RowReport& r : t.rows) {
        out << (r.expected_deterministic ? "[det]   " : "[nondet] ") << r.name
            << ": trials " << r.obs.trials << ", preserved " << r.obs.preserved
            << ", reversed " << r.obs.reversed;
        if (r.obs.value_anomalies) out << ", stale reads " << r.obs.value_anomalies;
        if (r.obs.incomplete) out << ", incomplete " << r.obs.incomplete;
        out << " -> " << r.verdict << "\n";
    }
    out << "table verdict: " << t.verdict << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace emesh
