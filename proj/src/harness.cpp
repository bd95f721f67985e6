#include "emesh/harness.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>

#include "emesh/script.hpp"
#include "emesh/trace.hpp"

namespace emesh {

StatsReport run_experiment(const RunConfig& cfg, const std::string& trace_path) {
    Fabric f(cfg.fabric_options());
    std::unique_ptr<TraceSink> sink;
    if (!trace_path.empty()) {
        sink = std::make_unique<TraceSink>(trace_path);
        f.trace = sink.get();
    }

    StatsReport r;
    if (cfg.script_path) {
        ScriptSet scripts = load_script_file(*cfg.script_path, cfg.layout);
        std::vector<std::unique_ptr<TransactionScript>> owned;
        for (auto& [coord, script] : scripts) {
            owned.push_back(std::make_unique<TransactionScript>(std::move(script)));
            f.set_script(NodeCoord{coord.first, coord.second, 0}, owned.back().get());
        }
        bool done = f.run_to_completion(2 * (cfg.window_cycles + cfg.drain_max_cycles));
        if (!done)
            throw std::runtime_error("run: scripts did not complete within the budget");
        r = collect_stats(f, 0, 0);
        r.traffic = "script";
    } else if (cfg.traffic) {
        f.set_pattern(*cfg.traffic);
        f.run_cycles(cfg.warmup_cycles);
        f.begin_window();
        f.run_cycles(cfg.window_cycles);
        bool drained = true;
        if (cfg.drain) {
            f.stop_traffic();
            drained = f.run_until_idle(2 * cfg.drain_max_cycles);
        }
        r = collect_stats(f, cfg.warmup_cycles, cfg.window_cycles);
        r.traffic = pattern_name(cfg.traffic->kind);
        r.rate = cfg.traffic->rate;
        r.drained = drained;
        if (!drained)
            throw std::runtime_error("run: fabric failed to drain after traffic stop");
    } else {
        throw std::invalid_argument("run: config needs either traffic or scripts");
    }
    if (!f.conservation_holds())
        throw std::runtime_error("run: packet conservation violated");
    if (sink) sink->flush();
    return r;
}

std::vector<StatsReport> run_sweep(const RunConfig& cfg,
                                   const std::vector<double>& rates) {
    if (!cfg.traffic)
        throw std::invalid_argument("sweep: config needs a traffic pattern");
    return measure_latency(cfg.fabric_options(), *cfg.traffic, rates,
                           cfg.warmup_cycles, cfg.window_cycles);
}

TableReport run_litmus_suite(const RunConfig& cfg) {
    return run_table1(cfg.litmus.rows, cfg.litmus.cols, cfg.seed, cfg.litmus.trials,
                      cfg.litmus.max_cycles_per_trial);
}

std::vector<double> parse_rate_sweep(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0 || start <= 0 || stop < start)
        throw std::invalid_argument("rates must be start:stop:step with step > 0");
    std::vector<double> rates;
    for (double r = start; r <= stop + 1e-9; r += step)
        rates.push_back(r > 1.0 ? 1.0 : r);
    return rates;
}

} // namespace emesh
