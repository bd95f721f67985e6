#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "emesh/config.hpp"
#include "emesh/harness.hpp"
#include "emesh/report.hpp"

namespace {

emesh::RunConfig load(const std::string& path) {
    emesh::RunConfig cfg =
        path.empty() ? emesh::RunConfig{} : emesh::load_config(path);
    if (const char* env = std::getenv("EMESH_SEED")) {
        cfg.seed = std::stoull(env);
        if (cfg.traffic) cfg.traffic->seed = cfg.seed;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"emesh - Epiphany-V style mesh NoC simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, trace_path, rates_spec = "0.05:1.0:0.05";
    int trials_override = 0;

    auto* specs = app.add_subcommand("specs", "analytic frequency-independent metrics");
    specs->add_option("--config,-c", config_path, "run config (sizes the chip)");
    specs->add_option("--out,-o", out_path, "write JSON to this file");

    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--config,-c", config_path, "run config")->required();
    run->add_option("--out,-o", out_path, "report file (.json or .csv)");
    run->add_option("--trace", trace_path, "packet event trace file");

    auto* litmus = app.add_subcommand("litmus", "remote-transfer ordering suite");
    litmus->add_option("--config,-c", config_path, "run config")->required();
    litmus->add_option("--trials,-n", trials_override, "trials per table row");
    litmus->add_option("--out,-o", out_path, "write JSON report to this file");

    auto* sweep = app.add_subcommand("sweep", "latency/throughput over offered load");
    sweep->add_option("--config,-c", config_path, "run config")->required();
    sweep->add_option("--rates", rates_spec, "start:stop:step offered loads");
    sweep->add_option("--out,-o", out_path, "CSV output file");

    auto* validate = app.add_subcommand("validate", "check a config and exit");
    validate->add_option("--config,-c", config_path, "run config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (specs->parsed()) {
            emesh::RunConfig cfg = load(config_path);
            emesh::SpecConfig sc =
                config_path.empty() ? emesh::SpecConfig{} : cfg.spec_config();
            emesh::SpecMetrics m = emesh::spec_metrics(sc);
            std::cout << emesh::spec_metrics_to_text(m);
            if (!out_path.empty())
                emesh::write_file(out_path, emesh::spec_metrics_to_json(m));
        } else if (run->parsed()) {
            emesh::RunConfig cfg = load(config_path);
            emesh::StatsReport r = emesh::run_experiment(cfg, trace_path);
            std::cout << emesh::report_to_text(r);
            if (!out_path.empty()) {
                if (out_path.size() > 4 &&
                    out_path.substr(out_path.size() - 4) == ".csv")
                    emesh::write_file(out_path, emesh::reports_to_csv({r}));
                else
                    emesh::write_file(out_path, emesh::report_to_json(r));
            }
        } else if (litmus->parsed()) {
            emesh::RunConfig cfg = load(config_path);
            if (trials_override > 0) cfg.litmus.trials = trials_override;
            emesh::TableReport t = emesh::run_litmus_suite(cfg);
            std::cout << emesh::table_report_to_text(t);
            if (!out_path.empty())
                emesh::write_file(out_path, emesh::table_report_to_json(t));
            if (t.verdict == "FAIL") return 1;
        } else if (sweep->parsed()) {
            emesh::RunConfig cfg = load(config_path);
            auto rates = emesh::parse_rate_sweep(rates_spec);
            auto reports = emesh::run_sweep(cfg, rates);
            std::string csv = emesh::reports_to_csv(reports);
            if (!out_path.empty())
                emesh::write_file(out_path, csv);
            else
                std::cout << csv;
        } else if (validate->parsed()) {
            emesh::load_config(config_path);
            std::cout << "ok\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
