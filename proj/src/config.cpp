#include "emesh/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace emesh {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw std::invalid_argument("config: " + where + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

template <typename T>
T get_or(const json& obj, const char* key, T def) {
    if (!obj.contains(key)) return def;
    return obj.at(key).get<T>();
}

int line_of_offset(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: parse error at line " +
                                    std::to_string(line_of_offset(text, e.byte)) +
                                    ": " + e.what());
    }
    if (!j.is_object()) fail("<root>", "top level must be an object");
    reject_unknown(j, "<root>",
                   {"mesh", "chips", "layout", "traffic", "scripts", "queues", "io",
                    "run", "seed", "trace", "litmus"});

    RunConfig c;
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        reject_unknown(m, "mesh", {"rows", "cols"});
        c.rows = get_or(m, "rows", c.rows);
        c.cols = get_or(m, "cols", c.cols);
    }
    if (j.contains("chips")) {
        const json& m = j.at("chips");
        reject_unknown(m, "chips", {"x", "y"});
        c.chips_x = get_or(m, "x", c.chips_x);
        c.chips_y = get_or(m, "y", c.chips_y);
    }
    if (j.contains("layout")) {
        const json& m = j.at("layout");
        reject_unknown(m, "layout", {"x_bits", "y_bits", "z_bits", "local_alias"});
        c.layout.x_bits = get_or(m, "x_bits", c.layout.x_bits);
        c.layout.y_bits = get_or(m, "y_bits", c.layout.y_bits);
        c.layout.z_bits = get_or(m, "z_bits", c.layout.z_bits);
        c.layout.local_alias = get_or(m, "local_alias", c.layout.local_alias);
    }
    if (j.contains("traffic")) {
        const json& m = j.at("traffic");
        reject_unknown(m, "traffic",
                       {"pattern", "rate", "size", "seed", "hotspot_fraction"});
        TrafficPattern p;
        p.kind = pattern_from_name(m.at("pattern").get<std::string>());
        p.rate = get_or(m, "rate", p.rate);
        p.size = get_or(m, "size", p.size);
        p.seed = get_or(m, "seed", uint64_t(1));
        p.hotspot_fraction = get_or(m, "hotspot_fraction", p.hotspot_fraction);
        c.traffic = p;
    }
    if (j.contains("scripts")) c.script_path = j.at("scripts").get<std::string>();
    if (j.contains("queues")) {
        const json& m = j.at("queues");
        reject_unknown(m, "queues", {"injection_depth", "io_depth"});
        c.injection_depth = get_or(m, "injection_depth", c.injection_depth);
        c.io_depth = get_or(m, "io_depth", c.io_depth);
    }
    if (j.contains("io")) {
        const json& m = j.at("io");
        reject_unknown(m, "io", {"payload_rate", "clock_divider"});
        c.io_payload_rate = get_or(m, "payload_rate", c.io_payload_rate);
        c.io_clock_divider = get_or(m, "clock_divider", c.io_clock_divider);
    }
    if (j.contains("run")) {
        const json& m = j.at("run");
        reject_unknown(m, "run", {"warmup", "window", "drain", "drain_max_cycles"});
        c.warmup_cycles = get_or(m, "warmup", c.warmup_cycles);
        c.window_cycles = get_or(m, "window", c.window_cycles);
        c.drain = get_or(m, "drain", c.drain);
        c.drain_max_cycles = get_or(m, "drain_max_cycles", c.drain_max_cycles);
    }
    c.seed = get_or(j, "seed", c.seed);
    c.trace = get_or(j, "trace", c.trace);
    if (j.contains("litmus")) {
        const json& m = j.at("litmus");
        reject_unknown(m, "litmus", {"rows", "cols", "trials", "max_cycles"});
        c.litmus.rows = get_or(m, "rows", c.litmus.rows);
        c.litmus.cols = get_or(m, "cols", c.litmus.cols);
        c.litmus.trials = get_or(m, "trials", c.litmus.trials);
        c.litmus.max_cycles_per_trial =
            get_or(m, "max_cycles", c.litmus.max_cycles_per_trial);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void RunConfig::validate() const {
    fabric_options().validate();
    if (traffic && script_path)
        fail("<root>", "traffic and scripts are mutually exclusive");
    if (traffic) traffic->validate(rows * chips_y, cols * chips_x);
    if (warmup_cycles < 0 || window_cycles < 0 || drain_max_cycles < 0)
        fail("run", "cycle counts must be non-negative");
    if (litmus.rows * litmus.cols < 3) fail("litmus", "mesh too small");
    if (litmus.trials < 1) fail("litmus", "trials must be >= 1");
}

FabricOptions RunConfig::fabric_options() const {
    FabricOptions o;
    o.layout = layout;
    o.geom = ChipGeometry{rows, cols, {}};
    o.chips_x = chips_x;
    o.chips_y = chips_y;
    o.inject_queue_depth = injection_depth;
    o.io_queue_depth = io_depth;
    o.io_payload_rate = io_payload_rate;
    o.io_clock_divider = io_clock_divider;
    o.seed = seed;
    return o;
}

SpecConfig RunConfig::spec_config() const {
    SpecConfig s;
    s.cores = uint64_t(rows) * cols * chips_x * chips_y;
    s.cut_links = uint32_t(cols) * uint32_t(chips_x);
    return s;
}

} // namespace emesh
