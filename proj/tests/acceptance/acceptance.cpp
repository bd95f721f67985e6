// Acceptance suite: one test case per criterion, one printed verdict line
// each. Run all via `ctest` or this binary directly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "emesh/harness.hpp"
#include "emesh/metrics.hpp"
#include "emesh/multichip.hpp"
#include "emesh/ordering.hpp"
#include "emesh/report.hpp"

using namespace emesh;

namespace {

void verdict(int criterion, bool pass, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str());
    std::fflush(stdout);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int bfs_hops(int rows, int cols, NodeCoord a, NodeCoord b) {
    std::vector<int> dist(size_t(rows) * cols, -1);
    auto id = [cols](int x, int y) { return size_t(y) * cols + x; };
    std::queue<std::pair<int, int>> q;
    q.push({int(a.x), int(a.y)});
    dist[id(int(a.x), int(a.y))] = 0;
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || ny < 0 || nx >= cols || ny >= rows) continue;
            if (dist[id(nx, ny)] >= 0) continue;
            dist[id(nx, ny)] = dist[id(x, y)] + 1;
            q.push({nx, ny});
        }
    }
    return dist[id(int(b.x), int(b.y))];
}

} // namespace

TEST_CASE("criterion 1: analytic performance figures, exactly") {
    SpecMetrics m = spec_metrics(SpecConfig{});
    bool exact = m.dp_flops_per_cycle == 2048 && m.sp_flops_per_cycle == 4096 &&
                 m.mem_bandwidth_bytes_per_cycle == 32768 &&
                 m.bisection_bytes_per_cycle == 1536 &&
                 m.io_bandwidth_bytes_per_io_clock == 192.0;
    CHECK(exact);

    // and the CLI emits the same numbers
    std::string out = std::string(EMESH_CONFIG_DIR) + "/.specs_out.json";
    std::string cmd = std::string(EMESH_BIN) + " specs --out " + out + " > /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    std::remove(out.c_str());
    bool cli_exact = j.at("dp_flops_per_cycle") == 2048 &&
                     j.at("sp_flops_per_cycle") == 4096 &&
                     j.at("mem_bandwidth_bytes_per_cycle") == 32768 &&
                     j.at("noc_bisection_bytes_per_cycle") == 1536 &&
                     j.at("io_bandwidth_bytes_per_io_clock") == 192.0;
    CHECK(cli_exact);
    verdict(1, exact && cli_exact,
            "emesh specs emits 2048/4096/32768/1536/192, zero tolerance");
}

TEST_CASE("criterion 2: measured bisection under mirrored writes") {
    TrafficPattern p;
    p.kind = PatternKind::MirrorHalves;
    p.rate = 1.0;
    p.seed = 1;

    FabricOptions o16;
    o16.geom = ChipGeometry{16, 16, {}};
    StatsReport r16 = measure_bisection(o16, p, 2000, 10000);
    double cut16 = r16.planes[int(NetworkClass::Cmesh)].cut_bytes_per_cycle;
    bool ok16 = cut16 >= 0.9 * 256.0;
    CHECK(ok16);

    FabricOptions o32;
    o32.geom = ChipGeometry{32, 32, {}};
    StatsReport r32 = measure_bisection(o32, p, 2000, 10000);
    double cut32 = r32.planes[int(NetworkClass::Cmesh)].cut_bytes_per_cycle;
    bool ok32 = cut32 >= 0.9 * 512.0;
    CHECK(ok32);

    std::ostringstream what;
    what << "cmesh cut 16x16 = " << cut16 << " B/cycle (>= 230.4), 32x32 = "
         << cut32 << " B/cycle (>= 460.8)";
    verdict(2, ok16 && ok32, what.str());
}

TEST_CASE("criterion 3: BFS-exact, dimension-ordered routing on all meshes to 8x8") {
    uint64_t pairs = 0;
    bool ok = true;
    for (int rows = 1; rows <= 8 && ok; ++rows) {
        for (int cols = 1; cols <= 8 && ok; ++cols) {
            FabricOptions opt;
            opt.geom = ChipGeometry{rows, cols, {}};
            opt.event_log = true;
            opt.record_paths = true;
            Fabric f(opt);
            for (int s = 0; s < rows * cols && ok; ++s) {
                for (int d = 0; d < rows * cols && ok; ++d) {
                    f.reset();
                    NodeCoord src{uint32_t(s % cols), uint32_t(s / cols), 0};
                    NodeCoord dst{uint32_t(d % cols), uint32_t(d / cols), 0};
                    NocPacket w =
                        make_write(encode_address(dst, 0x40, opt.layout), 1, 8);
                    REQUIRE(f.inject(src, w));
                    int guard = 0;
                    while (f.events.empty() && guard++ < 200) f.step();
                    REQUIRE(f.events.size() == 1);
                    const auto* path = f.path_of(f.events[0].packet_id);
                    REQUIRE(path != nullptr);
                    int hops = bfs_hops(rows, cols, src, dst);
                    bool vertical_done = false;
                    bool dim_ordered = true;
                    for (Direction dd : *path) {
                        bool vertical =
                            dd == Direction::North || dd == Direction::South;
                        if (vertical && vertical_done) dim_ordered = false;
                        if (!vertical) vertical_done = true;
                    }
                    ok = int(path->size()) == hops && dim_ordered &&
                         f.events[0].tick == 3 * hops + 2;
                    ++pairs;
                }
            }
        }
    }
    CHECK(ok);
    std::ostringstream what;
    what << pairs << " src/dst pairs, hop count == BFS shortest path, "
         << "all north-south moves before east-west";
    verdict(3, ok, what.str());
}

TEST_CASE("criterion 4: lossless backpressure and drain at saturation") {
    FabricOptions opt;
    opt.geom = ChipGeometry{16, 16, {}};
    opt.seed = 2024;
    Fabric f(opt);
    TrafficPattern p;
    p.kind = PatternKind::UniformRandom;
    p.rate = 1.0;
    p.seed = 2024;
    f.set_pattern(p);

    uint64_t violations = 0;
    for (int c = 0; c < 100000; ++c) {
        f.step_cycle();
        if (!f.conservation_holds()) ++violations;
    }
    bool conserved = violations == 0;
    CHECK(conserved);

    f.stop_traffic();
    bool drained = f.run_until_idle(2 * 10000);
    CHECK(drained);
    bool balanced = true;
    for (int pl = 0; pl < kNumPlanes; ++pl)
        balanced &= f.counters[pl].injected == f.counters[pl].delivered;
    CHECK(balanced);

    std::ostringstream what;
    what << "100k cycles at rate 1.0: " << violations
         << " conservation violations, drained to empty = "
         << (drained ? "yes" : "no");
    verdict(4, conserved && drained && balanced, what.str());
}

TEST_CASE("criterion 5: remote-transfer ordering table under congestion") {
    // All five deterministic rows at 10k randomized trials each; the three
    // non-deterministic rows must be witnessed reordered (stale value for
    // write-then-read on one core).
    TableReport t = run_table1(8, 8, 424242, 10000);
    bool ok = true;
    for (const RowReport& r : t.rows) {
        INFO(r.name, " verdict ", r.verdict, " reversed ", r.obs.reversed);
        if (r.expected_deterministic) {
            CHECK(r.obs.trials >= 10000);
            CHECK(r.obs.reversed == 0);
            CHECK(r.obs.incomplete == 0);
            ok &= r.obs.reversed == 0 && r.obs.incomplete == 0 &&
                  r.obs.trials >= 10000;
        } else {
            CHECK(r.obs.reversed > 0);
            ok &= r.obs.reversed > 0;
            if (r.name == "Write A -> Read A") {
                CHECK(r.obs.value_anomalies > 0);
                ok &= r.obs.value_anomalies > 0;
            }
        }
    }
    CHECK(t.verdict == "PASS");
    ok &= t.verdict == "PASS";
    std::ostringstream what;
    what << "table verdict " << t.verdict
         << "; deterministic rows clean over 10k trials each, all three "
            "non-deterministic rows witnessed";
    verdict(5, ok, what.str());
}

// -- criterion 6 machinery ---------------------------------------------------

namespace {

// Random workload with writer-partitioned offsets: the low half of every
// scratchpad is write territory split per source, the high half is
// preloaded read-only territory. Read values are then independent of
// delivery interleaving, so multichip and flat runs must agree byte for byte.
struct Workload {
    std::vector<TransactionScript> scripts; // per node id
    std::vector<std::vector<uint8_t>> preload;
};

Workload make_workload(int rows, int cols, uint64_t seed,
                       const AddressLayout& layout) {
    const int nodes = rows * cols;
    const uint32_t half = Scratchpad::kCapacity / 2;
    const uint32_t region = half / uint32_t(nodes);
    Workload w;
    w.scripts.resize(size_t(nodes));
    w.preload.resize(size_t(nodes));

    Rng pre(mix64(seed, 0xBEEF));
    for (int n = 0; n < nodes; ++n) {
        auto& mem = w.preload[size_t(n)];
        mem.assign(Scratchpad::kCapacity, 0);
        for (uint32_t off = half; off < Scratchpad::kCapacity; off += 8) {
            uint64_t v = pre.next();
            for (int b = 0; b < 8; ++b) mem[off + b] = uint8_t(v >> (8 * b));
        }
    }

    Rng rng(seed);
    for (int n = 0; n < nodes; ++n) {
        NodeCoord self{uint32_t(n % cols), uint32_t(n / cols), 0};
        uint32_t my_region = uint32_t(n) * region;
        uint32_t land_base = my_region + region / 2;
        TransactionScript& s = w.scripts[size_t(n)];
        int ops = 4 + int(rng.below(8));
        int reads = 0;
        for (int i = 0; i < ops; ++i) {
            uint32_t sizes[] = {1, 2, 4, 8};
            uint32_t size = sizes[rng.below(4)];
            uint64_t roll = rng.below(100);
            if (roll < 45) { // remote write into my slice of a random node
                uint32_t t = uint32_t(rng.below(uint64_t(nodes)));
                NodeCoord dst{uint32_t(t % cols), uint32_t(t / cols), 0};
                if (dst == self) continue;
                uint32_t off =
                    my_region + (uint32_t(rng.below(region / 2 / 8)) * 8);
                off &= ~(size - 1);
                s.push_back({ScriptOp::RemoteWrite,
                             encode_address(dst, off, layout).raw, rng.next(), size,
                             0, true});
            } else if (roll < 65) { // local write into my own slice
                uint32_t off =
                    my_region + (uint32_t(rng.below(region / 2 / 8)) * 8);
                off &= ~(size - 1);
                s.push_back({ScriptOp::LocalWrite, off, rng.next(), size, 0, true});
            } else if (roll < 95) { // remote read of read-only territory
                uint32_t t = uint32_t(rng.below(uint64_t(nodes)));
                NodeCoord dst{uint32_t(t % cols), uint32_t(t / cols), 0};
                if (dst == self) continue;
                uint32_t off = half + (uint32_t(rng.below(half / 8)) * 8);
                off &= ~(size - 1);
                uint32_t land = land_base + uint32_t(reads++) * 8;
                bool blocking = rng.below(2) == 0;
                s.push_back({ScriptOp::RemoteRead,
                             encode_address(dst, off, layout).raw, 0, size, land,
                             blocking});
            } else { // local read (bank accounting only)
                uint32_t off = half + (uint32_t(rng.below(half / 8)) * 8);
                off &= ~(size - 1);
                s.push_back({ScriptOp::LocalRead, off, 0, size, 0, true});
            }
        }
    }
    return w;
}

void arm(Fabric& f, const Workload& w, int cols) {
    for (uint32_t n = 0; n < w.scripts.size(); ++n) {
        NodeCoord c{n % uint32_t(cols), n / uint32_t(cols), 0};
        f.node_at(c).mem.bytes = w.preload[n];
        if (!w.scripts[n].empty()) f.set_script(c, &w.scripts[n]);
    }
}

// Sequential reference: preload plus local script writes plus delivered
// write events in delivery order.
std::vector<std::vector<uint8_t>> reference_memory(const Workload& w,
                                                   const Fabric& f, int cols) {
    auto mem = w.preload;
    for (uint32_t n = 0; n < w.scripts.size(); ++n)
        for (const ScriptEntry& e : w.scripts[n])
            if (e.op == ScriptOp::LocalWrite)
                for (uint32_t b = 0; b < e.size; ++b)
                    mem[n][uint32_t(e.addr) + b] = uint8_t(e.data >> (8 * b));
    for (const DeliveredEvent& ev : f.events) {
        if (ev.kind == PacketKind::ReadRequest || ev.faulted) continue;
        for (uint32_t b = 0; b < ev.size; ++b)
            mem[ev.node][ev.offset + b] = uint8_t(ev.data >> (8 * b));
    }
    (void)cols;
    return mem;
}

bool memories_match(const Fabric& f, const std::vector<std::vector<uint8_t>>& want,
                    int cols) {
    for (uint32_t n = 0; n < want.size(); ++n) {
        NodeCoord c{n % uint32_t(cols), n / uint32_t(cols), 0};
        if (f.node_at(c).mem.bytes != want[n]) return false;
    }
    return true;
}

using WriteMultiset = std::map<std::tuple<uint32_t, uint32_t, uint64_t, uint32_t>, int>;

WriteMultiset delivered_writes(const Fabric& f) {
    WriteMultiset m;
    for (const DeliveredEvent& ev : f.events) {
        if (ev.kind == PacketKind::ReadRequest || ev.faulted) continue;
        ++m[{ev.node, ev.offset, ev.data, ev.size}];
    }
    return m;
}

} // namespace

TEST_CASE("criterion 6: delivery-order memory oracle, multichip == flat") {
    bool ok = true;
    int done_single = 0, done_pair = 0;

    // 1000 workloads on a 4x4 single-chip fabric vs the event-replay oracle
    {
        FabricOptions opt;
        opt.geom = ChipGeometry{4, 4, {}};
        opt.event_log = true;
        Fabric f(opt);
        for (int i = 0; i < 1000 && ok; ++i) {
            Workload w = make_workload(4, 4, mix64(777, uint64_t(i)), opt.layout);
            f.reset(true);
            arm(f, w, 4);
            REQUIRE(f.run_to_completion(40000));
            ok = memories_match(f, reference_memory(w, f, 4), 4);
            ++done_single;
        }
        CHECK(ok);
    }

    // 1000 workloads on a 2x2 array of 4x4 chips vs the oracle AND vs the
    // equivalent flat 8x8 mesh, transaction for transaction
    if (ok) {
        FabricOptions multi;
        multi.geom = ChipGeometry{4, 4, {}};
        multi.chips_x = 2;
        multi.chips_y = 2;
        multi.event_log = true;
        FabricOptions flat;
        flat.geom = ChipGeometry{8, 8, {}};
        flat.event_log = true;
        Fabric fm(multi), ff(flat);
        for (int i = 0; i < 1000 && ok; ++i) {
            Workload w = make_workload(8, 8, mix64(888, uint64_t(i)), multi.layout);
            fm.reset(true);
            ff.reset(true);
            arm(fm, w, 8);
            arm(ff, w, 8);
            REQUIRE(fm.run_to_completion(400000));
            REQUIRE(ff.run_to_completion(400000));
            auto want = reference_memory(w, fm, 8);
            ok = memories_match(fm, want, 8) &&
                 memories_match(ff, reference_memory(w, ff, 8), 8);
            // identical final memories and identical delivered-write multisets
            for (uint32_t n = 0; n < 64 && ok; ++n) {
                NodeCoord c{n % 8u, n / 8u, 0};
                ok = fm.node_at(c).mem.bytes == ff.node_at(c).mem.bytes;
            }
            ok = ok && delivered_writes(fm) == delivered_writes(ff);
            ++done_pair;
        }
        CHECK(ok);
    }

    std::ostringstream what;
    what << done_single << " workloads on 4x4 and " << done_pair
         << " on 2x2-of-4x4 match the sequential reference; multichip final "
            "memory equals the flat 8x8 run";
    verdict(6, ok, what.str());
}

TEST_CASE("criterion 7: system capacity facts") {
    SystemCapacity cap = system_capacity(AddressLayout{});
    bool ok = cap.max_nodes == (1ull << 30) && cap.total_bytes == (1ull << 50);
    CHECK(ok);
    verdict(7, ok,
            "2^30 nodes (~1 Billion) and 2^50 bytes (~1.13e15, binary "
            "convention for 1 Petabyte)");
}

TEST_CASE("criterion 8: byte-identical reports and traces per seed") {
    std::string cfg_path = std::string(EMESH_CONFIG_DIR) + "/uniform_8x8.json";
    RunConfig cfg = load_config(cfg_path);
    std::string t1 = std::string(EMESH_CONFIG_DIR) + "/.trace1.log";
    std::string t2 = std::string(EMESH_CONFIG_DIR) + "/.trace2.log";
    std::string r1 = report_to_json(run_experiment(cfg, t1));
    std::string r2 = report_to_json(run_experiment(cfg, t2));
    bool reports_same = r1 == r2;
    bool traces_same = slurp(t1) == slurp(t2);
    bool trace_nonempty = !slurp(t1).empty();
    std::remove(t1.c_str());
    std::remove(t2.c_str());
    CHECK(reports_same);
    CHECK(traces_same);
    CHECK(trace_nonempty);
    verdict(8, reports_same && traces_same && trace_nonempty,
            "uniform_8x8 config run twice: identical report bytes and trace bytes");
}
