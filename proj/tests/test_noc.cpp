#include <doctest.h>

#include <stdexcept>

#include <queue>

#include "emesh/multichip.hpp"

using namespace emesh;

namespace {

FabricOptions desk(int rows, int cols, uint64_t seed = 1) {
    FabricOptions o;
    o.geom = ChipGeometry{rows, cols, {}};
    o.event_log = true;
    o.record_paths = true;
    o.seed = seed;
    return o;
}

NocPacket write_to(const NodeCoord& dst, uint32_t off, uint64_t data = 1) {
    return make_write(encode_address(dst, off, AddressLayout{}), data, 8);
}

// Breadth-first shortest path length on the mesh grid, independent of
// the router's own routing logic.
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

bool dimension_ordered(const std::vector<Direction>& path) {
    bool seen_horizontal = false;
    for (Direction d : path) {
        bool vertical = d == Direction::North || d == Direction::South;
        if (vertical && seen_horizontal) return false;
        if (!vertical) seen_horizontal = true;
    }
    return true;
}

} // namespace

TEST_CASE("build_fabric materializes three identical planes") {
    Fabric f = build_fabric(32, 32);
    REQUIRE(f.chips().size() == 1);
    for (const MeshPlane& pl : f.chips()[0].planes) {
        CHECK(pl.routers.size() == 1024);
        CHECK(pl.occupancy() == 0);
    }
    CHECK(f.tick() == 0);
    CHECK_THROWS_AS(build_fabric(0, 4), std::invalid_argument);
}

TEST_CASE("degenerate 1x1 fabric delivers hub-local traffic") {
    Fabric f(desk(1, 1));
    REQUIRE(f.inject({0, 0, 0}, write_to({0, 0, 0}, 0x8, 42)));
    for (int i = 0; i < 4; ++i) f.step();
    REQUIRE(f.events.size() == 1);
    CHECK(f.events[0].tick == 2); // ejection overhead only
    CHECK(f.node_at({0, 0, 0}).mem.load(0x8, 8) == 42);
}

TEST_CASE("inject: accepts, per-cycle gate, and validation errors") {
    Fabric f(desk(4, 4));
    CHECK(f.inject({0, 0, 0}, write_to({1, 1, 0}, 0)));
    CHECK_FALSE(f.inject({0, 0, 0}, write_to({2, 2, 0}, 0))); // same node/plane/cycle
    CHECK(f.inject({0, 0, 0}, make_read_request(
                                  encode_address({1, 1, 0}, 0, AddressLayout{}),
                                  encode_address({0, 0, 0}, 8, AddressLayout{}), 8)));
    CHECK(f.counters[int(NetworkClass::Cmesh)].refused == 1);

    CHECK_THROWS_AS((f.inject({0, 0, 0}, write_to({9, 0, 0}, 0))), std::out_of_range);
    NocPacket bad;
    bad.dst_raw = 1ull << 62;
    bad.ctrl = 0x07;
    CHECK_THROWS_AS((f.inject({0, 0, 0}, bad)), std::invalid_argument);
}

TEST_CASE("zero-load latency constants are locked") {
    // one hop: 3 ticks of flight + 2 ticks of ejection = 2.5 cycles
    {
        Fabric f(desk(2, 2));
        REQUIRE(f.inject({0, 0, 0}, write_to({1, 0, 0}, 0x10, 7)));
        while (f.events.empty()) f.step();
        CHECK(f.events[0].tick == 5);
    }
    // corner to corner on 8x8: 14 hops, strictly dimension-ordered
    {
        Fabric f(desk(8, 8));
        REQUIRE(f.inject({0, 0, 0}, write_to({7, 7, 0}, 0x10, 7)));
        while (f.events.empty()) f.step();
        CHECK(f.events[0].tick == 44); // 14 * 3 + 2
        const auto* path = f.path_of(f.events[0].packet_id);
        REQUIRE(path);
        CHECK(path->size() == 14);
        CHECK(dimension_ordered(*path));
        int south = 0, east = 0;
        for (Direction d : *path) {
            south += d == Direction::South;
            east += d == Direction::East;
        }
        CHECK(south == 7);
        CHECK(east == 7);
    }
}

TEST_CASE("all-pairs minimality and dimension order on a 4x4 mesh") {
    Fabric f(desk(4, 4));
    for (uint32_t sy = 0; sy < 4; ++sy)
        for (uint32_t sx = 0; sx < 4; ++sx)
            for (uint32_t dy = 0; dy < 4; ++dy)
                for (uint32_t dx = 0; dx < 4; ++dx) {
                    f.reset();
                    NodeCoord s{sx, sy, 0}, d{dx, dy, 0};
                    REQUIRE(f.inject(s, write_to(d, 0x20)));
                    int guard = 0;
                    while (f.events.empty() && guard++ < 200) f.step();
                    REQUIRE(f.events.size() == 1);
                    const auto* path = f.path_of(f.events[0].packet_id);
                    REQUIRE(path);
                    int hops = bfs_hops(4, 4, s, d);
                    REQUIRE(int(path->size()) == hops);
                    REQUIRE(dimension_ordered(*path));
                    REQUIRE(f.events[0].tick == 3 * hops + 2);
                }
}

TEST_CASE("same seed reproduces the event stream bit for bit") {
    auto run = [] {
        Fabric f(desk(8, 8, 99));
        TrafficPattern p;
        p.kind = PatternKind::UniformRandom;
        p.rate = 0.3;
        p.seed = 99;
        f.set_pattern(p);
        f.run_cycles(300);
        return f;
    };
    Fabric a = run(), b = run();
    REQUIRE(a.events.size() == b.events.size());
    for (size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].tick == b.events[i].tick);
        CHECK(a.events[i].node == b.events[i].node);
        CHECK(a.events[i].packet_id == b.events[i].packet_id);
        CHECK(a.events[i].data == b.events[i].data);
    }
    for (int p = 0; p < kNumPlanes; ++p) {
        CHECK(a.counters[p].injected == b.counters[p].injected);
        CHECK(a.counters[p].delivered == b.counters[p].delivered);
    }
}

TEST_CASE("conservation holds every cycle under hotspot pressure and drains") {
    Fabric f(desk(4, 4, 5));
    for (uint32_t y = 0; y < 4; ++y)
        for (uint32_t x = 0; x < 4; ++x)
            if (!(x == 3 && y == 3))
                f.set_flow({x, y, 0}, BackgroundFlow{{3, 3, 0}, 1.0, 8});
    for (int c = 0; c < 200; ++c) {
        f.step_cycle();
        REQUIRE(f.conservation_holds());
    }
    CHECK(f.counters[int(NetworkClass::Cmesh)].refused > 0); // back-pressure bites
    f.stop_traffic();
    CHECK(f.run_until_idle(20000));
    CHECK(f.conservation_holds());
    uint64_t injected = f.counters[int(NetworkClass::Cmesh)].injected;
    CHECK(injected == f.counters[int(NetworkClass::Cmesh)].delivered);
}

TEST_CASE("a directed path preserves packet order end to end") {
    Fabric f(desk(6, 6));
    NodeCoord src{0, 0, 0}, dst{0, 5, 0};
    TransactionScript s;
    for (int i = 0; i < 16; ++i)
        s.push_back({ScriptOp::RemoteWrite,
                     encode_address(dst, uint32_t(0x100 + 8 * i), AddressLayout{}).raw,
                     uint64_t(i), 8, 0, true});
    f.set_script(src, &s);
    REQUIRE(f.run_to_completion(4000));
    uint32_t last_id = 0;
    bool first = true;
    for (const auto& ev : f.events) {
        REQUIRE((first || ev.packet_id > last_id)); // FIFO along one path
        last_id = ev.packet_id;
        first = false;
    }
}

TEST_CASE("plane isolation: packets stay on their injection plane") {
    Fabric f(desk(4, 4));
    TrafficPattern p;
    p.kind = PatternKind::Transpose;
    p.rate = 1.0;
    f.set_pattern(p);
    f.run_cycles(50);
    f.stop_traffic();
    f.run_until_idle(4000);
    for (const auto& ev : f.events) CHECK(ev.plane == NetworkClass::Cmesh);
    CHECK(f.counters[int(NetworkClass::Rmesh)].injected == 0);
    CHECK(f.counters[int(NetworkClass::Xmesh)].injected == 0);
}

TEST_CASE("run_until_idle") {
    Fabric f(desk(4, 4));
    CHECK(f.run_until_idle(0)); // already idle
    REQUIRE(f.inject({0, 0, 0}, write_to({3, 3, 0}, 0)));
    CHECK_FALSE(f.run_until_idle(0));
    CHECK(f.run_until_idle(1000));
}
