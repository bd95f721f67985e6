#include <doctest.h>

#include <stdexcept>

#include <set>

#include "emesh/metrics.hpp"
#include "emesh/multichip.hpp"

using namespace emesh;

namespace {

FabricOptions array_opt(int cx, int cy, int rows, int cols, uint64_t seed = 1) {
    FabricOptions o;
    o.geom = ChipGeometry{rows, cols, {}};
    o.chips_x = cx;
    o.chips_y = cy;
    o.event_log = true;
    o.seed = seed;
    return o;
}

uint64_t addr_of(const NodeCoord& c, uint32_t off) {
    return encode_address(c, off, AddressLayout{}).raw;
}

} // namespace

TEST_CASE("a 1x1 array is a plain fabric with no chip links") {
    Fabric f(array_opt(1, 1, 4, 4));
    CHECK(f.chip_links().empty());
    for (const IoSlice& s : f.io_slices(0, 0)) CHECK(s.mode == IoSlice::Mode::Gpio);
}

TEST_CASE("2x1 array wires one slice per abutting row") {
    Fabric f(array_opt(2, 1, 32, 32));
    CHECK(f.chip_links().size() == 64); // 32 rows, both directions
    int chip0_east_links = 0;
    for (const IoSlice& s : f.io_slices(0, 0))
        if (s.side == Direction::East && s.mode == IoSlice::Mode::Link)
            ++chip0_east_links;
    CHECK(chip0_east_links == 32);
    for (const IoSlice& s : f.io_slices(0, 0))
        if (s.side == Direction::West) CHECK(s.mode == IoSlice::Mode::Gpio);
}

TEST_CASE("io pin accounting: 128 slices x 8 pins per chip") {
    Fabric f(array_opt(2, 2, 4, 4));
    for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx) {
            const auto& slices = f.io_slices(cx, cy);
            REQUIRE(slices.size() == 128);
            int pins = 0;
            for (const IoSlice& s : slices) pins += IoSlice::kPins;
            CHECK(pins == 1024);
        }
    // aggregate default payload across the 128 slices
    CHECK(spec_metrics(SpecConfig{}).io_bandwidth_bytes_per_io_clock ==
          doctest::Approx(192.0));
}

TEST_CASE("2x2 array has eight directed inter-chip edge bundles") {
    Fabric f(array_opt(2, 2, 4, 4));
    std::set<std::pair<int, int>> bundles;
    for (const ChipLink& l : f.chip_links()) bundles.insert({l.src_chip, l.dst_chip});
    CHECK(bundles.size() == 8);
    CHECK(f.chip_links().size() == 8 * 4); // 4 lanes per bundle
}

TEST_CASE("route_offchip resolves chip y before chip x") {
    CHECK(route_offchip({0, 0, 0, 0}, {1, 0, 0, 0}) == Direction::East);
    CHECK(route_offchip({0, 0, 0, 0}, {1, 1, 0, 0}) == Direction::South);
    CHECK(route_offchip({1, 1, 0, 0}, {0, 1, 0, 0}) == Direction::West);
    CHECK(route_offchip({1, 1, 0, 0}, {1, 0, 0, 0}) == Direction::North);
    CHECK_THROWS_AS((route_offchip({1, 1, 0, 0}, {1, 1, 0, 0})), std::invalid_argument);
}

TEST_CASE("destinations outside the array are rejected at injection") {
    Fabric f(array_opt(2, 2, 4, 4));
    NocPacket w = make_write(encode_address({20, 0, 0}, 0, AddressLayout{}), 1, 8);
    CHECK_THROWS_AS((f.inject({0, 0, 0}, w)), std::out_of_range);
    CHECK(f.err_unroutable == 1);
}

TEST_CASE("io link moves one packet per 12 IO clocks at the default rate") {
    Fabric f(array_opt(2, 1, 1, 1)); // two single-node chips
    TransactionScript s;
    for (int i = 0; i < 6; ++i)
        s.push_back({ScriptOp::RemoteWrite, addr_of({1, 0, 0}, uint32_t(0x8 * i)),
                     uint64_t(i + 1), 8, 0, true});
    f.set_script({0, 0, 0}, &s);
    REQUIRE(f.run_to_completion(4000));
    REQUIRE(f.events.size() == 6);
    CHECK(f.events[0].tick == 25); // credit fill (12 IO clocks) + hop + eject
    for (size_t i = 1; i < f.events.size(); ++i)
        CHECK(f.events[i].tick - f.events[i - 1].tick == 24); // 12 IO clocks
    // cross-chip traffic is xmesh
    for (const auto& ev : f.events) CHECK(ev.plane == NetworkClass::Xmesh);
}

TEST_CASE("idle links cap accrued credit at one packet") {
    Fabric f(array_opt(2, 1, 1, 1));
    f.run_cycles(200); // idle: credit saturates, never beyond 136
    for (const ChipLink& l : f.chip_links())
        CHECK(l.credit_eighths <= ChipLink::kPacketEighths);
    TransactionScript s = {
        {ScriptOp::RemoteWrite, addr_of({1, 0, 0}, 0x0), 1, 8, 0, true},
        {ScriptOp::RemoteWrite, addr_of({1, 0, 0}, 0x8), 2, 8, 0, true},
    };
    f.set_script({0, 0, 0}, &s);
    REQUIRE(f.run_to_completion(4000));
    REQUIRE(f.events.size() == 2);
    // first packet crosses on stored credit; the second pays full price
    CHECK(f.events[1].tick - f.events[0].tick == 24);
}

TEST_CASE("packets cross chips in FIFO order to the right node and offset") {
    Fabric f(array_opt(2, 2, 4, 4, 3));
    NodeCoord src{1, 1, 0};   // chip (0,0)
    NodeCoord dst{6, 5, 0};   // chip (1,1)
    TransactionScript s;
    for (int i = 0; i < 10; ++i)
        s.push_back({ScriptOp::RemoteWrite, addr_of(dst, uint32_t(0x40 + 8 * i)),
                     uint64_t(100 + i), 8, 0, true});
    f.set_script(src, &s);
    REQUIRE(f.run_to_completion(20000));
    REQUIRE(f.events.size() == 10);
    for (size_t i = 0; i < f.events.size(); ++i) {
        CHECK(f.events[i].node == f.node_id(dst));
        CHECK(f.events[i].offset == 0x40 + 8 * i); // program order preserved
        CHECK(f.node_at(dst).mem.load(uint32_t(0x40 + 8 * i), 8) == 100 + i);
    }
}

TEST_CASE("a remote read across chips returns on xmesh") {
    Fabric f(array_opt(2, 1, 4, 4));
    NodeCoord issuer{0, 0, 0}, target{6, 2, 0}; // other chip
    f.node_at(target).mem.store(0x18, 0xFEED, 8);
    TransactionScript s = {
        {ScriptOp::RemoteRead, addr_of(target, 0x18), 0, 8, 0x80, true},
    };
    f.set_script(issuer, &s);
    REQUIRE(f.run_to_completion(20000));
    CHECK(f.node_at(issuer).mem.load(0x80, 8) == 0xFEED);
    bool reply_seen = false;
    for (const auto& ev : f.events)
        if (ev.kind == PacketKind::ReadReply) {
            reply_seen = true;
            CHECK(ev.plane == NetworkClass::Xmesh); // return chip differs
        }
    CHECK(reply_seen);
}

TEST_CASE("multichip arrays need chip edges that fit the io slices") {
    FabricOptions o = array_opt(2, 1, 40, 40);
    CHECK_THROWS_AS(Fabric{o}, std::invalid_argument);
    FabricOptions ok = array_opt(1, 1, 40, 40); // single chip: no limit
    CHECK_NOTHROW(Fabric{ok});
}
