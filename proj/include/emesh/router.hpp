#ifndef EMESH_ROUTER_HPP
#define EMESH_ROUTER_HPP

#include <cstdint>
#include <stdexcept>

#include "emesh/addr.hpp"
#include "emesh/packet.hpp"

namespace emesh {

enum class Direction : uint8_t { North = 0, East = 1, South = 2, West = 3, Hub = 4 };

constexpr int kNumDirections = 5;
constexpr int kNumLinkDirections = 4; // N/E/S/W; Hub ejects into the node

const char* direction_name(Direction d);

inline Direction opposite(Direction d) {
    switch (d) {
        case Direction::North: return Direction::South;
        case Direction::South: return Direction::North;
        case Direction::East: return Direction::West;
        case Direction::West: return Direction::East;
        default: return Direction::Hub;
    }
}

// Static dimension-order route: resolve the north-south axis (y) fully
// before east-west (x), then eject into the hub. Increasing y is SOUTH,
// increasing x is EAST.
inline Direction route_decision(const NodeCoord& self, const NodeCoord& dst) {
    if (dst.y != self.y) return dst.y > self.y ? Direction::South : Direction::North;
    if (dst.x != self.x) return dst.x > self.x ? Direction::East : Direction::West;
    return Direction::Hub;
}

// Round-robin over the fixed cyclic order N, E, S, W, HUB. The pointer
// names the first input considered; after a grant it moves to the
// grant's successor so the winner goes last next time.
class RoundRobinArbiter {
public:
    Direction grant(uint8_t request_mask) {
        if (!request_mask)
            throw std::logic_error("arbiter: empty requester set");
        for (int i = 0; i < kNumDirections; ++i) {
            uint8_t d = uint8_t((ptr_ + i) % kNumDirections);
            if (request_mask & (1u << d)) {
                ptr_ = uint8_t((d + 1) % kNumDirections);
                return Direction(d);
            }
        }
        throw std::logic_error("arbiter: unreachable");
    }

    Direction pointer() const { return Direction(ptr_); }
    void set_pointer(Direction d) { ptr_ = uint8_t(d); }
    void reset() { ptr_ = 0; }

private:
    uint8_t ptr_ = 0;
};

// A packet in flight plus simulation bookkeeping that never hits the
// wire. The destination coordinate is decoded once at injection so the
// per-hop route decision is pure integer compares.
struct Flit {
    NocPacket pkt;
    NodeCoord dst;
    uint32_t id = 0;
    int64_t inject_tick = 0;
    uint32_t src_node = 0; // flat global node index
};

struct InputSlot {
    Flit flit;
    bool occupied = false;
    Direction request = Direction::Hub; // cached route decision for flit
};

// One five-port switch: capacity-1 input slot per direction and one
// round-robin arbiter per output.
struct RouterState {
    NodeCoord coord; // global coordinate
    InputSlot in[kNumDirections];
    RoundRobinArbiter arb[kNumDirections];
    uint8_t occupied_count = 0;

    void put(Direction input, const Flit& f) {
        InputSlot& s = in[int(input)];
        s.flit = f;
        s.occupied = true;
        s.request = route_decision(coord, f.dst);
        ++occupied_count;
    }

    Flit take(Direction input) {
        InputSlot& s = in[int(input)];
        s.occupied = false;
        --occupied_count;
        return s.flit;
    }

    void reset() {
        for (auto& s : in) s.occupied = false;
        for (auto& a : arb) a.reset();
        occupied_count = 0;
    }
};

} // namespace emesh

#endif
