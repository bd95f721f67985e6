#ifndef EMESH_TRAFFIC_HPP
#define EMESH_TRAFFIC_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "emesh/addr.hpp"
#include "emesh/rng.hpp"

namespace emesh {

enum class PatternKind : uint8_t {
    UniformRandom,
    NearestNeighbor,
    Transpose,
    BitReversal,
    Hotspot,
    MirrorHalves,
};

const char* pattern_name(PatternKind k);
PatternKind pattern_from_name(const std::string& name); // throws on unknown

// Synthetic workload: every cycle each node fires with probability
// `rate` and sends one write of `size` bytes to the pattern destination.
struct TrafficPattern {
    PatternKind kind = PatternKind::UniformRandom;
    double rate = 0.1;       // packets/node/cycle, (0, 1]
    uint32_t size = 8;       // bytes per write
    uint64_t seed = 1;
    double hotspot_fraction = 0.1; // HOTSPOT only: share aimed at the hotspot

    void validate(int rows, int cols) const; // throws std::invalid_argument
};

// Destination of one packet from `src` on a rows x cols mesh, or nullopt
// when the pattern maps the node to itself (e.g. the transpose diagonal).
// `rng` is the per-node stream; only UNIFORM_RANDOM and HOTSPOT draw.
std::optional<NodeCoord> pattern_dest(const TrafficPattern& pattern,
                                      const NodeCoord& src, int rows, int cols,
                                      Rng& rng);

} // namespace emesh

#endif
