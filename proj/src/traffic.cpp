#include "emesh/traffic.hpp"

#include <bit>
#include <stdexcept>

namespace emesh {

const char* pattern_name(PatternKind k) {
    switch (k) {
        case PatternKind::UniformRandom: return "uniform_random";
        case PatternKind::NearestNeighbor: return "nearest_neighbor";
        case PatternKind::Transpose: return "transpose";
        case PatternKind::BitReversal: return "bit_reversal";
        case PatternKind::Hotspot: return "hotspot";
        case PatternKind::MirrorHalves: return "mirror_halves";
    }
    return "?";
}

PatternKind pattern_from_name(const std::string& name) {
    for (int k = 0; k <= int(PatternKind::MirrorHalves); ++k)
        if (name == pattern_name(PatternKind(k))) return PatternKind(k);
    throw std::invalid_argument("unknown traffic pattern: " + name);
}

void TrafficPattern::validate(int rows, int cols) const {
    if (rate <= 0.0 || rate > 1.0)
        throw std::invalid_argument("traffic rate must be in (0, 1]");
    if (size != 1 && size != 2 && size != 4 && size != 8)
        throw std::invalid_argument("traffic size must be 1, 2, 4 or 8");
    if (kind == PatternKind::Transpose && rows != cols)
        throw std::invalid_argument("transpose needs a square mesh");
    if (kind == PatternKind::BitReversal &&
        !std::has_single_bit(uint32_t(rows) * uint32_t(cols)))
        throw std::invalid_argument("bit_reversal needs a power-of-two node count");
    if (kind == PatternKind::MirrorHalves && rows % 2 != 0)
        throw std::invalid_argument("mirror_halves needs an even row count");
    if (kind == PatternKind::Hotspot &&
        (hotspot_fraction < 0.0 || hotspot_fraction > 1.0))
        throw std::invalid_argument("hotspot_fraction must be in [0, 1]");
}

namespace {

NodeCoord from_index(uint32_t idx, int cols) {
    return NodeCoord{idx % uint32_t(cols), idx / uint32_t(cols), 0};
}

} // namespace

std::optional<NodeCoord> pattern_dest(const TrafficPattern& pattern,
                                      const NodeCoord& src, int rows, int cols,
                                      Rng& rng) {
    const uint32_t nodes = uint32_t(rows) * uint32_t(cols);
    switch (pattern.kind) {
        case PatternKind::UniformRandom: {
            if (nodes < 2) return std::nullopt;
            uint32_t self = src.y * uint32_t(cols) + src.x;
            // Draw over nodes-1 and skip self so one draw always lands.
            uint32_t pick = uint32_t(rng.below(nodes - 1));
            if (pick >= self) ++pick;
            return from_index(pick, cols);
        }
        case PatternKind::NearestNeighbor:
            // East neighbor, wrapping at the mesh edge.
            return NodeCoord{(src.x + 1) % uint32_t(cols), src.y, 0};
        case PatternKind::Transpose: {
            if (src.x == src.y) return std::nullopt; // diagonal maps to self
            return NodeCoord{src.y, src.x, 0};
        }
        case PatternKind::BitReversal: {
            uint32_t bits = std::countr_zero(nodes);
            uint32_t idx = src.y * uint32_t(cols) + src.x;
            uint32_t rev = 0;
            for (uint32_t b = 0; b < bits; ++b)
                if (idx & (1u << b)) rev |= 1u << (bits - 1 - b);
            if (rev == src.y * uint32_t(cols) + src.x) return std::nullopt;
            return from_index(rev, cols);
        }
        case PatternKind::Hotspot: {
            NodeCoord hot{uint32_t(cols) / 2, uint32_t(rows) / 2, 0};
            if (rng.chance(pattern.hotspot_fraction)) {
                if (hot == src) return std::nullopt;
                return hot;
            }
            if (nodes < 2) return std::nullopt;
            uint32_t self = src.y * uint32_t(cols) + src.x;
            uint32_t pick = uint32_t(rng.below(nodes - 1));
            if (pick >= self) ++pick;
            return from_index(pick, cols);
        }
        case PatternKind::MirrorHalves:
            // (x, y) -> (x, rows-1-y): every packet crosses the mid-cut.
            return NodeCoord{src.x, uint32_t(rows) - 1 - src.y, 0};
    }
    return std::nullopt;
}

} // namespace emesh
