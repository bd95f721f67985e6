#ifndef EMESH_ADDR_HPP
#define EMESH_ADDR_HPP

#include <cstdint>
#include <utility>

namespace emesh {

// Flat 64-bit memory map: 1MB regions addressed by a 30-bit (x,y,z)
// coordinate field. Offset lives in bits [19:0], the coordinate field in
// bits [49:20] packed x-low / y-middle / z-high, and bits [63:50] are
// reserved-zero.
struct AddressLayout {
    int offset_bits = 20;
    int x_bits = 15;
    int y_bits = 15;
    int z_bits = 0;
    // Coordinate-field-all-zeros aliases "this node" when enabled.
    bool local_alias = true;

    void validate() const; // throws std::invalid_argument
};

struct NodeCoord {
    uint32_t x = 0;
    uint32_t y = 0;
    uint32_t z = 0;

    bool operator==(const NodeCoord&) const = default;
};

struct GlobalAddress {
    uint64_t raw = 0;

    bool operator==(const GlobalAddress&) const = default;
};

struct ChipGeometry {
    int rows = 32; // nodes per chip along north-south (y)
    int cols = 32; // nodes per chip along east-west (x)
    NodeCoord origin{};

    void validate() const;
};

struct ChipLocation {
    int chip_x = 0;
    int chip_y = 0;
    int local_row = 0;
    int local_col = 0;

    bool operator==(const ChipLocation&) const = default;
};

struct SystemCapacity {
    uint64_t max_nodes = 0;
    uint64_t total_bytes = 0;
};

constexpr uint32_t kOffsetBits = 20;
constexpr uint32_t kCoordBits = 30;
constexpr uint64_t kOffsetMask = (1ULL << kOffsetBits) - 1;
constexpr uint64_t kReservedMask = ~((1ULL << (kOffsetBits + kCoordBits)) - 1);

GlobalAddress encode_address(const NodeCoord& coord, uint32_t offset,
                             const AddressLayout& layout);
std::pair<NodeCoord, uint32_t> decode_address(GlobalAddress addr,
                                              const AddressLayout& layout);

bool is_local(GlobalAddress addr, const NodeCoord& self,
              const AddressLayout& layout);

ChipLocation chip_of(const NodeCoord& coord, const ChipGeometry& geom);

SystemCapacity system_capacity(const AddressLayout& layout);

} // namespace emesh

#endif
