#include "emesh/addr.hpp"

#include <stdexcept>
#include <string>

namespace emesh {

void AddressLayout::validate() const {
    if (offset_bits != int(kOffsetBits))
        throw std::invalid_argument("address layout: offset_bits must be 20");
    if (x_bits < 0 || y_bits < 0 || z_bits < 0)
        throw std::invalid_argument("address layout: negative field width");
    if (x_bits + y_bits + z_bits != int(kCoordBits))
        throw std::invalid_argument(
            "address layout: x_bits + y_bits + z_bits must be 30, got " +
            std::to_string(x_bits + y_bits + z_bits));
}

void ChipGeometry::validate() const {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("chip geometry: rows and cols must be >= 1");
}

namespace {

uint64_t field_max(int bits) { return bits >= 64 ? ~0ULL : (1ULL << bits) - 1; }

} // namespace

GlobalAddress encode_address(const NodeCoord& coord, uint32_t offset,
                             const AddressLayout& layout) {
    layout.validate();
    if (coord.x > field_max(layout.x_bits) || coord.y > field_max(layout.y_bits) ||
        coord.z > field_max(layout.z_bits))
        throw std::out_of_range("encode_address: coordinate exceeds layout width");
    if (offset > kOffsetMask)
        throw std::out_of_range("encode_address: offset exceeds 20 bits");

    uint64_t raw = offset;
    raw |= uint64_t(coord.x) << kOffsetBits;
    raw |= uint64_t(coord.y) << (kOffsetBits + layout.x_bits);
    raw |= uint64_t(coord.z) << (kOffsetBits + layout.x_bits + layout.y_bits);
    return GlobalAddress{raw};
}

std::pair<NodeCoord, uint32_t> decode_address(GlobalAddress addr,
                                              const AddressLayout& layout) {
    layout.validate();
    if (addr.raw & kReservedMask)
        throw std::invalid_argument("decode_address: reserved bits [63:50] set");

    NodeCoord c;
    c.x = uint32_t((addr.raw >> kOffsetBits) & field_max(layout.x_bits));
    c.y = uint32_t((addr.raw >> (kOffsetBits + layout.x_bits)) &
                   field_max(layout.y_bits));
    c.z = uint32_t((addr.raw >> (kOffsetBits + layout.x_bits + layout.y_bits)) &
                   field_max(layout.z_bits));
    return {c, uint32_t(addr.raw & kOffsetMask)};
}

bool is_local(GlobalAddress addr, const NodeCoord& self,
              const AddressLayout& layout) {
    auto [coord, offset] = decode_address(addr, layout);
    (void)offset;
    if (layout.local_alias && (addr.raw >> kOffsetBits) == 0) return true;
    return coord == self;
}

ChipLocation chip_of(const NodeCoord& coord, const ChipGeometry& geom) {
    geom.validate();
    ChipLocation loc;
    loc.chip_x = int(coord.x / uint32_t(geom.cols));
    loc.chip_y = int(coord.y / uint32_t(geom.rows));
    loc.local_col = int(coord.x % uint32_t(geom.cols));
    loc.local_row = int(coord.y % uint32_t(geom.rows));
    return loc;
}

SystemCapacity system_capacity(const AddressLayout& layout) {
    layout.validate();
    // Widths only repartition the 30 coordinate bits, never resize the map.
    return SystemCapacity{1ULL << kCoordBits, 1ULL << (kCoordBits + kOffsetBits)};
}

} // namespace emesh
