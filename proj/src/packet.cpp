#include "emesh/packet.hpp"

#include <stdexcept>

namespace emesh {

const char* network_class_name(NetworkClass c) {
    switch (c) {
        case NetworkClass::Rmesh: return "rmesh";
        case NetworkClass::Cmesh: return "cmesh";
        case NetworkClass::Xmesh: return "xmesh";
    }
    return "?";
}

PacketKind packet_kind(const NocPacket& p) {
    if (!is_write(p)) return PacketKind::ReadRequest;
    return is_reply(p) ? PacketKind::ReadReply : PacketKind::Write;
}

namespace {

uint8_t size_field(uint32_t size_bytes) {
    switch (size_bytes) {
        case 1: return 0;
        case 2: return 1;
        case 4: return 2;
        case 8: return 3;
        default:
            throw std::invalid_argument("packet datasize must be 1, 2, 4 or 8 bytes");
    }
}

void check_address(GlobalAddress a, const char* what) {
    if (a.raw & kReservedMask)
        throw std::invalid_argument(std::string(what) +
                                    ": reserved address bits [63:50] set");
}

} // namespace

NocPacket make_write(GlobalAddress dst, uint64_t data, uint32_t size_bytes) {
    check_address(dst, "make_write dst");
    NocPacket p;
    p.dst_raw = dst.raw;
    // Sub-8-byte data rides right-aligned, remaining payload bytes zero.
    p.payload = size_bytes >= 8 ? data : (data & ((1ULL << (8 * size_bytes)) - 1));
    p.ctrl = uint8_t(kCtrlWriteBit | (size_field(size_bytes) << kCtrlSizeShift));
    return p;
}

NocPacket make_read_request(GlobalAddress dst, GlobalAddress return_addr,
                            uint32_t size_bytes) {
    check_address(dst, "make_read_request dst");
    check_address(return_addr, "make_read_request return");
    NocPacket p;
    p.dst_raw = dst.raw;
    p.payload = return_addr.raw; // second address in place of the data
    p.ctrl = uint8_t(size_field(size_bytes) << kCtrlSizeShift);
    return p;
}

NocPacket make_read_reply(const NocPacket& request, uint64_t data) {
    if (packet_kind(request) != PacketKind::ReadRequest)
        throw std::invalid_argument("make_read_reply: input is not a read request");
    uint32_t size = datasize_bytes(request);
    NocPacket p;
    p.dst_raw = request.payload; // deliver to the return address
    p.payload = size >= 8 ? data : (data & ((1ULL << (8 * size)) - 1));
    p.ctrl = uint8_t(request.ctrl | kCtrlWriteBit | kCtrlReplyBit);
    return p;
}

NetworkClass classify_network(const NocPacket& pkt, const ChipLocation& src_chip,
                              const ChipGeometry& geom, int array_x, int array_y,
                              const AddressLayout& layout) {
    auto [dst, offset] = decode_address(GlobalAddress{pkt.dst_raw}, layout);
    (void)offset;
    ChipLocation dst_chip = chip_of(dst, geom);
    if (dst_chip.chip_x >= array_x || dst_chip.chip_y >= array_y)
        throw std::out_of_range("classify_network: destination outside chip array");
    if (!is_write(pkt)) return NetworkClass::Rmesh;
    bool same_chip = dst_chip.chip_x == src_chip.chip_x &&
                     dst_chip.chip_y == src_chip.chip_y;
    return same_chip ? NetworkClass::Cmesh : NetworkClass::Xmesh;
}

std::array<uint8_t, kPacketBytes> serialize(const NocPacket& pkt) {
    // ctrl || dst || payload, ctrl most significant, fields big-endian.
    std::array<uint8_t, kPacketBytes> out;
    out[0] = pkt.ctrl;
    for (int i = 0; i < 8; ++i) {
        out[1 + i] = uint8_t(pkt.dst_raw >> (8 * (7 - i)));
        out[9 + i] = uint8_t(pkt.payload >> (8 * (7 - i)));
    }
    return out;
}

NocPacket deserialize(const uint8_t* data, size_t len) {
    if (len != kPacketBytes)
        throw std::invalid_argument("deserialize: packet word must be 136 bits");
    NocPacket p;
    p.ctrl = data[0];
    if (p.ctrl & kCtrlReservedMask)
        throw std::invalid_argument("deserialize: reserved ctrl bits set");
    for (int i = 0; i < 8; ++i) {
        p.dst_raw = (p.dst_raw << 8) | data[1 + i];
        p.payload = (p.payload << 8) | data[9 + i];
    }
    if (p.dst_raw & kReservedMask)
        throw std::invalid_argument("deserialize: reserved address bits set");
    return p;
}

std::string packet_hex(const NocPacket& pkt) {
    static const char* digits = "0123456789abcdef";
    auto bytes = serialize(pkt);
    std::string s(2 * kPacketBytes, '0');
    for (size_t i = 0; i < kPacketBytes; ++i) {
        s[2 * i] = digits[bytes[i] >> 4];
        s[2 * i + 1] = digits[bytes[i] & 0xf];
    }
    return s;
}

} // namespace emesh
