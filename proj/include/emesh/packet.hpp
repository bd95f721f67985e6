#ifndef EMESH_PACKET_HPP
#define EMESH_PACKET_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "emesh/addr.hpp"

namespace emesh {

// The 136-bit NoC packet: 64 bits of destination address, 64 bits of
// payload (data for writes and replies, return address for read requests)
// and 8 bits of control.
//
// Control byte:
//   bit 0      write flag (0 = read request)
//   bits [2:1] log2(datasize in bytes), 0..3
//   bit 3      reply flag (read-return data travelling as a write)
//   bits [7:4] reserved-zero
struct NocPacket {
    uint64_t dst_raw = 0;
    uint64_t payload = 0;
    uint8_t ctrl = 0;

    bool operator==(const NocPacket&) const = default;
};

enum class PacketKind : uint8_t { Write, ReadRequest, ReadReply };

enum class NetworkClass : uint8_t { Rmesh = 0, Cmesh = 1, Xmesh = 2 };

constexpr int kNumPlanes = 3;
constexpr size_t kPacketBytes = 17; // 136 bits
constexpr uint8_t kCtrlWriteBit = 0x01;
constexpr uint8_t kCtrlSizeShift = 1;
constexpr uint8_t kCtrlSizeMask = 0x06;
constexpr uint8_t kCtrlReplyBit = 0x08;
constexpr uint8_t kCtrlReservedMask = 0xf0;

const char* network_class_name(NetworkClass c);

inline bool is_write(const NocPacket& p) { return p.ctrl & kCtrlWriteBit; }
inline bool is_reply(const NocPacket& p) { return p.ctrl & kCtrlReplyBit; }
inline uint32_t datasize_bytes(const NocPacket& p) {
    return 1u << ((p.ctrl & kCtrlSizeMask) >> kCtrlSizeShift);
}
PacketKind packet_kind(const NocPacket& p);

NocPacket make_write(GlobalAddress dst, uint64_t data, uint32_t size_bytes);
NocPacket make_read_request(GlobalAddress dst, GlobalAddress return_addr,
                            uint32_t size_bytes);
NocPacket make_read_reply(const NocPacket& request, uint64_t data);

// rmesh carries read requests; cmesh on-chip writes; xmesh off-chip
// writes (including read replies, which are writes of returned data).
NetworkClass classify_network(const NocPacket& pkt, const ChipLocation& src_chip,
                              const ChipGeometry& geom, int array_x, int array_y,
                              const AddressLayout& layout);

std::array<uint8_t, kPacketBytes> serialize(const NocPacket& pkt);
NocPacket deserialize(const uint8_t* data, size_t len);
std::string packet_hex(const NocPacket& pkt);

} // namespace emesh

#endif
