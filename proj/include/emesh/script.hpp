#ifndef EMESH_SCRIPT_HPP
#define EMESH_SCRIPT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "emesh/addr.hpp"

namespace emesh {

enum class ScriptOp : uint8_t { LocalRead, LocalWrite, RemoteRead, RemoteWrite };

// One transaction in a node's program-order stream.
struct ScriptEntry {
    ScriptOp op = ScriptOp::LocalWrite;
    uint64_t addr = 0;          // global raw address (remote) or offset (local)
    uint64_t data = 0;          // write data
    uint32_t size = 8;          // 1/2/4/8, naturally aligned
    uint32_t landing_offset = 0; // remote reads: where the reply data lands
    bool blocking = true;        // remote reads: stall the stream until reply
};

using TransactionScript = std::vector<ScriptEntry>;

// Scripts keyed by global node coordinate (x, y); z is always 0 here.
using ScriptSet = std::map<std::pair<uint32_t, uint32_t>, TransactionScript>;

// Line-based script file:
//   # comment
//   node <x> <y>
//   lwrite <offset> <data> <size>
//   lread  <offset> <size>
//   write  <global_addr> <data> <size>
//   read   <global_addr> <size> <landing_offset> [nb]
// Numbers accept decimal or 0x hex. Errors carry the line number.
ScriptSet parse_script(std::istream& in, const AddressLayout& layout);
ScriptSet load_script_file(const std::string& path, const AddressLayout& layout);

} // namespace emesh

#endif
