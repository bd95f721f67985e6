#include "emesh/script.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emesh {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("script line " + std::to_string(line) + ": " + msg);
}

uint64_t parse_u64(const std::string& tok, int line) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(tok, &pos, 0);
        if (pos != tok.size()) fail(line, "trailing characters in number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + tok + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range: '" + tok + "'");
    }
}

uint32_t parse_size(const std::string& tok, int line) {
    uint64_t v = parse_u64(tok, line);
    if (v != 1 && v != 2 && v != 4 && v != 8) fail(line, "size must be 1, 2, 4 or 8");
    return uint32_t(v);
}

void check_aligned(uint64_t off, uint32_t size, int line) {
    if (off % size != 0) fail(line, "offset not naturally aligned for size");
}

} // namespace

ScriptSet parse_script(std::istream& in, const AddressLayout& layout) {
    layout.validate();
    ScriptSet out;
    TransactionScript* cur = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        if (tok[0] == "node") {
            if (tok.size() != 3) fail(lineno, "node takes <x> <y>");
            uint32_t x = uint32_t(parse_u64(tok[1], lineno));
            uint32_t y = uint32_t(parse_u64(tok[2], lineno));
            cur = &out[{x, y}];
            continue;
        }
        if (!cur) fail(lineno, "transaction before any 'node' header");

        ScriptEntry e;
        if (tok[0] == "lwrite") {
            if (tok.size() != 4) fail(lineno, "lwrite takes <offset> <data> <size>");
            e.op = ScriptOp::LocalWrite;
            e.addr = parse_u64(tok[1], lineno);
            e.data = parse_u64(tok[2], lineno);
            e.size = parse_size(tok[3], lineno);
            if (e.addr >= 65536) fail(lineno, "local offset exceeds the 64KB scratchpad");
            check_aligned(e.addr, e.size, lineno);
        } else if (tok[0] == "lread") {
            if (tok.size() != 3) fail(lineno, "lread takes <offset> <size>");
            e.op = ScriptOp::LocalRead;
            e.addr = parse_u64(tok[1], lineno);
            e.size = parse_size(tok[2], lineno);
            if (e.addr >= 65536) fail(lineno, "local offset exceeds the 64KB scratchpad");
            check_aligned(e.addr, e.size, lineno);
        } else if (tok[0] == "write") {
            if (tok.size() != 4) fail(lineno, "write takes <global_addr> <data> <size>");
            e.op = ScriptOp::RemoteWrite;
            e.addr = parse_u64(tok[1], lineno);
            e.data = parse_u64(tok[2], lineno);
            e.size = parse_size(tok[3], lineno);
            if (e.addr & kReservedMask) fail(lineno, "address has reserved bits set");
            check_aligned(e.addr & kOffsetMask, e.size, lineno);
        } else if (tok[0] == "read") {
            if (tok.size() != 4 && tok.size() != 5)
                fail(lineno, "read takes <global_addr> <size> <landing_offset> [nb]");
            e.op = ScriptOp::RemoteRead;
            e.addr = parse_u64(tok[1], lineno);
            e.size = parse_size(tok[2], lineno);
            e.landing_offset = uint32_t(parse_u64(tok[3], lineno));
            if (e.addr & kReservedMask) fail(lineno, "address has reserved bits set");
            check_aligned(e.addr & kOffsetMask, e.size, lineno);
            if (e.landing_offset >= 65536) fail(lineno, "landing offset exceeds scratchpad");
            check_aligned(e.landing_offset, e.size, lineno);
            if (tok.size() == 5) {
                if (tok[4] != "nb") fail(lineno, "unknown flag '" + tok[4] + "'");
                e.blocking = false;
            }
        } else {
            fail(lineno, "unknown transaction '" + tok[0] + "'");
        }
        cur->push_back(e);
    }
    return out;
}

ScriptSet load_script_file(const std::string& path, const AddressLayout& layout) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open script file: " + path);
    return parse_script(f, layout);
}

} // namespace emesh
