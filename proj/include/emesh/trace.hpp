#ifndef EMESH_TRACE_HPP
#define EMESH_TRACE_HPP

#include <cstdint>
#include <fstream>
#include <string>

#include "emesh/packet.hpp"

namespace emesh {

// Newline-delimited event trace:
//   <tick> <plane> <event> <34-hex-digit 136-bit packet>
// with event one of inject, hop, eject.
class TraceSink {
public:
    explicit TraceSink(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open trace file: " + path);
    }

    void record(int64_t tick, NetworkClass plane, const char* event,
                const NocPacket& pkt) {
        out_ << tick << ' ' << network_class_name(plane) << ' ' << event << ' '
             << packet_hex(pkt) << '\n';
    }

    void flush() { out_.flush(); }

private:
    std::ofstream out_;
};

} // namespace emesh

#endif
