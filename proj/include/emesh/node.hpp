#ifndef EMESH_NODE_HPP
#define EMESH_NODE_HPP

#include <cstdint>
#include <vector>

#include "emesh/addr.hpp"
#include "emesh/packet.hpp"
#include "emesh/rng.hpp"
#include "emesh/router.hpp"
#include "emesh/script.hpp"
#include "emesh/traffic.hpp"

namespace emesh {

// 64KB software-managed scratchpad, four banks interleaved on 8-byte
// words (offset bits [4:3]). Each bank services one access per cycle.
struct Scratchpad {
    static constexpr uint32_t kCapacity = 65536;
    static constexpr int kNumBanks = 4;

    std::vector<uint8_t> bytes = std::vector<uint8_t>(kCapacity, 0);

    uint64_t load(uint32_t offset, uint32_t size) const {
        uint64_t v = 0;
        for (uint32_t i = 0; i < size; ++i)
            v |= uint64_t(bytes[offset + i]) << (8 * i); // little-endian
        return v;
    }

    void store(uint32_t offset, uint64_t data, uint32_t size) {
        for (uint32_t i = 0; i < size; ++i)
            bytes[offset + i] = uint8_t(data >> (8 * i));
    }
};

// Bank index for an in-scratchpad offset; throws out_of_range beyond 64KB.
int bank_of(uint32_t offset);

// The four per-cycle port allowances (8 bytes each).
struct PortBudget {
    static constexpr uint32_t kFetchBytes = 8;
    static constexpr uint32_t kLoadStoreBytes = 8;
    static constexpr uint32_t kNetReceiveBytes = 8;
    static constexpr uint32_t kNetSendBytes = 8;
};

// Fixed-destination background flow (litmus congestion plans).
struct BackgroundFlow {
    NodeCoord dst;
    double rate = 0.5;
    uint32_t size = 8;
};

constexpr int64_t kNeverTick = INT64_MIN / 2;

// One processor node: scratchpad, transaction source, and the ejection
// side of the three hub ports. All mutation is driven by the fabric
// scheduler; nothing here is shared between nodes.
struct Node {
    NodeCoord coord;        // global
    uint32_t id = 0;        // flat global index
    ChipLocation chip_loc;

    Scratchpad mem;

    // script execution (program order; one issue per cycle)
    const TransactionScript* script = nullptr;
    size_t pc = 0;
    bool blocked = false;          // waiting on a blocking remote read
    bool has_pending_read = false;
    uint32_t pending_landing = 0;

    // synthetic traffic
    bool pattern_active = false;
    bool has_flow = false;
    BackgroundFlow flow;
    Rng rng;
    uint64_t traffic_seq = 0;

    // ejection register: one hub grant in flight at a time per node
    bool ej_full = false;
    Flit ej_flit;
    NetworkClass ej_plane = NetworkClass::Rmesh;
    int64_t ej_ready = 0;
    int64_t last_eject_grant = kNeverTick;

    uint8_t send_rr = 0; // round-robin over planes for the send port
    uint8_t recv_rr = 0; // round-robin over planes for the receive port

    // bank arbitration window: ticks {2k-1, 2k} form window k, so receive
    // effects (phase 0) always precede script issue (cycle phase) within
    // a window, giving net-receive priority over load/store over fetch.
    int64_t bank_window = -1;
    uint8_t bank_mask = 0;
    uint8_t fetch_bank = 0;

    // counters
    uint64_t err_out_of_range = 0;
    uint64_t issued_ops = 0;
    uint64_t bank_stalls = 0;
    uint64_t fetch_bytes = 0;

    bool bank_busy(int64_t window, int bank) {
        roll_window(window);
        return bank_mask & (1u << bank);
    }

    void mark_bank(int64_t window, int bank) {
        roll_window(window);
        bank_mask |= uint8_t(1u << bank);
    }

    void roll_window(int64_t window) {
        if (bank_window != window) {
            bank_window = window;
            bank_mask = 0;
        }
    }

    bool script_done() const { return !script || pc >= script->size(); }

    void reset_dynamic_state() {
        pc = 0;
        blocked = false;
        has_pending_read = false;
        pattern_active = false;
        has_flow = false;
        traffic_seq = 0;
        ej_full = false;
        last_eject_grant = kNeverTick;
        send_rr = recv_rr = 0;
        bank_window = -1;
        bank_mask = 0;
        fetch_bank = 0;
        err_out_of_range = 0;
        issued_ops = 0;
        bank_stalls = 0;
        fetch_bytes = 0;
    }
};

} // namespace emesh

#endif
