#ifndef EMESH_MULTICHIP_HPP
#define EMESH_MULTICHIP_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "emesh/noc.hpp"
#include "emesh/trace.hpp"

namespace emesh {

// One of the 128 8-pin IO modules on a chip's periphery (32 per side).
// GPIO-mode slices are structural only; LINK-mode slices carry mesh
// packets to the abutting chip.
struct IoSlice {
    Direction side = Direction::North;
    int index = 0; // 0..31
    enum class Mode : uint8_t { Link, Gpio } mode = Mode::Gpio;
    static constexpr int kPins = 8;
    static constexpr int kSlicesPerSide = 32;
    static constexpr int kSlicesPerChip = 128;
};

// Directed chip-to-chip channel behind one LINK-mode slice. Whole
// 17-byte packets cross when the accrued payload credit covers one;
// credit accrues per IO clock and is capped at one packet's worth, so
// the default 1.5 B/IO-clock rate moves one packet every 12 IO clocks.
class ChipLink {
public:
    int src_chip = 0, dst_chip = 0;
    Direction exit_side = Direction::East;
    int src_router = 0, dst_router = 0; // local raster indices
    int rate_eighths = 12;              // payload bytes per IO clock, in 1/8 B
    size_t queue_depth = 4;

    static constexpr int kPacketEighths = int(kPacketBytes) * 8; // 136

    bool can_accept(int64_t now) const {
        return q.size() < queue_depth && now - last_accept >= 2;
    }

    void push(const Flit& f, NetworkClass plane, int64_t now) {
        q.emplace_back(f, plane);
        last_accept = now;
        ++transfers_in;
    }

    void accrue_credit() {
        credit_eighths = std::min(credit_eighths + rate_eighths, kPacketEighths);
    }

    bool head_sendable() const { return !q.empty() && credit_eighths >= kPacketEighths; }

    void consume_credit() { credit_eighths -= kPacketEighths; }

    void reset() {
        q.clear();
        credit_eighths = 0;
        last_accept = kNeverTick;
        ingress_rr = 0;
        transfers_in = 0;
    }

    std::deque<std::pair<Flit, NetworkClass>> q;
    int credit_eighths = 0;
    int64_t last_accept = kNeverTick;
    uint8_t ingress_rr = 0; // round-robin over planes at the ingress
    uint64_t transfers_in = 0;
};

struct FabricOptions {
    AddressLayout layout{};
    ChipGeometry geom{8, 8, {}};
    int chips_x = 1;
    int chips_y = 1;
    size_t inject_queue_depth = 4;
    double io_payload_rate = 1.5; // bytes per IO clock per link direction
    int io_clock_divider = 1;     // core cycles per IO clock
    size_t io_queue_depth = 4;
    bool fetch_stream = false;
    bool record_paths = false;
    bool event_log = false;
    uint64_t seed = 1;

    void validate() const;
    int total_cols() const { return chips_x * geom.cols; }
    int total_rows() const { return chips_y * geom.rows; }
    int total_nodes() const { return total_cols() * total_rows(); }
};

// The simulated system: a chips_x x chips_y array of chips, each with
// three mesh planes, wired through io-slice links. A 1x1 array is a
// plain single-chip fabric. Advanced by exactly one thread.
class Fabric {
public:
    explicit Fabric(FabricOptions opt);

    // --- simulation control -------------------------------------------
    void step(); // one tick (half clock cycle)
    void step_cycle() { step(); step(); }
    void run_cycles(int64_t cycles);
    bool run_until_idle(int64_t max_ticks);
    // Runs until nothing is in flight and every script has finished.
    bool run_to_completion(int64_t max_ticks);

    int64_t tick() const { return tick_; }
    int64_t cycle() const { return tick_ >> 1; }

    // Clears packets, queues, registers and counters; scratchpad contents
    // and scripts are left alone unless wipe_memory is set.
    void reset(bool wipe_memory = false);

    // --- traffic sources ----------------------------------------------
    // Fabric-level injection: at most one accept per (node, plane, cycle),
    // bounded queue; false = back-pressured, caller may retry. Throws on
    // malformed or unroutable destinations.
    bool inject(const NodeCoord& src, const NocPacket& pkt);

    void set_script(const NodeCoord& node, const TransactionScript* script);
    void clear_scripts();
    void set_pattern(const TrafficPattern& pattern); // all nodes
    void set_flow(const NodeCoord& node, const BackgroundFlow& flow);
    void stop_traffic(); // disable patterns and flows everywhere

    // --- topology & node access ---------------------------------------
    const FabricOptions& options() const { return opt_; }
    int total_rows() const { return opt_.total_rows(); }
    int total_cols() const { return opt_.total_cols(); }
    uint32_t node_id(const NodeCoord& c) const {
        return c.y * uint32_t(total_cols()) + c.x;
    }
    NodeCoord coord_of(uint32_t id) const {
        return NodeCoord{id % uint32_t(total_cols()), id / uint32_t(total_cols()), 0};
    }
    Node& node_at(const NodeCoord& c);
    const Node& node_at(const NodeCoord& c) const;
    Chip& chip(int cx, int cy) { return chips_[size_t(cy) * chips_x_ + cx]; }
    const Chip& chip(int cx, int cy) const { return chips_[size_t(cy) * chips_x_ + cx]; }
    const std::vector<Chip>& chips() const { return chips_; }
    std::vector<Chip>& chips() { return chips_; }
    const std::vector<ChipLink>& chip_links() const { return iolinks_; }
    const std::vector<IoSlice>& io_slices(int cx, int cy) const;

    // --- accounting -----------------------------------------------------
    PlaneCounters counters[kNumPlanes];
    LatencyRecorder latency[kNumPlanes];
    uint64_t err_out_of_range = 0;
    uint64_t err_unroutable = 0;

    // Structural census of packets inside the fabric (conservation checks).
    uint64_t in_flight(NetworkClass plane) const;
    uint64_t in_flight_total() const;
    bool conservation_holds() const;
    bool idle() const;
    bool quiescent() const;

    // Measurement window control: zeroes window counters, link meters and
    // latency recorders; latency is recorded for packets injected after this.
    void begin_window();
    int64_t window_start_tick() const { return window_start_; }

    // Optional sinks.
    TraceSink* trace = nullptr;
    std::vector<DeliveredEvent> events; // filled when opt.event_log
    const std::vector<Direction>* path_of(uint32_t packet_id) const;

private:
    friend class FabricTester;

    // tick phases
    void phase_eject(int64_t now);
    void phase_node_cycle(int64_t now);
    void phase_select(int64_t now);
    void phase_commit(int64_t now);
    void phase_link_advance(int64_t now);
    void phase_io(int64_t now);

    void apply_ejection(Chip& c, Node& n, int64_t now);
    void node_cycle(Chip& c, Node& n, int64_t now);
    void issue_script(Chip& c, Node& n, int64_t now);
    void issue_synthetic(Chip& c, Node& n, int64_t now);
    void commit_router(Chip& c, int plane_idx, int router_idx, int64_t now);
    uint8_t hub_eligible_mask(const Chip& c, const MeshPlane& p, const RouterState& rt) const;
    int8_t select_receive_plane(Chip& c, Node& n, int64_t now);
    int8_t select_io_plane(ChipLink& l, int64_t now);
    NetworkClass reply_plane(const Chip& c, const NocPacket& request) const;

    bool enqueue(Chip& c, Node& src, const NocPacket& pkt, NetworkClass plane,
                 const NodeCoord& dst, bool enforce_cycle_gate);
    NetworkClass classify(const NocPacket& pkt, const ChipLocation& src_chip) const;
    void deliver_stats(const Flit& f, NetworkClass plane, uint32_t bytes, int64_t now);
    void record_path(uint32_t id, Direction d);

    uint32_t traffic_offset(const Node& src, uint32_t size) const;

    FabricOptions opt_;
    TrafficPattern pattern_{};
    int chips_x_ = 1, chips_y_ = 1;
    std::vector<Chip> chips_;
    std::vector<ChipLink> iolinks_;
    std::vector<std::vector<IoSlice>> slices_; // per chip, 128 entries
    int64_t tick_ = 0;
    int64_t window_start_ = 0;
    uint32_t next_packet_id_ = 0;
    std::vector<int8_t> recv_select_; // per global node, plane index or -1
    std::vector<int8_t> io_select_;   // per io link, plane index or -1
    std::unordered_map<uint32_t, std::vector<Direction>> paths_;
};

// Single-chip fabric of rows x cols (the noc module's build_fabric).
Fabric build_fabric(int rows, int cols, const AddressLayout& layout = {},
                    uint64_t seed = 1);

// chips_x x chips_y array of identical chips (the multichip module).
Fabric build_array(int chips_x, int chips_y, const ChipGeometry& geom,
                   const AddressLayout& layout = {}, uint64_t seed = 1);

// Exit side for a packet leaving src_chip toward another chip: global
// dimension-order, y resolved before x.
Direction route_offchip(const ChipLocation& src_chip, const ChipLocation& dst_chip);

} // namespace emesh

#endif
