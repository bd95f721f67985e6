#ifndef EMESH_NOC_HPP
#define EMESH_NOC_HPP

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "emesh/node.hpp"
#include "emesh/packet.hpp"
#include "emesh/router.hpp"

namespace emesh {

// Directed neighbor-to-neighbor channel. Accepts one packet per clock
// cycle (2-tick spacing); a packet entered at tick t can move into the
// downstream input slot from tick t+2, so together with one tick of
// slot residency a hop costs 3 ticks = 1.5 cycles. Capacity 2 keeps the
// pipeline full at one packet/cycle; a full link is the push-back signal.
class MeshLink {
public:
    bool exists = false;
    bool is_cut = false; // crosses the horizontal mid-cut (bisection stats)

    bool can_accept(int64_t now) const {
        return exists && size_ < 2 && now - last_accept_ >= 2;
    }

    void push(const Flit& f, int64_t now) {
        entry_[(head_ + size_) & 1] = f;
        ready_[(head_ + size_) & 1] = now + 2;
        ++size_;
        last_accept_ = now;
        ++accepts_window;
    }

    bool head_ready(int64_t now) const {
        return size_ > 0 && ready_[head_] <= now;
    }

    const Flit& head() const { return entry_[head_]; }

    void pop() {
        head_ = uint8_t((head_ + 1) & 1);
        --size_;
    }

    int size() const { return size_; }

    void reset() {
        size_ = 0;
        head_ = 0;
        last_accept_ = kNeverTick;
        accepts_window = 0;
    }

    uint32_t accepts_window = 0; // utilization meter, zeroed per window

private:
    Flit entry_[2];
    int64_t ready_[2] = {0, 0};
    uint8_t head_ = 0;
    uint8_t size_ = 0;
    int64_t last_accept_ = kNeverTick;
};

// One mesh plane of one chip: rows x cols routers, their outgoing links,
// and the per-node bounded injection queues feeding the hub inputs.
struct MeshPlane {
    NetworkClass cls = NetworkClass::Rmesh;
    std::vector<RouterState> routers;          // local raster, y*cols+x
    std::vector<MeshLink> links;               // router*4 + direction
    std::vector<std::deque<Flit>> inject_q;    // per node
    std::vector<int64_t> last_inject_cycle;    // inject() accept gate
    std::vector<int32_t> edge_iolink;          // router*4+dir -> ChipLink id or -1

    // occupancy tallies for cheap idle-plane skips and census cross-checks
    uint64_t slot_count = 0;
    uint64_t link_count = 0;
    uint64_t queue_count = 0;

    uint64_t occupancy() const { return slot_count + link_count + queue_count; }
};

struct Chip {
    ChipLocation loc;
    NodeCoord origin;
    int rows = 0;
    int cols = 0;
    std::array<MeshPlane, kNumPlanes> planes;
    std::vector<Node> nodes; // local raster
};

struct PlaneCounters {
    uint64_t injected = 0;
    uint64_t delivered = 0;
    uint64_t refused = 0;
    uint64_t payload_bytes = 0;
    // measurement window
    uint64_t delivered_window = 0;
    uint64_t payload_bytes_window = 0;
    uint64_t cut_bytes_window = 0;
};

// Applied memory effect of a delivered packet (optional log for the
// memory-ordering and memory-state oracles).
struct DeliveredEvent {
    int64_t tick = 0;
    NetworkClass plane = NetworkClass::Rmesh;
    PacketKind kind = PacketKind::Write;
    uint32_t node = 0; // destination, flat global index
    uint32_t src_node = 0;
    uint32_t packet_id = 0;
    uint32_t offset = 0;
    uint32_t size = 0;
    uint64_t data = 0; // bytes stored (writes/replies) or bytes read (requests)
    bool faulted = false;
};

// Exact latency distribution in ticks, histogram-backed so saturated
// runs stay O(1) per sample.
class LatencyRecorder {
public:
    static constexpr size_t kBuckets = 1 << 17;

    void record(int64_t ticks) {
        if (ticks < 0) ticks = 0;
        ++count_;
        sum_ += uint64_t(ticks);
        if (ticks < min_) min_ = ticks;
        if (ticks > max_) max_ = ticks;
        size_t b = size_t(ticks) < kBuckets ? size_t(ticks) : kBuckets - 1;
        if (hist_.empty()) hist_.assign(kBuckets, 0);
        ++hist_[b];
    }

    uint64_t samples() const { return count_; }
    int64_t min_ticks() const { return count_ ? min_ : 0; }
    int64_t max_ticks() const { return count_ ? max_ : 0; }
    double mean_ticks() const { return count_ ? double(sum_) / double(count_) : 0.0; }
    int64_t percentile_ticks(double p) const;

    void reset() {
        hist_.clear();
        count_ = 0;
        sum_ = 0;
        min_ = INT64_MAX;
        max_ = INT64_MIN;
    }

private:
    std::vector<uint32_t> hist_;
    uint64_t count_ = 0;
    uint64_t sum_ = 0;
    int64_t min_ = INT64_MAX;
    int64_t max_ = INT64_MIN;
};

} // namespace emesh

#endif
