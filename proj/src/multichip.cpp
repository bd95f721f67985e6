#include "emesh/multichip.hpp"

#include <cassert>
#include <stdexcept>

namespace emesh {

void FabricOptions::validate() const {
    layout.validate();
    geom.validate();
    if (chips_x < 1 || chips_y < 1)
        throw std::invalid_argument("fabric: chip array dims must be >= 1");
    if ((chips_x > 1 || chips_y > 1) &&
        (geom.rows > IoSlice::kSlicesPerSide || geom.cols > IoSlice::kSlicesPerSide))
        throw std::invalid_argument(
            "fabric: multichip arrays need chip edges <= 32 nodes (one io-slice per edge row)");
    auto fits = [](int v, int bits) {
        return bits >= 31 || v <= (1 << bits);
    };
    if (!fits(total_cols(), layout.x_bits) || !fits(total_rows(), layout.y_bits))
        throw std::invalid_argument("fabric: mesh does not fit the address layout widths");
    if (inject_queue_depth < 1 || io_queue_depth < 1)
        throw std::invalid_argument("fabric: queue depths must be >= 1");
    if (io_payload_rate <= 0.0)
        throw std::invalid_argument("fabric: io payload rate must be positive");
    if (io_clock_divider < 1)
        throw std::invalid_argument("fabric: io clock divider must be >= 1");
}

Direction route_offchip(const ChipLocation& src_chip, const ChipLocation& dst_chip) {
    if (dst_chip.chip_y != src_chip.chip_y)
        return dst_chip.chip_y > src_chip.chip_y ? Direction::South : Direction::North;
    if (dst_chip.chip_x != src_chip.chip_x)
        return dst_chip.chip_x > src_chip.chip_x ? Direction::East : Direction::West;
    throw std::invalid_argument("route_offchip: destination chip equals source chip");
}

namespace {

int rate_to_eighths(double rate) {
    // 1/8-byte fixed point keeps the credit arithmetic exact.
    double scaled = rate * 8.0;
    int e = int(scaled + 0.5);
    if (e < 1) e = 1;
    return e;
}

} // namespace

Fabric::Fabric(FabricOptions opt) : opt_(opt) {
    opt_.validate();
    chips_x_ = opt_.chips_x;
    chips_y_ = opt_.chips_y;

    const int rows = opt_.geom.rows;
    const int cols = opt_.geom.cols;
    const int mid_row = opt_.total_rows() / 2; // horizontal bisection cut

    chips_.resize(size_t(chips_x_) * chips_y_);
    slices_.resize(chips_.size());
    for (int cy = 0; cy < chips_y_; ++cy) {
        for (int cx = 0; cx < chips_x_; ++cx) {
            Chip& c = chip(cx, cy);
            c.loc = ChipLocation{cx, cy, 0, 0};
            c.origin = NodeCoord{uint32_t(cx) * uint32_t(cols),
                                 uint32_t(cy) * uint32_t(rows), 0};
            c.rows = rows;
            c.cols = cols;
            c.nodes.resize(size_t(rows) * cols);
            for (int p = 0; p < kNumPlanes; ++p) {
                MeshPlane& pl = c.planes[size_t(p)];
                pl.cls = NetworkClass(p);
                pl.routers.resize(size_t(rows) * cols);
                pl.links.resize(size_t(rows) * cols * kNumLinkDirections);
                pl.inject_q.resize(size_t(rows) * cols);
                pl.last_inject_cycle.assign(size_t(rows) * cols, kNeverTick);
                pl.edge_iolink.assign(size_t(rows) * cols * kNumLinkDirections, -1);
            }
            for (int ly = 0; ly < rows; ++ly) {
                for (int lx = 0; lx < cols; ++lx) {
                    size_t r = size_t(ly) * cols + lx;
                    NodeCoord g{c.origin.x + uint32_t(lx), c.origin.y + uint32_t(ly), 0};
                    Node& n = c.nodes[r];
                    n.coord = g;
                    n.id = node_id(g);
                    n.chip_loc = chip_of(g, opt_.geom);
                    n.rng.seed(mix64(opt_.seed, n.id));
                    for (int p = 0; p < kNumPlanes; ++p) {
                        MeshPlane& pl = c.planes[size_t(p)];
                        pl.routers[r].coord = g;
                        MeshLink* lk = &pl.links[r * kNumLinkDirections];
                        lk[int(Direction::North)].exists = ly > 0;
                        lk[int(Direction::South)].exists = ly < rows - 1;
                        lk[int(Direction::West)].exists = lx > 0;
                        lk[int(Direction::East)].exists = lx < cols - 1;
                        if (opt_.total_rows() % 2 == 0) {
                            if (int(g.y) == mid_row - 1 && lk[int(Direction::South)].exists)
                                lk[int(Direction::South)].is_cut = true;
                            if (int(g.y) == mid_row && lk[int(Direction::North)].exists)
                                lk[int(Direction::North)].is_cut = true;
                        }
                    }
                }
            }
        }
    }

    // io-slices: 32 per side, LINK mode where a neighbor chip abuts.
    // Slice i on the east/west sides serves local row i; on the north/
    // south sides local column i. Each LINK-mode slice with a neighbor
    // becomes one directed ChipLink per traffic direction.
    for (int cy = 0; cy < chips_y_; ++cy) {
        for (int cx = 0; cx < chips_x_; ++cx) {
            auto& sl = slices_[size_t(cy) * chips_x_ + cx];
            sl.clear();
            sl.reserve(IoSlice::kSlicesPerChip);
            for (Direction side :
                 {Direction::North, Direction::East, Direction::West, Direction::South}) {
                bool neighbor = (side == Direction::North && cy > 0) ||
                                (side == Direction::South && cy < chips_y_ - 1) ||
                                (side == Direction::West && cx > 0) ||
                                (side == Direction::East && cx < chips_x_ - 1);
                int lanes = (side == Direction::East || side == Direction::West) ? rows : cols;
                for (int i = 0; i < IoSlice::kSlicesPerSide; ++i) {
                    IoSlice s;
                    s.side = side;
                    s.index = i;
                    s.mode = (neighbor && i < lanes) ? IoSlice::Mode::Link
                                                     : IoSlice::Mode::Gpio;
                    sl.push_back(s);
                }
            }
            assert(sl.size() == IoSlice::kSlicesPerChip);
        }
    }

    // Directed chip links on abutting edges. Wired once as the "east or
    // south" link of the lower-indexed chip plus its reverse.
    auto add_link = [&](int scx, int scy, Direction side, int lane) {
        ChipLink l;
        l.src_chip = scy * chips_x_ + scx;
        l.exit_side = side;
        l.rate_eighths = rate_to_eighths(opt_.io_payload_rate);
        l.queue_depth = opt_.io_queue_depth;
        int dcx = scx + (side == Direction::East ? 1 : side == Direction::West ? -1 : 0);
        int dcy = scy + (side == Direction::South ? 1 : side == Direction::North ? -1 : 0);
        l.dst_chip = dcy * chips_x_ + dcx;
        if (side == Direction::East) {
            l.src_router = lane * cols + (cols - 1);
            l.dst_router = lane * cols + 0;
        } else if (side == Direction::West) {
            l.src_router = lane * cols + 0;
            l.dst_router = lane * cols + (cols - 1);
        } else if (side == Direction::South) {
            l.src_router = (rows - 1) * cols + lane;
            l.dst_router = 0 * cols + lane;
        } else {
            l.src_router = 0 * cols + lane;
            l.dst_router = (rows - 1) * cols + lane;
        }
        int32_t id = int32_t(iolinks_.size());
        Chip& sc = chips_[size_t(l.src_chip)];
        for (int p = 0; p < kNumPlanes; ++p)
            sc.planes[size_t(p)]
                .edge_iolink[size_t(l.src_router) * kNumLinkDirections + int(side)] = id;
        iolinks_.push_back(l);
    };
    for (int cy = 0; cy < chips_y_; ++cy) {
        for (int cx = 0; cx < chips_x_; ++cx) {
            if (cx + 1 < chips_x_) {
                for (int r = 0; r < rows; ++r) {
                    add_link(cx, cy, Direction::East, r);
                    add_link(cx + 1, cy, Direction::West, r);
                }
            }
            if (cy + 1 < chips_y_) {
                for (int col = 0; col < cols; ++col) {
                    add_link(cx, cy, Direction::South, col);
                    add_link(cx, cy + 1, Direction::North, col);
                }
            }
        }
    }

    recv_select_.assign(size_t(opt_.total_nodes()), -1);
    io_select_.assign(iolinks_.size(), -1);
}

const std::vector<IoSlice>& Fabric::io_slices(int cx, int cy) const {
    return slices_[size_t(cy) * chips_x_ + cx];
}

Node& Fabric::node_at(const NodeCoord& c) {
    ChipLocation loc = chip_of(c, opt_.geom);
    if (loc.chip_x >= chips_x_ || loc.chip_y >= chips_y_)
        throw std::out_of_range("node_at: coordinate outside the chip array");
    Chip& ch = chip(loc.chip_x, loc.chip_y);
    return ch.nodes[size_t(loc.local_row) * ch.cols + loc.local_col];
}

const Node& Fabric::node_at(const NodeCoord& c) const {
    return const_cast<Fabric*>(this)->node_at(c);
}

void Fabric::set_script(const NodeCoord& node, const TransactionScript* script) {
    Node& n = node_at(node);
    n.script = script;
    n.pc = 0;
    n.blocked = false;
    n.has_pending_read = false;
}

void Fabric::clear_scripts() {
    for (Chip& c : chips_)
        for (Node& n : c.nodes) {
            n.script = nullptr;
            n.pc = 0;
            n.blocked = false;
            n.has_pending_read = false;
        }
}

void Fabric::set_pattern(const TrafficPattern& pattern) {
    pattern.validate(total_rows(), total_cols());
    pattern_ = pattern;
    for (Chip& c : chips_)
        for (Node& n : c.nodes) {
            n.pattern_active = true;
            n.rng.seed(mix64(pattern.seed, n.id));
            n.traffic_seq = 0;
        }
}

void Fabric::set_flow(const NodeCoord& node, const BackgroundFlow& flow) {
    Node& n = node_at(node);
    if (flow.rate <= 0.0 || flow.rate > 1.0)
        throw std::invalid_argument("background flow rate must be in (0, 1]");
    n.has_flow = true;
    n.flow = flow;
}

void Fabric::stop_traffic() {
    for (Chip& c : chips_)
        for (Node& n : c.nodes) {
            n.pattern_active = false;
            n.has_flow = false;
        }
}

uint64_t Fabric::in_flight(NetworkClass plane) const {
    uint64_t n = 0;
    const int p = int(plane);
    for (const Chip& c : chips_) {
        const MeshPlane& pl = c.planes[size_t(p)];
        for (const auto& q : pl.inject_q) n += q.size();
        for (const auto& r : pl.routers) n += r.occupied_count;
        for (const auto& l : pl.links) n += uint64_t(l.size());
        for (const Node& nd : c.nodes)
            if (nd.ej_full && nd.ej_plane == plane) ++n;
    }
    for (const ChipLink& l : iolinks_)
        for (const auto& [f, pc] : l.q)
            if (pc == plane) ++n;
    return n;
}

uint64_t Fabric::in_flight_total() const {
    return in_flight(NetworkClass::Rmesh) + in_flight(NetworkClass::Cmesh) +
           in_flight(NetworkClass::Xmesh);
}

bool Fabric::conservation_holds() const {
    for (int p = 0; p < kNumPlanes; ++p)
        if (counters[p].injected != counters[p].delivered + in_flight(NetworkClass(p)))
            return false;
    return true;
}

bool Fabric::idle() const { return in_flight_total() == 0; }

bool Fabric::quiescent() const {
    if (!idle()) return false;
    for (const Chip& c : chips_)
        for (const Node& n : c.nodes)
            if (n.blocked || !n.script_done()) return false;
    return true;
}

void Fabric::run_cycles(int64_t cycles) {
    for (int64_t i = 0; i < 2 * cycles; ++i) step();
}

bool Fabric::run_until_idle(int64_t max_ticks) {
    for (int64_t i = 0; i < max_ticks; ++i) {
        if (idle()) return true;
        step();
    }
    return idle();
}

bool Fabric::run_to_completion(int64_t max_ticks) {
    for (int64_t i = 0; i < max_ticks; ++i) {
        if (quiescent()) return true;
        step();
    }
    return quiescent();
}

void Fabric::reset(bool wipe_memory) {
    for (Chip& c : chips_) {
        for (MeshPlane& pl : c.planes) {
            for (auto& r : pl.routers) r.reset();
            for (auto& l : pl.links) l.reset();
            for (auto& q : pl.inject_q) q.clear();
            pl.last_inject_cycle.assign(pl.last_inject_cycle.size(), kNeverTick);
            pl.slot_count = pl.link_count = pl.queue_count = 0;
        }
        for (Node& n : c.nodes) {
            n.reset_dynamic_state();
            n.script = nullptr;
            n.rng.seed(mix64(opt_.seed, n.id));
            if (wipe_memory) std::fill(n.mem.bytes.begin(), n.mem.bytes.end(), 0);
        }
    }
    for (ChipLink& l : iolinks_) l.reset();
    for (int p = 0; p < kNumPlanes; ++p) {
        counters[p] = PlaneCounters{};
        latency[p].reset();
    }
    err_out_of_range = 0;
    err_unroutable = 0;
    tick_ = 0;
    window_start_ = 0;
    next_packet_id_ = 0;
    events.clear();
    paths_.clear();
    std::fill(recv_select_.begin(), recv_select_.end(), int8_t(-1));
    std::fill(io_select_.begin(), io_select_.end(), int8_t(-1));
}

const std::vector<Direction>* Fabric::path_of(uint32_t packet_id) const {
    auto it = paths_.find(packet_id);
    return it == paths_.end() ? nullptr : &it->second;
}

Fabric build_fabric(int rows, int cols, const AddressLayout& layout, uint64_t seed) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("build_fabric: mesh dims must be >= 1");
    FabricOptions opt;
    opt.layout = layout;
    opt.geom = ChipGeometry{rows, cols, {}};
    opt.chips_x = opt.chips_y = 1;
    opt.seed = seed;
    return Fabric(opt);
}

Fabric build_array(int chips_x, int chips_y, const ChipGeometry& geom,
                   const AddressLayout& layout, uint64_t seed) {
    FabricOptions opt;
    opt.layout = layout;
    opt.geom = geom;
    opt.chips_x = chips_x;
    opt.chips_y = chips_y;
    opt.seed = seed;
    return Fabric(opt);
}

} // namespace emesh
