#include "emesh/noc.hpp"

#include <cassert>
#include <stdexcept>

#include "emesh/multichip.hpp"

namespace emesh {

int64_t LatencyRecorder::percentile_ticks(double p) const {
    if (!count_) return 0;
    uint64_t want = uint64_t(double(count_) * p);
    if (want >= count_) want = count_ - 1;
    uint64_t seen = 0;
    for (size_t b = 0; b < hist_.size(); ++b) {
        seen += hist_[b];
        if (seen > want) return int64_t(b);
    }
    return max_;
}

namespace {

inline size_t link_index(int router, Direction d) {
    return size_t(router) * kNumLinkDirections + int(d);
}

inline int neighbor_index(int router, Direction d, int cols) {
    switch (d) {
        case Direction::North: return router - cols;
        case Direction::South: return router + cols;
        case Direction::East: return router + 1;
        case Direction::West: return router - 1;
        default: return router;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// injection

NetworkClass Fabric::classify(const NocPacket& pkt, const ChipLocation& src_chip) const {
    return classify_network(pkt, src_chip, opt_.geom, chips_x_, chips_y_, opt_.layout);
}

bool Fabric::inject(const NodeCoord& src, const NocPacket& pkt) {
    Node& n = node_at(src);
    Chip& c = chip(n.chip_loc.chip_x, n.chip_loc.chip_y);
    auto [dst, offset] = decode_address(GlobalAddress{pkt.dst_raw}, opt_.layout);
    (void)offset;
    if (int(dst.x) >= total_cols() || int(dst.y) >= total_rows() || dst.z != 0) {
        ++err_unroutable;
        throw std::out_of_range("inject: destination outside the configured mesh");
    }
    if (packet_kind(pkt) == PacketKind::ReadRequest) {
        auto [ret, roff] = decode_address(GlobalAddress{pkt.payload}, opt_.layout);
        (void)roff;
        if (int(ret.x) >= total_cols() || int(ret.y) >= total_rows() || ret.z != 0) {
            ++err_unroutable;
            throw std::out_of_range("inject: return address outside the configured mesh");
        }
    }
    NetworkClass plane = classify(pkt, n.chip_loc);
    bool ok = enqueue(c, n, pkt, plane, dst, /*enforce_cycle_gate=*/true);
    if (!ok) ++counters[int(plane)].refused;
    return ok;
}

bool Fabric::enqueue(Chip& c, Node& src, const NocPacket& pkt, NetworkClass plane,
                     const NodeCoord& dst, bool enforce_cycle_gate) {
    MeshPlane& pl = c.planes[size_t(plane)];
    size_t local = size_t(src.chip_loc.local_row) * c.cols + src.chip_loc.local_col;
    if (enforce_cycle_gate) {
        if (pl.last_inject_cycle[local] == cycle()) return false;
    }
    auto& q = pl.inject_q[local];
    if (q.size() >= opt_.inject_queue_depth) return false;

    Flit f;
    f.pkt = pkt;
    f.dst = dst;
    f.id = next_packet_id_++;
    f.inject_tick = tick_;
    f.src_node = src.id;
    q.push_back(f);
    ++pl.queue_count;
    if (enforce_cycle_gate) pl.last_inject_cycle[local] = cycle();
    ++counters[int(plane)].injected;
    if (trace) trace->record(tick_, plane, "inject", pkt);
    return true;
}

// ---------------------------------------------------------------------------
// tick loop

void Fabric::step() {
    const int64_t now = tick_;
    phase_eject(now);
    if ((now & 1) == 0) phase_node_cycle(now);
    phase_select(now);
    phase_commit(now);
    phase_link_advance(now);
    phase_io(now);
    ++tick_;
}

void Fabric::phase_eject(int64_t now) {
    for (Chip& c : chips_)
        for (Node& n : c.nodes)
            if (n.ej_full && n.ej_ready <= now) apply_ejection(c, n, now);
}

void Fabric::phase_node_cycle(int64_t now) {
    for (Chip& c : chips_)
        for (Node& n : c.nodes) node_cycle(c, n, now);
}

void Fabric::phase_select(int64_t now) {
    for (Chip& c : chips_)
        for (Node& n : c.nodes) recv_select_[n.id] = select_receive_plane(c, n, now);
    for (size_t i = 0; i < iolinks_.size(); ++i)
        io_select_[i] = select_io_plane(iolinks_[i], now);
}

void Fabric::phase_commit(int64_t now) {
    for (Chip& c : chips_) {
        for (int p = 0; p < kNumPlanes; ++p) {
            MeshPlane& pl = c.planes[size_t(p)];
            if (pl.slot_count == 0) continue;
            const int nrouters = c.rows * c.cols;
            for (int r = 0; r < nrouters; ++r)
                if (pl.routers[size_t(r)].occupied_count) commit_router(c, p, r, now);
        }
    }
}

void Fabric::commit_router(Chip& c, int plane_idx, int router_idx, int64_t now) {
    MeshPlane& pl = c.planes[size_t(plane_idx)];
    RouterState& rt = pl.routers[size_t(router_idx)];

    uint8_t masks[kNumDirections] = {};
    for (int d = 0; d < kNumDirections; ++d)
        if (rt.in[d].occupied) masks[int(rt.in[d].request)] |= uint8_t(1u << d);

    for (int out = 0; out < kNumDirections; ++out) {
        uint8_t m = masks[out];
        if (!m) continue;

        if (Direction(out) == Direction::Hub) {
            Node& n = c.nodes[size_t(router_idx)];
            if (recv_select_[n.id] != int8_t(plane_idx)) continue;
            m = uint8_t(m & hub_eligible_mask(c, pl, rt));
            if (!m) continue;
            Direction g = rt.arb[out].grant(m);
            Flit f = rt.take(g);
            --pl.slot_count;
            n.ej_full = true;
            n.ej_flit = f;
            n.ej_plane = NetworkClass(plane_idx);
            n.ej_ready = now + 2; // ejection overhead: one cycle after the last hop
            n.last_eject_grant = now;
            continue;
        }

        MeshLink& lk = pl.links[link_index(router_idx, Direction(out))];
        if (lk.exists) {
            if (!lk.can_accept(now)) continue;
            Direction g = rt.arb[out].grant(m);
            Flit f = rt.take(g);
            --pl.slot_count;
            lk.push(f, now);
            ++pl.link_count;
            if (lk.is_cut && now >= window_start_)
                counters[plane_idx].cut_bytes_window += datasize_bytes(f.pkt);
            if (opt_.record_paths) record_path(f.id, Direction(out));
            if (trace) trace->record(now, NetworkClass(plane_idx), "hop", f.pkt);
            continue;
        }

        int32_t io_id = pl.edge_iolink[link_index(router_idx, Direction(out))];
        if (io_id >= 0) {
            ChipLink& il = iolinks_[size_t(io_id)];
            if (io_select_[size_t(io_id)] != int8_t(plane_idx)) continue;
            if (!il.can_accept(now)) continue;
            Direction g = rt.arb[out].grant(m);
            Flit f = rt.take(g);
            --pl.slot_count;
            il.push(f, NetworkClass(plane_idx), now);
            if (opt_.record_paths) record_path(f.id, Direction(out));
            if (trace) trace->record(now, NetworkClass(plane_idx), "hop", f.pkt);
            continue;
        }

        // A request off the mesh with no link means an unroutable packet
        // slipped past injection validation.
        assert(false && "packet routed off-mesh with no attached link");
    }
}

uint8_t Fabric::hub_eligible_mask(const Chip& c, const MeshPlane& pl,
                                  const RouterState& rt) const {
    uint8_t m = 0;
    for (int d = 0; d < kNumDirections; ++d) {
        const InputSlot& s = rt.in[d];
        if (!s.occupied || s.request != Direction::Hub) continue;
        if (packet_kind(s.flit.pkt) == PacketKind::ReadRequest) {
            // Service needs room to queue the reply; otherwise push back.
            NetworkClass rp = reply_plane(c, s.flit.pkt);
            const MeshPlane& rpl = c.planes[size_t(rp)];
            size_t local = size_t(&rt - pl.routers.data());
            if (rpl.inject_q[local].size() >= opt_.inject_queue_depth) continue;
        }
        m |= uint8_t(1u << d);
    }
    return m;
}

NetworkClass Fabric::reply_plane(const Chip& c, const NocPacket& request) const {
    auto [ret, off] = decode_address(GlobalAddress{request.payload}, opt_.layout);
    (void)off;
    ChipLocation rc = chip_of(ret, opt_.geom);
    bool same = rc.chip_x == c.loc.chip_x && rc.chip_y == c.loc.chip_y;
    return same ? NetworkClass::Cmesh : NetworkClass::Xmesh;
}

int8_t Fabric::select_receive_plane(Chip& c, Node& n, int64_t now) {
    if (n.ej_full) return -1;
    if (now - n.last_eject_grant < 2) return -1; // 8 bytes/cycle receive budget
    size_t local = size_t(n.chip_loc.local_row) * c.cols + n.chip_loc.local_col;
    for (int i = 0; i < kNumPlanes; ++i) {
        int p = (n.recv_rr + i) % kNumPlanes;
        const MeshPlane& pl = c.planes[size_t(p)];
        const RouterState& rt = pl.routers[local];
        if (!rt.occupied_count) continue;
        if (hub_eligible_mask(c, pl, rt)) {
            n.recv_rr = uint8_t((p + 1) % kNumPlanes);
            return int8_t(p);
        }
    }
    return -1;
}

int8_t Fabric::select_io_plane(ChipLink& l, int64_t now) {
    if (!l.can_accept(now)) return -1;
    Chip& c = chips_[size_t(l.src_chip)];
    for (int i = 0; i < kNumPlanes; ++i) {
        int p = (l.ingress_rr + i) % kNumPlanes;
        const RouterState& rt = c.planes[size_t(p)].routers[size_t(l.src_router)];
        if (!rt.occupied_count) continue;
        for (int d = 0; d < kNumDirections; ++d) {
            if (rt.in[d].occupied && rt.in[d].request == l.exit_side) {
                l.ingress_rr = uint8_t((p + 1) % kNumPlanes);
                return int8_t(p);
            }
        }
    }
    return -1;
}

void Fabric::phase_link_advance(int64_t now) {
    for (Chip& c : chips_) {
        for (int p = 0; p < kNumPlanes; ++p) {
            MeshPlane& pl = c.planes[size_t(p)];
            if (pl.link_count == 0) continue;
            const int nrouters = c.rows * c.cols;
            for (int r = 0; r < nrouters; ++r) {
                for (int d = 0; d < kNumLinkDirections; ++d) {
                    MeshLink& lk = pl.links[link_index(r, Direction(d))];
                    if (!lk.head_ready(now)) continue;
                    int nr = neighbor_index(r, Direction(d), c.cols);
                    RouterState& down = pl.routers[size_t(nr)];
                    InputSlot& slot = down.in[int(opposite(Direction(d)))];
                    if (slot.occupied) continue;
                    down.put(opposite(Direction(d)), lk.head());
                    lk.pop();
                    --pl.link_count;
                    ++pl.slot_count;
                }
            }
        }
    }
}

void Fabric::phase_io(int64_t now) {
    if (iolinks_.empty()) return;
    if (now % (2 * opt_.io_clock_divider) != 0) return; // IO clock boundary
    for (ChipLink& l : iolinks_) {
        l.accrue_credit();
        if (!l.head_sendable()) continue;
        auto& [f, plane] = l.q.front();
        Chip& dc = chips_[size_t(l.dst_chip)];
        MeshPlane& pl = dc.planes[size_t(plane)];
        RouterState& down = pl.routers[size_t(l.dst_router)];
        InputSlot& slot = down.in[int(opposite(l.exit_side))];
        if (slot.occupied) continue; // hold; credit stays capped at one packet
        down.put(opposite(l.exit_side), f);
        ++pl.slot_count;
        l.q.pop_front();
        l.consume_credit();
    }
}

// ---------------------------------------------------------------------------
// node behavior

void Fabric::apply_ejection(Chip& c, Node& n, int64_t now) {
    Flit& f = n.ej_flit;
    const NetworkClass plane = n.ej_plane;
    const uint32_t offset = uint32_t(f.pkt.dst_raw & kOffsetMask);
    const uint32_t size = datasize_bytes(f.pkt);
    const PacketKind kind = packet_kind(f.pkt);
    const int64_t window = (now + 1) >> 1;

    DeliveredEvent ev;
    ev.tick = now;
    ev.plane = plane;
    ev.kind = kind;
    ev.node = n.id;
    ev.src_node = f.src_node;
    ev.packet_id = f.id;
    ev.offset = offset;
    ev.size = size;

    if (kind == PacketKind::ReadRequest) {
        NetworkClass rp = reply_plane(c, f.pkt);
        MeshPlane& rpl = c.planes[size_t(rp)];
        size_t local = size_t(n.chip_loc.local_row) * c.cols + n.chip_loc.local_col;
        if (rpl.inject_q[local].size() >= opt_.inject_queue_depth)
            return; // reply queue filled since the grant; retry next tick

        if (offset + size > Scratchpad::kCapacity || offset % size != 0) {
            ++n.err_out_of_range;
            ++err_out_of_range;
            ev.faulted = true; // dropped: no reply is generated
        } else {
            uint64_t data = n.mem.load(offset, size);
            n.mark_bank(window, bank_of(offset));
            ev.data = data;
            NocPacket reply = make_read_reply(f.pkt, data);
            auto [rdst, roff] = decode_address(GlobalAddress{reply.dst_raw}, opt_.layout);
            (void)roff;
            bool ok = enqueue(c, n, reply, rp, rdst, /*enforce_cycle_gate=*/false);
            assert(ok);
            (void)ok;
        }
    } else {
        if (offset + size > Scratchpad::kCapacity || offset % size != 0) {
            ++n.err_out_of_range;
            ++err_out_of_range;
            ev.faulted = true;
        } else {
            n.mem.store(offset, f.pkt.payload, size);
            n.mark_bank(window, bank_of(offset));
            ev.data = f.pkt.payload;
        }
        if (kind == PacketKind::ReadReply && n.has_pending_read &&
            offset == n.pending_landing) {
            n.blocked = false;
            n.has_pending_read = false;
        }
    }

    n.ej_full = false;
    deliver_stats(f, plane, ev.faulted ? 0 : size, now);
    if (opt_.event_log) events.push_back(ev);
    if (trace) trace->record(now, plane, "eject", f.pkt);
}

void Fabric::deliver_stats(const Flit& f, NetworkClass plane, uint32_t bytes, int64_t now) {
    PlaneCounters& pc = counters[int(plane)];
    ++pc.delivered;
    pc.payload_bytes += bytes;
    if (now >= window_start_) {
        ++pc.delivered_window;
        pc.payload_bytes_window += bytes;
    }
    if (f.inject_tick >= window_start_)
        latency[int(plane)].record(now - f.inject_tick);
}

void Fabric::node_cycle(Chip& c, Node& n, int64_t now) {
    issue_script(c, n, now);
    issue_synthetic(c, n, now);

    if (opt_.fetch_stream) {
        const int64_t window = (now + 1) >> 1;
        if (!n.bank_busy(window, n.fetch_bank)) {
            n.mark_bank(window, n.fetch_bank);
            n.fetch_bytes += PortBudget::kFetchBytes;
            n.fetch_bank = uint8_t((n.fetch_bank + 1) & 3);
        }
    }

    // Send port: move one queued packet into its plane's hub input slot,
    // round-robin over planes (8 bytes/cycle net-send budget).
    size_t local = size_t(n.chip_loc.local_row) * c.cols + n.chip_loc.local_col;
    for (int i = 0; i < kNumPlanes; ++i) {
        int p = (n.send_rr + i) % kNumPlanes;
        MeshPlane& pl = c.planes[size_t(p)];
        auto& q = pl.inject_q[local];
        if (q.empty()) continue;
        RouterState& rt = pl.routers[local];
        if (rt.in[int(Direction::Hub)].occupied) continue;
        rt.put(Direction::Hub, q.front());
        q.pop_front();
        --pl.queue_count;
        ++pl.slot_count;
        n.send_rr = uint8_t((p + 1) % kNumPlanes);
        break;
    }
}

void Fabric::issue_script(Chip& c, Node& n, int64_t now) {
    if (!n.script || n.blocked || n.pc >= n.script->size()) return;
    const ScriptEntry& e = (*n.script)[n.pc];
    const int64_t window = (now + 1) >> 1;

    auto local_access = [&](uint32_t offset, uint32_t size, bool is_write,
                            uint64_t data) -> bool {
        if (offset + size > Scratchpad::kCapacity) {
            ++n.err_out_of_range;
            ++err_out_of_range;
            return true; // faulted op is consumed
        }
        int bank = bank_of(offset);
        if (n.bank_busy(window, bank)) {
            ++n.bank_stalls;
            return false; // retry next cycle
        }
        n.mark_bank(window, bank);
        if (is_write) n.mem.store(offset, data, size);
        return true;
    };

    switch (e.op) {
        case ScriptOp::LocalWrite:
            if (!local_access(uint32_t(e.addr), e.size, true, e.data)) return;
            break;
        case ScriptOp::LocalRead:
            if (!local_access(uint32_t(e.addr), e.size, false, 0)) return;
            break;
        case ScriptOp::RemoteWrite: {
            if (is_local(GlobalAddress{e.addr}, n.coord, opt_.layout)) {
                if (!local_access(uint32_t(e.addr & kOffsetMask), e.size, true, e.data))
                    return;
                break;
            }
            NocPacket pkt = make_write(GlobalAddress{e.addr}, e.data, e.size);
            auto [dst, off] = decode_address(GlobalAddress{e.addr}, opt_.layout);
            (void)off;
            NetworkClass plane = classify(pkt, n.chip_loc);
            if (!enqueue(c, n, pkt, plane, dst, true)) return; // back-pressured
            break;
        }
        case ScriptOp::RemoteRead: {
            if (is_local(GlobalAddress{e.addr}, n.coord, opt_.layout)) {
                if (!local_access(uint32_t(e.addr & kOffsetMask), e.size, false, 0))
                    return;
                break;
            }
            GlobalAddress ret =
                encode_address(n.coord, e.landing_offset, opt_.layout);
            NocPacket pkt = make_read_request(GlobalAddress{e.addr}, ret, e.size);
            auto [dst, off] = decode_address(GlobalAddress{e.addr}, opt_.layout);
            (void)off;
            if (!enqueue(c, n, pkt, NetworkClass::Rmesh, dst, true)) return;
            if (e.blocking) {
                n.blocked = true;
                n.has_pending_read = true;
                n.pending_landing = e.landing_offset;
            }
            break;
        }
    }
    ++n.pc;
    ++n.issued_ops;
}

void Fabric::issue_synthetic(Chip& c, Node& n, int64_t now) {
    (void)now;
    if (n.has_flow) {
        if (!n.rng.chance(n.flow.rate)) return;
        uint32_t offset = traffic_offset(n, n.flow.size);
        GlobalAddress dst = encode_address(n.flow.dst, offset, opt_.layout);
        NocPacket pkt = make_write(dst, mix64(n.id, n.traffic_seq), n.flow.size);
        NetworkClass plane = classify(pkt, n.chip_loc);
        if (enqueue(c, n, pkt, plane, n.flow.dst, true))
            ++n.traffic_seq;
        else
            ++counters[int(plane)].refused;
        return;
    }
    if (!n.pattern_active) return;
    if (pattern_.rate < 1.0 && !n.rng.chance(pattern_.rate)) return;
    auto dst = pattern_dest(pattern_, n.coord, total_rows(), total_cols(), n.rng);
    if (!dst) return; // pattern maps this node to itself this cycle
    uint32_t offset = traffic_offset(n, pattern_.size);
    GlobalAddress addr = encode_address(*dst, offset, opt_.layout);
    NocPacket pkt = make_write(addr, mix64(n.id, n.traffic_seq), pattern_.size);
    NetworkClass plane = classify(pkt, n.chip_loc);
    if (enqueue(c, n, pkt, plane, *dst, true))
        ++n.traffic_seq;
    else
        ++counters[int(plane)].refused;
}

uint32_t Fabric::traffic_offset(const Node& src, uint32_t size) const {
    // Partition destination scratchpads by source so concurrent writers
    // never overlap: each source owns a power-of-two region.
    uint32_t nodes = uint32_t(opt_.total_nodes());
    uint32_t region = 8;
    while (region * 2 * uint64_t(nodes) <= Scratchpad::kCapacity) region *= 2;
    uint32_t base = (src.id * region) % Scratchpad::kCapacity;
    uint32_t off = base + uint32_t(src.traffic_seq * 8) % region;
    return off & ~(size - 1);
}

void Fabric::record_path(uint32_t id, Direction d) { paths_[id].push_back(d); }

void Fabric::begin_window() {
    window_start_ = tick_;
    for (int p = 0; p < kNumPlanes; ++p) {
        counters[p].delivered_window = 0;
        counters[p].payload_bytes_window = 0;
        counters[p].cut_bytes_window = 0;
        latency[p].reset();
    }
    for (Chip& c : chips_)
        for (MeshPlane& pl : c.planes)
            for (MeshLink& l : pl.links) l.accepts_window = 0;
}

} // namespace emesh
