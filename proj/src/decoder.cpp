#include "swfc/decoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace swfc {

// ---------------------------------------------------------------------------
// IncrementalGe

void IncrementalGe::xor_slot_into(gf2::SparseColumn& col, const Slot& s) const {
    // The slot's full row set is {pivot} union free_rows.
    std::vector<uint64_t> full;
    full.reserve(s.free_rows.size() + 1);
    auto at = std::lower_bound(s.free_rows.begin(), s.free_rows.end(), s.pivot);
    full.insert(full.end(), s.free_rows.begin(), at);
    full.push_back(s.pivot);
    full.insert(full.end(), at, s.free_rows.end());

    std::vector<uint64_t> merged;
    merged.reserve(col.rows.size() + full.size());
    std::set_symmetric_difference(col.rows.begin(), col.rows.end(), full.begin(),
                                  full.end(), std::back_inserter(merged));
    col.rows = std::move(merged);
    col.rhs ^= s.rhs;
}

void IncrementalGe::retire(uint32_t slot_id) {
    Slot& s = slots_[slot_id];
    s.alive = false;
    pivot_slot_.erase(s.pivot);
    s.free_rows.clear();
    s.free_rows.shrink_to_fit();
    s.rhs = BitBlock();
    spare_slots_.push_back(slot_id);
    --live_columns_;
}

IncrementalGe::InsertResult IncrementalGe::insert(gf2::SparseColumn col,
                                                  std::vector<Solved>& solved_out) {
    // Eliminate stored pivots from the incoming column. One pass suffices:
    // each XOR removes the hit pivot and brings in free rows only, and free
    // rows are never pivots.
    std::vector<uint32_t> hits;
    for (uint64_t r : col.rows) {
        auto it = pivot_slot_.find(r);
        if (it != pivot_slot_.end()) hits.push_back(it->second);
    }
    for (uint32_t sid : hits) {
        xor_slot_into(col, slots_[sid]);
        ++column_ops_;
    }

    if (col.rows.empty()) {
        if (!col.rhs.is_zero()) {
            throw std::logic_error("dependent equation with nonzero residual");
        }
        return {InsertOutcome::Dependent, 0};
    }

    uint64_t pivot = col.rows.front();
    std::vector<uint64_t> free_rows(col.rows.begin() + 1, col.rows.end());

    // Clear the new pivot out of every stored column so pivot rows stay
    // exclusive to their own column.
    std::vector<uint32_t> units;
    auto rit = row_slots_.find(pivot);
    if (rit != row_slots_.end()) {
        std::vector<uint32_t> holders = std::move(rit->second);
        row_slots_.erase(rit);
        for (uint32_t sid : holders) {
            Slot& s = slots_[sid];
            if (!s.alive) continue;
            if (!std::binary_search(s.free_rows.begin(), s.free_rows.end(), pivot)) {
                continue;  // stale index entry
            }
            std::vector<uint64_t> merged;
            merged.reserve(s.free_rows.size() + col.rows.size());
            auto a = s.free_rows.begin(), ae = s.free_rows.end();
            auto b = col.rows.begin(), be = col.rows.end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && *a < *b)) {
                    merged.push_back(*a++);
                } else if (a == ae || *b < *a) {
                    // Row newly introduced into this column.
                    row_slots_[*b].push_back(sid);
                    merged.push_back(*b++);
                } else {
                    ++a;
                    ++b;
                }
            }
            s.free_rows = std::move(merged);
            s.rhs ^= col.rhs;
            ++column_ops_;
            if (s.free_rows.empty()) units.push_back(sid);
        }
    }

    uint32_t sid;
    if (!spare_slots_.empty()) {
        sid = spare_slots_.back();
        spare_slots_.pop_back();
    } else {
        sid = static_cast<uint32_t>(slots_.size());
        slots_.emplace_back();
    }
    Slot& ns = slots_[sid];
    ns.alive = true;
    ns.pivot = pivot;
    ns.free_rows = std::move(free_rows);
    ns.rhs = std::move(col.rhs);
    for (uint64_t r : ns.free_rows) row_slots_[r].push_back(sid);
    pivot_slot_[pivot] = sid;
    ++live_columns_;
    if (ns.free_rows.empty()) units.push_back(sid);

    // A unit column pins its pivot. Nothing else references a pivot row, so
    // resolving needs no further substitution.
    for (uint32_t u : units) {
        Slot& s = slots_[u];
        if (!s.alive || !s.free_rows.empty()) continue;
        solved_out.push_back({s.pivot, s.rhs});
        retire(u);
    }
    return {InsertOutcome::NewPivot, pivot};
}

void IncrementalGe::discard_row(uint64_t row) {
    auto pit = pivot_slot_.find(row);
    if (pit != pivot_slot_.end()) retire(pit->second);

    auto rit = row_slots_.find(row);
    if (rit == row_slots_.end()) return;
    std::vector<uint32_t> holders = std::move(rit->second);
    row_slots_.erase(rit);
    for (uint32_t sid : holders) {
        Slot& s = slots_[sid];
        if (!s.alive) continue;
        if (!std::binary_search(s.free_rows.begin(), s.free_rows.end(), row)) continue;
        retire(sid);
    }
}

bool IncrementalGe::reduce(std::vector<uint64_t>& rows, BitBlock& acc) const {
    std::vector<uint32_t> hits;
    for (uint64_t r : rows) {
        auto it = pivot_slot_.find(r);
        if (it != pivot_slot_.end()) hits.push_back(it->second);
    }
    gf2::SparseColumn tmp;
    tmp.rows = std::move(rows);
    tmp.rhs = std::move(acc);
    for (uint32_t sid : hits) xor_slot_into(tmp, slots_[sid]);
    rows = std::move(tmp.rows);
    acc = std::move(tmp.rhs);
    return rows.empty();
}

// ---------------------------------------------------------------------------
// PeelingSolver

void PeelingSolver::add_column(gf2::SparseColumn col,
                               std::vector<IncrementalGe::Solved>& solved_out) {
    if (col.rows.empty()) {
        if (!col.rhs.is_zero()) {
            throw std::logic_error("dependent equation with nonzero residual");
        }
        return;
    }
    uint32_t sid;
    if (!spare_slots_.empty()) {
        sid = spare_slots_.back();
        spare_slots_.pop_back();
    } else {
        sid = static_cast<uint32_t>(slots_.size());
        slots_.emplace_back();
    }
    Slot& s = slots_[sid];
    s.alive = true;
    s.rows = std::move(col.rows);
    s.rhs = std::move(col.rhs);
    for (uint64_t r : s.rows) row_slots_[r].push_back(sid);
    ++live_columns_;
    if (s.rows.size() == 1) ready_.push_back(sid);
    resolve_ready(solved_out);
}

void PeelingSolver::resolve_ready(std::vector<IncrementalGe::Solved>& solved_out) {
    while (!ready_.empty()) {
        uint32_t sid = ready_.back();
        ready_.pop_back();
        {
            Slot& s = slots_[sid];
            if (!s.alive || s.rows.size() != 1) continue;
        }
        uint64_t row = slots_[sid].rows[0];
        BitBlock value = slots_[sid].rhs;
        slots_[sid].alive = false;
        retire(sid);

        auto rit = row_slots_.find(row);
        if (rit != row_slots_.end()) {
            std::vector<uint32_t> holders = std::move(rit->second);
            row_slots_.erase(rit);
            for (uint32_t h : holders) {
                Slot& t = slots_[h];
                if (!t.alive) continue;
                auto pos = std::lower_bound(t.rows.begin(), t.rows.end(), row);
                if (pos == t.rows.end() || *pos != row) continue;
                t.rows.erase(pos);
                t.rhs ^= value;
                ++column_ops_;
                if (t.rows.size() == 1) {
                    ready_.push_back(h);
                } else if (t.rows.empty()) {
                    if (!t.rhs.is_zero()) {
                        throw std::logic_error("dependent equation with nonzero residual");
                    }
                    t.alive = false;
                    retire(h);
                }
            }
        }
        solved_out.push_back({row, std::move(value)});
    }
}

void PeelingSolver::retire(uint32_t sid) {
    Slot& s = slots_[sid];
    s.alive = false;
    s.rows.clear();
    s.rows.shrink_to_fit();
    s.rhs = BitBlock();
    spare_slots_.push_back(sid);
    --live_columns_;
}

// ---------------------------------------------------------------------------
// InactivationSolver

void InactivationSolver::xor_expr(Expr& into, const Expr& from) {
    std::vector<uint64_t> merged;
    merged.reserve(into.terms.size() + from.terms.size());
    std::set_symmetric_difference(into.terms.begin(), into.terms.end(),
                                  from.terms.begin(), from.terms.end(),
                                  std::back_inserter(merged));
    into.terms = std::move(merged);
    if (from.acc.width() == 0) return;
    if (into.acc.width() == 0) {
        into.acc = from.acc;
    } else {
        into.acc ^= from.acc;
    }
}

bool InactivationSolver::settle(Expr& e) {
    inner_.reduce(e.terms, e.acc);
    // The reduction never reintroduces a solved unknown (its row left every
    // stored column when it was pinned), so one substitution pass suffices.
    if (!solved_values_.empty() && !e.terms.empty()) {
        size_t kept = 0;
        for (uint64_t t : e.terms) {
            auto vit = solved_values_.find(t);
            if (vit == solved_values_.end()) {
                e.terms[kept++] = t;
            } else if (e.acc.width() == 0) {
                e.acc = vit->second;
            } else {
                e.acc ^= vit->second;
            }
        }
        e.terms.resize(kept);
    }
    return e.terms.empty();
}

void InactivationSolver::register_terms(uint64_t symbol, const Expr& e) {
    for (uint64_t t : e.terms) term_holders_[t].push_back(symbol);
}

void InactivationSolver::add_column(gf2::SparseColumn col,
                                    std::vector<IncrementalGe::Solved>& solved_out) {
    PendingCol pc;
    pc.rhs.acc = std::move(col.rhs);
    for (uint64_t r : col.rows) {
        auto sit = symbolic_.find(r);
        if (sit != symbolic_.end()) {
            xor_expr(pc.rhs, sit->second);
        } else if (inactive_.contains(r)) {
            Expr one;
            one.terms.push_back(r);
            xor_expr(pc.rhs, one);
        } else {
            pc.rows.push_back(r);
        }
    }
    std::vector<PendingCol> pending;
    pending.push_back(std::move(pc));
    drain(pending, solved_out);
}

void InactivationSolver::drain(std::vector<PendingCol>& pending,
                               std::vector<IncrementalGe::Solved>& out) {
    while (!pending.empty()) {
        bool acted = false;
        for (size_t i = 0; i < pending.size(); ++i) {
            if (pending[i].rows.size() > 1) continue;
            PendingCol pc = std::move(pending[i]);
            pending.erase(pending.begin() + i);
            if (pc.rows.empty()) {
                close_col(std::move(pc.rhs), out);
            } else {
                resolve_active(pc.rows[0], std::move(pc.rhs), pending, out);
            }
            acted = true;
            break;
        }
        if (acted) continue;

        // Every waiting equation still has two or more active unknowns; carry
        // the most shared one symbolically so peeling can continue. Ties go
        // to the lowest sequence number.
        uint64_t best = 0;
        size_t best_count = 0;
        std::unordered_map<uint64_t, size_t> counts;
        for (const PendingCol& c : pending) {
            for (uint64_t r : c.rows) ++counts[r];
        }
        for (const auto& [r, n] : counts) {
            if (n > best_count || (n == best_count && r < best)) {
                best = r;
                best_count = n;
            }
        }
        inactive_.insert(best);
        ++inactivated_total_;
        Expr one;
        one.terms.push_back(best);
        for (PendingCol& c : pending) {
            auto pos = std::lower_bound(c.rows.begin(), c.rows.end(), best);
            if (pos == c.rows.end() || *pos != best) continue;
            c.rows.erase(pos);
            xor_expr(c.rhs, one);
            ++column_ops_;
        }
    }
}

void InactivationSolver::resolve_active(uint64_t row, Expr e,
                                        std::vector<PendingCol>& pending,
                                        std::vector<IncrementalGe::Solved>& out) {
    if (settle(e)) {
        out.push_back({row, e.acc});
    } else {
        symbolic_[row] = e;
        register_terms(row, e);
    }
    for (PendingCol& c : pending) {
        auto pos = std::lower_bound(c.rows.begin(), c.rows.end(), row);
        if (pos == c.rows.end() || *pos != row) continue;
        c.rows.erase(pos);
        xor_expr(c.rhs, e);
        ++column_ops_;
    }
}

void InactivationSolver::close_col(Expr e, std::vector<IncrementalGe::Solved>& out) {
    if (settle(e)) {
        if (!e.acc.is_zero()) {
            throw std::logic_error("dependent equation with nonzero residual");
        }
        return;
    }
    gf2::SparseColumn col;
    col.rows = std::move(e.terms);
    col.rhs = std::move(e.acc);
    std::vector<IncrementalGe::Solved> inner_solved;
    IncrementalGe::InsertResult res = inner_.insert(std::move(col), inner_solved);
    // Values must be on record before any holder recheck, or expressions
    // naming a just-solved unknown would settle against a missing entry.
    for (IncrementalGe::Solved& s : inner_solved) {
        inactive_.erase(s.row);
        solved_values_.emplace(s.row, s.value);
    }
    if (res.outcome == IncrementalGe::InsertOutcome::NewPivot) {
        recheck_holders(res.pivot, out);
    }
    for (IncrementalGe::Solved& s : inner_solved) {
        recheck_holders(s.row, out);
    }
    for (IncrementalGe::Solved& s : inner_solved) {
        out.push_back(std::move(s));
    }
}

void InactivationSolver::recheck_holders(uint64_t term,
                                         std::vector<IncrementalGe::Solved>& out) {
    auto it = term_holders_.find(term);
    if (it == term_holders_.end()) return;
    std::vector<uint64_t> holders = std::move(it->second);
    term_holders_.erase(it);
    for (uint64_t sym : holders) {
        auto sit = symbolic_.find(sym);
        if (sit == symbolic_.end()) continue;
        Expr& e = sit->second;
        if (!std::binary_search(e.terms.begin(), e.terms.end(), term)) continue;
        if (settle(e)) {
            out.push_back({sym, std::move(e.acc)});
            symbolic_.erase(sit);
        } else {
            register_terms(sym, e);
        }
    }
}

size_t InactivationSolver::column_count() const {
    return inner_.column_count() + symbolic_.size();
}

// ---------------------------------------------------------------------------
// Decoder

void DecoderConfig::validate() const {
    codec.validate();
    if (variant == DecoderVariant::TruncatedGe && d_max_packets < 1) {
        throw std::invalid_argument("d_max_packets must be >= 1 for truncated decoding");
    }
}

Decoder::Decoder(DecoderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    variant_ = cfg_.variant;
    ring_.resize(cfg_.codec.window_symbols);
}

size_t Decoder::matrix_columns() const {
    switch (variant_) {
        case DecoderVariant::Peeling:
            return peel_.column_count();
        case DecoderVariant::Inactivation:
            return inact_.column_count();
        default:
            return ge_.column_count();
    }
}

uint64_t Decoder::column_ops() const {
    switch (variant_) {
        case DecoderVariant::Peeling:
            return peel_.column_ops();
        case DecoderVariant::Inactivation:
            return inact_.column_ops();
        default:
            return ge_.column_ops();
    }
}

size_t Decoder::inactivated_total() const {
    return variant_ == DecoderVariant::Inactivation ? inact_.inactivated_total() : 0;
}

void Decoder::truncate_stale(uint64_t now) {
    // Unknowns older than the delay budget are abandoned along with every
    // equation touching them; younger ones can still be recovered in time.
    while (!missing_.empty()) {
        uint64_t oldest = *missing_.begin();
        if (now - packet_of(oldest) <= cfg_.d_max_packets) break;
        ge_.discard_row(oldest);
        discarded_.insert(oldest);
        discarded_log_.push_back(oldest);
        missing_.erase(missing_.begin());
    }
    // Forget discards that no parity can reach any more. The packet being
    // ingested right now still looks back W symbols from its own start, so
    // that window is the one that bounds reachability here.
    uint64_t first = now * cfg_.codec.segments_per_packet;
    uint64_t horizon = first > cfg_.codec.window_symbols ? first - cfg_.codec.window_symbols : 0;
    while (!discarded_.empty() && *discarded_.begin() < horizon) {
        discarded_.erase(discarded_.begin());
    }
}

void Decoder::note_solved(uint64_t symbol, const BitBlock& value,
                          std::vector<RecoveryEvent>& events) {
    if (missing_.erase(symbol) == 0) {
        throw std::logic_error("recovered a symbol that was not pending");
    }
    Cell& c = ring_[symbol % cfg_.codec.window_symbols];
    if (c.state == CellState::Unknown && c.symbol == symbol) {
        c.state = CellState::Known;
        c.value = value;
    }
    events.push_back({symbol, value, clock_ - packet_of(symbol)});
}

std::vector<RecoveryEvent> Decoder::ingest(const PacketOutcome& outcome) {
    uint64_t expected = started_ ? clock_ + 1 : 0;
    if (outcome.seq != expected) {
        throw std::invalid_argument("packet sequence must advance by one");
    }
    const CodecConfig& cc = cfg_.codec;
    if (outcome.packet) {
        const Packet& p = *outcome.packet;
        if (p.seq != outcome.seq || p.data.size() != cc.segments_per_packet ||
            p.parity.size() != cc.parities_per_packet) {
            throw std::invalid_argument("packet shape disagrees with codec config");
        }
    }

    started_ = true;
    clock_ = outcome.seq;
    if (variant_ == DecoderVariant::TruncatedGe) truncate_stale(clock_);

    std::vector<RecoveryEvent> events;
    const uint32_t l = cc.segments_per_packet;
    uint64_t first = outcome.seq * l;

    if (!outcome.packet) {
        for (uint32_t j = 0; j < l; ++j) {
            uint64_t sym = first + j;
            missing_.insert(sym);
            ring_[sym % cc.window_symbols] = Cell{sym, CellState::Unknown, BitBlock()};
        }
        return events;
    }

    const Packet& p = *outcome.packet;
    std::vector<IncrementalGe::Solved> solved;
    for (uint32_t k = 0; k < cc.parities_per_packet; ++k) {
        std::vector<uint64_t> idx = parity_indices(cc, p.seq, k);
        gf2::SparseColumn col;
        col.rhs = p.parity[k];
        bool usable = true;
        for (uint64_t i : idx) {
            const Cell& c = ring_[i % cc.window_symbols];
            if (c.state == CellState::Known && c.symbol == i) {
                col.rhs ^= c.value;
            } else if (discarded_.contains(i)) {
                // An abandoned unknown poisons the whole equation.
                usable = false;
                break;
            } else {
                col.rows.push_back(i);
            }
        }
        if (!usable) continue;
        if (col.rows.empty()) {
            if (!col.rhs.is_zero()) {
                throw std::logic_error("parity disagrees with known data");
            }
            continue;
        }
        switch (variant_) {
            case DecoderVariant::Peeling:
                peel_.add_column(std::move(col), solved);
                break;
            case DecoderVariant::Inactivation:
                inact_.add_column(std::move(col), solved);
                break;
            default:
                ge_.insert(std::move(col), solved);
                break;
        }
        // Fold each recovery into the ring right away so the next parity of
        // this same packet sees it as known instead of re-deriving it.
        for (IncrementalGe::Solved& s : solved) note_solved(s.row, s.value, events);
        solved.clear();
    }

    // Data symbols enter the ring after the parities are interpreted; a
    // packet's parities never reference its own payload.
    for (uint32_t j = 0; j < l; ++j) {
        uint64_t sym = first + j;
        ring_[sym % cc.window_symbols] = Cell{sym, CellState::Known, p.data[j]};
    }

    return events;
}

std::vector<RecoveryEvent> ingest_with_gaps(Decoder& dec, const Packet& p) {
    uint64_t expected = dec.started() ? dec.clock_packets() + 1 : 0;
    if (p.seq < expected) {
        throw std::invalid_argument("trace sequence moved backwards");
    }
    std::vector<RecoveryEvent> events;
    for (uint64_t s = expected; s < p.seq; ++s) {
        auto e = dec.ingest(PacketOutcome::lost(s));
        events.insert(events.end(), e.begin(), e.end());
    }
    auto e = dec.ingest(PacketOutcome::delivered(p));
    events.insert(events.end(), e.begin(), e.end());
    return events;
}

}  // namespace swfc
