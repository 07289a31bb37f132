#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "swfc/codec.hpp"
#include "swfc/gf2.hpp"

namespace swfc {

enum class DecoderVariant {
    GaussianElimination,
    Peeling,
    Inactivation,
    TruncatedGe,
};

struct DecoderConfig {
    DecoderVariant variant = DecoderVariant::GaussianElimination;
    // TruncatedGe only: an unknown older than this many packets is abandoned
    // together with every equation touching it.
    uint64_t d_max_packets = 0;
    CodecConfig codec;

    void validate() const;
};

struct RecoveryEvent {
    uint64_t symbol = 0;
    BitBlock value;
    uint64_t delay_packets = 0;
};

struct PacketOutcome {
    uint64_t seq = 0;
    std::optional<Packet> packet;  // engaged iff delivered

    static PacketOutcome delivered(Packet p) {
        PacketOutcome o;
        o.seq = p.seq;
        o.packet = std::move(p);
        return o;
    }
    static PacketOutcome lost(uint64_t seq) {
        PacketOutcome o;
        o.seq = seq;
        return o;
    }
};

// Incrementally maintained Gaussian elimination over sparse GF(2) columns.
// Stored state is always fully reduced: every live column owns a distinct
// pivot row that appears in no other live column, so a variable is solved
// exactly when its pivot's column has no free rows left. Insertion first
// eliminates stored pivots from the incoming column, then normalizes it into
// the columns holding its new pivot; both steps preserve the column span, so
// anything the full batch elimination could recover, this form has already
// recovered.
class IncrementalGe {
public:
    struct Solved {
        uint64_t row = 0;
        BitBlock value;
    };

    enum class InsertOutcome { NewPivot, Dependent };

    struct InsertResult {
        InsertOutcome outcome = InsertOutcome::Dependent;
        uint64_t pivot = 0;  // valid for NewPivot
    };

    // `col` may only reference unsolved rows. Dependent columns with a
    // nonzero residual right-hand side mean contradictory equations and
    // throw std::logic_error. Rows solved as a side effect (unit columns
    // produced here or by normalization) are appended to `solved_out`; each
    // solved row leaves the system entirely.
    InsertResult insert(gf2::SparseColumn col, std::vector<Solved>& solved_out);

    // Abandons a row: the row and every live column containing it are
    // removed. Equations lost this way free their pivots again.
    void discard_row(uint64_t row);

    // Reduces an external row set against the stored pivots, XORing the
    // matching columns' right-hand sides into `acc`. Returns true when the
    // set empties, i.e. the combination is determined by the stored system.
    bool reduce(std::vector<uint64_t>& rows, BitBlock& acc) const;

    size_t column_count() const { return live_columns_; }
    bool is_pivot(uint64_t row) const { return pivot_slot_.contains(row); }
    uint64_t column_ops() const { return column_ops_; }

private:
    struct Slot {
        bool alive = false;
        uint64_t pivot = 0;
        std::vector<uint64_t> free_rows;  // sorted; never contains a pivot row
        BitBlock rhs;
    };

    void xor_slot_into(gf2::SparseColumn& col, const Slot& s) const;
    void retire(uint32_t slot_id);

    std::vector<Slot> slots_;
    std::vector<uint32_t> spare_slots_;
    std::unordered_map<uint64_t, uint32_t> pivot_slot_;
    // Free row -> slots whose free_rows may contain it. Entries go stale when
    // normalization XORs a row out of a column; readers re-check membership.
    std::unordered_map<uint64_t, std::vector<uint32_t>> row_slots_;
    size_t live_columns_ = 0;
    uint64_t column_ops_ = 0;
};

// Degree-one cascade only: an equation with a single unknown resolves it and
// substitutes the value everywhere, repeating while singles exist. Stored
// columns are never combined with each other, so anything this solver cannot
// reach stays pending even when full elimination would determine it.
class PeelingSolver {
public:
    void add_column(gf2::SparseColumn col, std::vector<IncrementalGe::Solved>& solved_out);
    size_t column_count() const { return live_columns_; }
    uint64_t column_ops() const { return column_ops_; }

private:
    struct Slot {
        bool alive = false;
        std::vector<uint64_t> rows;
        BitBlock rhs;
    };

    void resolve_ready(std::vector<IncrementalGe::Solved>& solved_out);
    void retire(uint32_t sid);

    std::vector<Slot> slots_;
    std::vector<uint32_t> spare_slots_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> row_slots_;
    std::vector<uint32_t> ready_;
    size_t live_columns_ = 0;
    uint64_t column_ops_ = 0;
};

// Peeling with a fallback: every ingested equation is absorbed immediately.
// Single-unknown equations resolve as usual; when only multi-unknown
// equations remain, the most shared unknown is declared inactive and carried
// symbolically, so other unknowns resolve to "constant + sum of inactive
// unknowns". Equations that close over inactive unknowns feed a small inner
// elimination; its solutions substitute back into the symbolic forms.
// Recovers exactly what full elimination recovers, at the same ingest, with
// the expensive elimination confined to the inactive set.
class InactivationSolver {
public:
    void add_column(gf2::SparseColumn col, std::vector<IncrementalGe::Solved>& solved_out);
    size_t column_count() const;
    size_t inactivated_total() const { return inactivated_total_; }
    uint64_t column_ops() const { return inner_.column_ops() + column_ops_; }

private:
    // value = acc + sum of the inactive unknowns in `terms`.
    struct Expr {
        std::vector<uint64_t> terms;  // sorted
        BitBlock acc;
    };
    struct PendingCol {
        std::vector<uint64_t> rows;  // active unknowns, sorted
        Expr rhs;
    };

    // Symmetric difference on terms; a width-0 acc means "no constant part".
    void xor_expr(Expr& into, const Expr& from);
    // Reduce e.terms against inner pivots and substitute already solved
    // inactive unknowns; true when fully determined.
    bool settle(Expr& e);
    void register_terms(uint64_t symbol, const Expr& e);
    void drain(std::vector<PendingCol>& pending, std::vector<IncrementalGe::Solved>& out);
    void resolve_active(uint64_t row, Expr e, std::vector<PendingCol>& pending,
                        std::vector<IncrementalGe::Solved>& out);
    void close_col(Expr e, std::vector<IncrementalGe::Solved>& out);
    void recheck_holders(uint64_t term, std::vector<IncrementalGe::Solved>& out);

    IncrementalGe inner_;  // equations over inactive unknowns only
    std::unordered_map<uint64_t, Expr> symbolic_;  // resolved up to inactive unknowns
    // Inactive unknown -> symbols whose stored expression may reference it.
    // Entries go stale when expressions settle; readers re-check.
    std::unordered_map<uint64_t, std::vector<uint64_t>> term_holders_;
    std::set<uint64_t> inactive_;  // currently undetermined inactive unknowns
    // Values of inactive unknowns the inner system has pinned down. Stored
    // expressions may still name them until their next settle, so the values
    // have to stay reachable for as long as stale terms can surface.
    std::unordered_map<uint64_t, BitBlock> solved_values_;
    size_t inactivated_total_ = 0;
    uint64_t column_ops_ = 0;
};

// Streaming decoder. Feed packet outcomes strictly in sequence order; data
// symbols of delivered packets pass straight through, parity symbols become
// equations over the not-yet-known window symbols, and any unknown the
// selected variant can determine is reported as a recovery with its delay.
class Decoder {
public:
    explicit Decoder(DecoderConfig cfg);

    // Throws std::invalid_argument on out-of-order or duplicate sequence
    // numbers (state is left unchanged), std::logic_error when equations
    // contradict, which means a corrupt trace or an implementation fault.
    std::vector<RecoveryEvent> ingest(const PacketOutcome& outcome);

    const std::set<uint64_t>& missing() const { return missing_; }
    uint64_t clock_packets() const { return clock_; }
    bool started() const { return started_; }
    size_t matrix_columns() const;
    uint64_t column_ops() const;
    size_t inactivated_total() const;
    // TruncatedGe: unknowns abandoned so far, ascending.
    const std::vector<uint64_t>& discarded() const { return discarded_log_; }

    const DecoderConfig& config() const { return cfg_; }

private:
    enum class CellState : uint8_t { Vacant, Known, Unknown };
    struct Cell {
        uint64_t symbol = 0;
        CellState state = CellState::Vacant;
        BitBlock value;
    };

    void truncate_stale(uint64_t now);
    void note_solved(uint64_t symbol, const BitBlock& value,
                     std::vector<RecoveryEvent>& events);
    uint64_t packet_of(uint64_t symbol) const {
        return symbol / cfg_.codec.segments_per_packet;
    }

    DecoderConfig cfg_;
    uint64_t clock_ = 0;
    bool started_ = false;
    std::set<uint64_t> missing_;
    std::vector<Cell> ring_;  // last window_symbols data symbols by index
    std::vector<uint64_t> discarded_log_;
    std::set<uint64_t> discarded_;

    DecoderVariant variant_;
    IncrementalGe ge_;
    PeelingSolver peel_;
    InactivationSolver inact_;
};

// Replays one delivered packet into `dec`, first synthesizing losses for any
// sequence gap since the last ingest. For traces that carry explicit loss
// records, feed those through `ingest` directly instead.
std::vector<RecoveryEvent> ingest_with_gaps(Decoder& dec, const Packet& p);

}  // namespace swfc
