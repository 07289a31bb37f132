#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "swfc/bitblock.hpp"

namespace swfc::gf2 {

// One GF(2) equation: the set of unknowns with coefficient 1 (as strictly
// increasing sequence numbers) plus the running XOR on the right-hand side.
// Sequence numbers are unbounded; only the band a column touches is stored.
struct SparseColumn {
    std::vector<uint64_t> rows;
    BitBlock rhs;

    size_t degree() const { return rows.size(); }
    bool contains(uint64_t row) const;
};

// target <- target + source: row sets take their symmetric difference, the
// right-hand sides XOR.
void xor_into(SparseColumn& target, const SparseColumn& source);

struct SparseGf2Matrix {
    std::vector<SparseColumn> columns;
    std::set<uint64_t> active_rows;
};

// Number of linearly independent columns. The input is not modified.
size_t rank(const SparseGf2Matrix& m);

// Drops `row` and every column with a one in it. Returns false and leaves the
// matrix alone when the row is not active.
bool prune_row(SparseGf2Matrix& m, uint64_t row);

// Widest index span over columns (max row minus min row, plus one). A bound
// on how far any single equation reaches; zero for an empty matrix.
uint64_t max_column_span(const SparseGf2Matrix& m);

}  // namespace swfc::gf2
