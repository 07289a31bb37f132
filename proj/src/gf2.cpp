#include "swfc/gf2.hpp"

#include <algorithm>
#include <unordered_map>

namespace swfc::gf2 {

bool SparseColumn::contains(uint64_t row) const {
    return std::binary_search(rows.begin(), rows.end(), row);
}

void xor_into(SparseColumn& target, const SparseColumn& source) {
    std::vector<uint64_t> merged;
    merged.reserve(target.rows.size() + source.rows.size());
    std::set_symmetric_difference(target.rows.begin(), target.rows.end(),
                                  source.rows.begin(), source.rows.end(),
                                  std::back_inserter(merged));
    target.rows = std::move(merged);
    target.rhs ^= source.rhs;
}

size_t rank(const SparseGf2Matrix& m) {
    // Column-wise forward elimination. Each accepted column is keyed by its
    // smallest row; tails stay above the key, so reducing an incoming
    // column's front row to a non-key either empties it (dependent) or finds
    // a fresh pivot.
    std::unordered_map<uint64_t, std::vector<uint64_t>> pivot_by_row;
    size_t r = 0;
    for (const SparseColumn& c : m.columns) {
        std::vector<uint64_t> rows = c.rows;
        while (!rows.empty()) {
            auto it = pivot_by_row.find(rows.front());
            if (it == pivot_by_row.end()) break;
            std::vector<uint64_t> merged;
            std::set_symmetric_difference(rows.begin(), rows.end(),
                                          it->second.begin(), it->second.end(),
                                          std::back_inserter(merged));
            rows = std::move(merged);
        }
        if (!rows.empty()) {
            uint64_t key = rows.front();
            pivot_by_row.emplace(key, std::move(rows));
            ++r;
        }
    }
    return r;
}

bool prune_row(SparseGf2Matrix& m, uint64_t row) {
    if (m.active_rows.erase(row) == 0) return false;
    std::erase_if(m.columns,
                  [row](const SparseColumn& c) { return c.contains(row); });
    return true;
}

uint64_t max_column_span(const SparseGf2Matrix& m) {
    uint64_t widest = 0;
    for (const SparseColumn& c : m.columns) {
        if (c.rows.empty()) continue;
        widest = std::max(widest, c.rows.back() - c.rows.front() + 1);
    }
    return widest;
}

}  // namespace swfc::gf2
