#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "kinst/errors.hpp"

namespace kinst {

// Young diagram as weakly decreasing positive row lengths.  Cells are
// 1-indexed (row i, column j); the empty diagram has no rows.
class YoungDiagram {
  public:
    YoungDiagram() = default;
    explicit YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] <= 0 || (i > 0 && rows_[i] > rows_[i - 1]))
                throw Error("row lengths must be weakly decreasing and positive");
        }
    }

    const std::vector<int>& rows() const { return rows_; }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int row(int i) const { // 1-indexed; 0 beyond the diagram
        return (i >= 1 && i <= num_rows()) ? rows_[static_cast<size_t>(i - 1)] : 0;
    }
    int col(int j) const { // column length, 1-indexed
        int n = 0;
        for (int len : rows_)
            if (len >= j) ++n;
        return n;
    }
    int size() const {
        int s = 0;
        for (int len : rows_) s += len;
        return s;
    }
    bool empty() const { return rows_.empty(); }

    bool contains(int i, int j) const { return i >= 1 && j >= 1 && j <= row(i); }

    YoungDiagram transpose() const {
        std::vector<int> t;
        for (int j = 1; j <= (rows_.empty() ? 0 : rows_[0]); ++j) t.push_back(col(j));
        return YoungDiagram(std::move(t));
    }

    std::vector<std::pair<int, int>> cells() const {
        std::vector<std::pair<int, int>> cs;
        for (int i = 1; i <= num_rows(); ++i)
            for (int j = 1; j <= row(i); ++j) cs.emplace_back(i, j);
        return cs;
    }

    // comma-separated row lengths, "-" when empty
    std::string str() const {
        if (rows_.empty()) return "-";
        std::ostringstream os;
        for (size_t i = 0; i < rows_.size(); ++i) {
            if (i) os << ",";
            os << rows_[i];
        }
        return os.str();
    }

    friend bool operator==(const YoungDiagram& a, const YoungDiagram& b) {
        return a.rows_ == b.rows_;
    }
    friend bool operator<(const YoungDiagram& a, const YoungDiagram& b) {
        return a.rows_ < b.rows_;
    }

  private:
    std::vector<int> rows_;
};

struct CellStats {
    int arm, leg, coarm, coleg;
};

// arm/leg/co-arm/co-leg of a cell of Y.
inline CellStats cell_stats(const YoungDiagram& Y, int i, int j) {
    if (!Y.contains(i, j)) throw CellOutOfDiagram();
    return {Y.row(i) - j, Y.col(j) - i, j - 1, i - 1};
}

// Arm/leg measured against another (possibly different, possibly empty)
// diagram; negative when the cell lies outside it.
inline int arm_in(const YoungDiagram& Y, int i, int j) { return Y.row(i) - j; }
inline int leg_in(const YoungDiagram& Y, int i, int j) { return Y.col(j) - i; }

// r-tuple of Young diagrams, the fixed-point index on the plane.
struct YoungTuple {
    std::vector<YoungDiagram> diagrams;

    int rank() const { return static_cast<int>(diagrams.size()); }
    int total() const {
        int s = 0;
        for (const auto& d : diagrams) s += d.size();
        return s;
    }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < diagrams.size(); ++i) {
            if (i) s += ";";
            s += diagrams[i].str();
        }
        return s;
    }

    friend bool operator==(const YoungTuple& a, const YoungTuple& b) {
        return a.diagrams == b.diagrams;
    }
};

// All partitions of n in lexicographic order.
inline std::vector<YoungDiagram> partitions_of(int n) {
    std::vector<YoungDiagram> out;
    std::vector<int> tmp;
    // enumerate as weakly increasing, then reverse each to weakly decreasing
    auto rec = [&](auto&& self, int rem, int minpart) -> void {
        if (rem == 0) {
            std::vector<int> rows(tmp.rbegin(), tmp.rend());
            out.emplace_back(std::move(rows));
            return;
        }
        for (int p = minpart; p <= rem; ++p) {
            tmp.push_back(p);
            self(self, rem - p, p);
            tmp.pop_back();
        }
    };
    rec(rec, n, 1);
    std::sort(out.begin(), out.end());
    return out;
}

// All r-tuples of total size n: lexicographic over compositions of n into r
// parts, then lexicographic partitions per part.  The order is part of the
// cache contract.
inline std::vector<YoungTuple> enumerate_tuples(int r, int n) {
    if (r < 1 || n < 0) throw RangeViolation("enumerate_tuples needs r >= 1, n >= 0");
    std::vector<std::vector<YoungDiagram>> per_size;
    for (int k = 0; k <= n; ++k) per_size.push_back(partitions_of(k));

    std::vector<YoungTuple> out;
    std::vector<int> comp(static_cast<size_t>(r), 0);
    auto rec = [&](auto&& self, int slot, int rem) -> void {
        if (slot == r - 1) {
            comp[static_cast<size_t>(slot)] = rem;
            std::vector<size_t> idx(static_cast<size_t>(r), 0);
            auto emit = [&](auto&& emit_self, int d) -> void {
                if (d == r) {
                    YoungTuple t;
                    for (int q = 0; q < r; ++q)
                        t.diagrams.push_back(
                            per_size[static_cast<size_t>(comp[static_cast<size_t>(q)])]
                                    [idx[static_cast<size_t>(q)]]);
                    out.push_back(std::move(t));
                    return;
                }
                auto& opts = per_size[static_cast<size_t>(comp[static_cast<size_t>(d)])];
                for (size_t x = 0; x < opts.size(); ++x) {
                    idx[static_cast<size_t>(d)] = x;
                    emit_self(emit_self, d + 1);
                }
            };
            emit(emit, 0);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            comp[static_cast<size_t>(slot)] = v;
            self(self, slot + 1, rem - v);
        }
    };
    rec(rec, 0, n);
    return out;
}

} // namespace kinst
