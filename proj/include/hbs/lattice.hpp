#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

#include "hbs/int_math.hpp"

namespace hbs {

/// A point of the integer lattice Z^d. Comparison with operator< is
/// lexicographic (total order for container keys); the partial order of the
/// lattice is exposed through all_leq below.
using MultiIndex = std::vector<Index>;

inline MultiIndex broadcast(Index v, int d) { return MultiIndex(static_cast<size_t>(d), v); }

inline bool all_leq(const MultiIndex& a, const MultiIndex& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k]) return false;
    return true;
}

/// Axis-aligned box of lattice points [lo : hi]. Empty when lo > hi on any
/// axis; empty boxes are kept in a canonical form so that equality tests work.
struct LatticeBox {
    MultiIndex lo;
    MultiIndex hi;

    static LatticeBox empty(int d) {
        return LatticeBox{broadcast(0, d), broadcast(-1, d)};
    }

    static LatticeBox of(MultiIndex lo, MultiIndex hi) {
        LatticeBox b{std::move(lo), std::move(hi)};
        b.normalize();
        return b;
    }

    static LatticeBox single(const MultiIndex& p) { return LatticeBox{p, p}; }

    int dim() const { return static_cast<int>(lo.size()); }

    bool is_empty() const {
        for (size_t k = 0; k < lo.size(); ++k)
            if (lo[k] > hi[k]) return true;
        return false;
    }

    void normalize() {
        if (is_empty()) *this = empty(dim());
    }

    bool contains(const MultiIndex& p) const {
        if (is_empty()) return false;
        for (size_t k = 0; k < lo.size(); ++k)
            if (p[k] < lo[k] || p[k] > hi[k]) return false;
        return true;
    }

    Index cardinality() const {
        if (is_empty()) return 0;
        Index c = 1;
        for (size_t k = 0; k < lo.size(); ++k)
            c = checked_mul(c, checked_add(checked_sub(hi[k], lo[k]), 1));
        return c;
    }

    bool operator==(const LatticeBox& o) const { return lo == o.lo && hi == o.hi; }
};

inline LatticeBox intersect(const LatticeBox& a, const LatticeBox& b) {
    if (a.is_empty() || b.is_empty()) return LatticeBox::empty(a.dim());
    MultiIndex lo(a.lo.size()), hi(a.hi.size());
    for (size_t k = 0; k < a.lo.size(); ++k) {
        lo[k] = a.lo[k] > b.lo[k] ? a.lo[k] : b.lo[k];
        hi[k] = a.hi[k] < b.hi[k] ? a.hi[k] : b.hi[k];
    }
    return LatticeBox::of(std::move(lo), std::move(hi));
}

/// Visits every point of the box in lexicographic order.
inline void for_each_point(const LatticeBox& box, const std::function<void(const MultiIndex&)>& fn) {
    if (box.is_empty()) return;
    MultiIndex p = box.lo;
    const size_t d = p.size();
    while (true) {
        fn(p);
        size_t k = d;
        while (k > 0) {
            --k;
            if (p[k] < box.hi[k]) {
                ++p[k];
                for (size_t j = k + 1; j < d; ++j) p[j] = box.lo[j];
                break;
            }
            if (k == 0) return;
        }
    }
}

inline std::vector<MultiIndex> box_points(const LatticeBox& box) {
    std::vector<MultiIndex> out;
    for_each_point(box, [&](const MultiIndex& p) { out.push_back(p); });
    return out;
}

} // namespace hbs
