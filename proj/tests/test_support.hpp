#pragma once

// Brute-force reference routes for the unit tests. Everything here works
// from first principles (per-point maps, single-level child boxes, interval
// geometry) so the box algebra under test is never exercised by its own
// checker.

#include <algorithm>
#include <set>
#include <vector>

#include "hbs/hierarchy.hpp"
#include "hbs/refinement.hpp"
#include "hbs/rng.hpp"

namespace brute {

using namespace hbs;

inline std::set<MultiIndex> box_point_set(const LatticeBox& box) {
    std::set<MultiIndex> out;
    for_each_point(box, [&](const MultiIndex& p) { out.insert(p); });
    return out;
}

// Pointwise image of a box under a componentwise index map.
template <typename MapFn>
std::set<MultiIndex> map_image(const LatticeBox& box, MapFn&& fn) {
    std::set<MultiIndex> out;
    for_each_point(box, [&](const MultiIndex& p) {
        MultiIndex q(p.size());
        for (size_t a = 0; a < p.size(); ++a) q[a] = fn(p[a]);
        out.insert(q);
    });
    return out;
}

// Single-level definitional child boxes.

inline LatticeBox def_cell_children(const SpaceConfig& cfg, const MultiIndex& i) {
    MultiIndex lo(i.size()), hi(i.size());
    for (size_t a = 0; a < i.size(); ++a) {
        lo[a] = cfg.n * i[a];
        hi[a] = cfg.n * i[a] + cfg.s();
    }
    return LatticeBox{lo, hi};
}

inline LatticeBox def_spline_children(const SpaceConfig& cfg, const MultiIndex& i) {
    MultiIndex lo(i.size()), hi(i.size());
    for (size_t a = 0; a < i.size(); ++a) {
        lo[a] = cfg.n * i[a];
        hi[a] = cfg.n * i[a] + cfg.s() * cfg.m;
    }
    return LatticeBox{lo, hi};
}

inline std::set<MultiIndex> cell_descendants(const SpaceConfig& cfg, const std::set<MultiIndex>& cells,
                                             int from_level, int k) {
    std::set<MultiIndex> cur = cells;
    for (int step = 0; step < k; ++step) {
        std::set<MultiIndex> next;
        for (const MultiIndex& c : cur)
            for_each_point(intersect(def_cell_children(cfg, c), cell_domain(cfg, from_level + step + 1)),
                           [&](const MultiIndex& p) { next.insert(p); });
        cur = std::move(next);
    }
    return cur;
}

inline std::set<MultiIndex> cell_ancestors(const SpaceConfig& cfg, const std::set<MultiIndex>& cells,
                                           int level, int k) {
    std::set<MultiIndex> out;
    for_each_point(cell_domain(cfg, level - k), [&](const MultiIndex& j) {
        std::set<MultiIndex> desc = cell_descendants(cfg, {j}, level - k, k);
        for (const MultiIndex& c : cells)
            if (desc.count(c)) {
                out.insert(j);
                break;
            }
    });
    return out;
}

inline std::set<MultiIndex> spline_descendants(const SpaceConfig& cfg, const std::set<MultiIndex>& fs,
                                               int from_level, int k) {
    std::set<MultiIndex> cur = fs;
    for (int step = 0; step < k; ++step) {
        std::set<MultiIndex> next;
        for (const MultiIndex& f : cur)
            for_each_point(intersect(def_spline_children(cfg, f), spline_domain(cfg, from_level + step + 1)),
                           [&](const MultiIndex& p) { next.insert(p); });
        cur = std::move(next);
    }
    return cur;
}

inline std::set<MultiIndex> spline_ancestors(const SpaceConfig& cfg, const std::set<MultiIndex>& fs,
                                             int level, int k) {
    std::set<MultiIndex> out;
    for_each_point(spline_domain(cfg, level - k), [&](const MultiIndex& j) {
        std::set<MultiIndex> desc = spline_descendants(cfg, {j}, level - k, k);
        for (const MultiIndex& f : fs)
            if (desc.count(f)) {
                out.insert(j);
                break;
            }
    });
    return out;
}

// Interval geometry. Supports and cells are compared as open boxes after
// clamping to the domain, on integer endpoints at a common scale.

struct Span {
    Index lo = 0, hi = 0;
    int level = 0;
};

inline Span support_span(const SpaceConfig& cfg, const SplineRef& f, size_t axis) {
    Index top = checked_pow(cfg.n, f.level);
    return Span{std::max<Index>(f.index[axis], 0),
                std::min<Index>(f.index[axis] + cfg.m, top), f.level};
}

inline Span cell_span(const CellRef& c, size_t axis) {
    return Span{c.index[axis], c.index[axis] + 1, c.level};
}

inline bool spans_overlap(const SpaceConfig& cfg, const Span& a, const Span& b) {
    int common = std::max(a.level, b.level);
    Index sa = checked_pow(cfg.n, common - a.level);
    Index sb = checked_pow(cfg.n, common - b.level);
    return a.lo * sa < b.hi * sb && b.lo * sb < a.hi * sa;
}

inline bool supports_overlap(const SpaceConfig& cfg, const SplineRef& a, const SplineRef& b) {
    for (size_t axis = 0; axis < a.index.size(); ++axis)
        if (!spans_overlap(cfg, support_span(cfg, a, axis), support_span(cfg, b, axis)))
            return false;
    return true;
}

inline bool cell_meets_support(const SpaceConfig& cfg, const CellRef& c, const SplineRef& f) {
    for (size_t axis = 0; axis < c.index.size(); ++axis)
        if (!spans_overlap(cfg, cell_span(c, axis), support_span(cfg, f, axis)))
            return false;
    return true;
}

// All cells of `level` whose interior meets the support of f.
inline std::set<MultiIndex> cells_meeting_support(const SpaceConfig& cfg, const SplineRef& f,
                                                  int level) {
    std::set<MultiIndex> out;
    for_each_point(cell_domain(cfg, level), [&](const MultiIndex& c) {
        if (cell_meets_support(cfg, CellRef{level, c}, f)) out.insert(c);
    });
    return out;
}

// All splines of `level` whose support meets some cell of the box.
inline std::set<MultiIndex> splines_meeting_cells(const SpaceConfig& cfg, const CellBox& cells,
                                                  int level) {
    std::set<MultiIndex> out;
    for_each_point(spline_domain(cfg, level), [&](const MultiIndex& f) {
        bool hit = false;
        for_each_point(cells.box, [&](const MultiIndex& c) {
            if (!hit && cell_meets_support(cfg, CellRef{cells.level, c}, SplineRef{level, f}))
                hit = true;
        });
        if (hit) out.insert(f);
    });
    return out;
}

// Random data.

inline MultiIndex random_point(Rng& rng, const LatticeBox& box) {
    MultiIndex p(box.lo.size());
    for (size_t a = 0; a < p.size(); ++a)
        p[a] = box.lo[a] + static_cast<Index>(rng.below(static_cast<std::uint64_t>(box.hi[a] - box.lo[a] + 1)));
    return p;
}

inline std::vector<Rational> random_domain_point(Rng& rng, int d) {
    std::vector<Rational> x(static_cast<size_t>(d));
    for (auto& c : x) {
        Index den = 1 + static_cast<Index>(rng.below(512));
        Index num = static_cast<Index>(rng.below(static_cast<std::uint64_t>(den) + 1));
        c = make_rational(num, den);
    }
    return x;
}

inline SplineRef random_generator_member(Rng& rng, const GeneratorView& gen) {
    std::vector<SplineRef> members = gen.members();
    return members[rng.below(members.size())];
}

// A random lineage grown by plain refinement, biased toward recently added
// functions so that depth actually develops.
inline Lineage random_lineage(const SpaceConfig& cfg, Rng& rng, int steps, int max_depth) {
    Lineage lin(cfg);
    for (int s = 0; s < steps; ++s) {
        GeneratorView gen = generator(lin);
        std::vector<SplineRef> pick;
        for (const SplineRef& f : gen.members())
            if (f.level < max_depth) pick.push_back(f);
        if (pick.empty()) break;
        // Prefer the finest admissible functions three times out of four.
        int finest = 0;
        for (const SplineRef& f : pick) finest = std::max(finest, f.level);
        if (rng.below(4) != 0) {
            std::vector<SplineRef> fine;
            for (const SplineRef& f : pick)
                if (f.level == finest) fine.push_back(f);
            pick = std::move(fine);
        }
        SplineRef chosen = pick[rng.below(pick.size())];
        single_refine(lin, chosen);
    }
    return lin;
}

} // namespace brute
