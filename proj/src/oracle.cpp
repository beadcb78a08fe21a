#include "hbs/oracle.hpp"

#include <algorithm>
#include <map>

namespace hbs::oracle {

namespace {

// ---------------------------------------------------------------------------
// Support geometry. All tests run on integer endpoints scaled to a common
// level; supports are open per axis, clamped to the domain.

struct AxisSpan {
    Index lo = 0, hi = 0; // at scale n^level
    int level = 0;
};

AxisSpan support_span(const SpaceConfig& cfg, const SplineRef& f, size_t axis) {
    Index top = checked_pow(cfg.n, f.level);
    Index lo = std::max<Index>(f.index[axis], 0);
    Index hi = std::min<Index>(checked_add(f.index[axis], cfg.m), top);
    return AxisSpan{lo, hi, f.level};
}

bool spans_overlap(const SpaceConfig& cfg, const AxisSpan& a, const AxisSpan& b) {
    int common = std::max(a.level, b.level);
    Index sa = checked_pow(cfg.n, common - a.level);
    Index sb = checked_pow(cfg.n, common - b.level);
    return checked_mul(a.lo, sa) < checked_mul(b.hi, sb) &&
           checked_mul(b.lo, sb) < checked_mul(a.hi, sa);
}

bool supports_overlap(const SpaceConfig& cfg, const SplineRef& a, const SplineRef& b) {
    for (size_t axis = 0; axis < a.index.size(); ++axis)
        if (!spans_overlap(cfg, support_span(cfg, a, axis), support_span(cfg, b, axis)))
            return false;
    return true;
}

bool cell_meets_support(const SpaceConfig& cfg, const CellRef& cell, const SplineRef& f) {
    for (size_t axis = 0; axis < cell.index.size(); ++axis) {
        AxisSpan c{cell.index[axis], cell.index[axis] + 1, cell.level};
        if (!spans_overlap(cfg, c, support_span(cfg, f, axis)))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Mixed-level cover of the supports: each emitted cell is at least as fine as
// every function overlapping it, so that every function restricted to an
// emitted cell is one polynomial piece (or identically zero).

struct CoverCell {
    CellRef cell;
    std::vector<size_t> funcs; // ids of functions positive on the cell interior
};

void cover_recurse(const SpaceConfig& cfg, std::span<const SplineRef> funcs,
                   const CellRef& cell, const std::vector<size_t>& overlapping,
                   std::map<CellRef, std::vector<size_t>>& out) {
    int max_level = cell.level;
    for (size_t id : overlapping)
        max_level = std::max(max_level, funcs[id].level);
    if (max_level <= cell.level) {
        out.emplace(cell, overlapping);
        return;
    }
    CellBox children = cell_children_box(cfg, CellBox{cell.level, LatticeBox::single(cell.index)}, 1);
    for_each_point(children.box, [&](const MultiIndex& p) {
        CellRef child{cell.level + 1, p};
        std::vector<size_t> sub;
        for (size_t id : overlapping)
            if (cell_meets_support(cfg, child, funcs[id])) sub.push_back(id);
        if (!sub.empty()) cover_recurse(cfg, funcs, child, sub, out);
    });
}

std::map<CellRef, std::vector<size_t>> mixed_cover(const SpaceConfig& cfg,
                                                   std::span<const SplineRef> funcs) {
    std::map<CellRef, std::vector<size_t>> out;
    std::set<CellRef> roots;
    for (size_t id = 0; id < funcs.size(); ++id) {
        CellBox supp = cell_support(cfg, funcs[id]);
        for_each_point(supp.box, [&](const MultiIndex& p) {
            CellRef root{funcs[id].level, p};
            if (!roots.insert(root).second) return;
            if (out.count(root)) return;
            std::vector<size_t> overlapping;
            for (size_t j = 0; j < funcs.size(); ++j)
                if (cell_meets_support(cfg, root, funcs[j])) overlapping.push_back(j);
            cover_recurse(cfg, funcs, root, overlapping, out);
        });
    }
    return out;
}

std::vector<std::vector<Rational>> cell_nodes(const SpaceConfig& cfg, const CellRef& cell) {
    const Index m = cfg.m;
    const Index den = 2 * (m + 1);
    LatticeBox grid{broadcast(0, cfg.dim()), broadcast(m, cfg.dim())};
    Index scale = checked_pow(cfg.n, cell.level);
    std::vector<std::vector<Rational>> nodes;
    for_each_point(grid, [&](const MultiIndex& t) {
        std::vector<Rational> x(t.size());
        for (size_t a = 0; a < t.size(); ++a)
            x[a] = make_rational(checked_add(checked_mul(cell.index[a], den), 2 * t[a] + 1),
                                 checked_mul(den, scale));
        nodes.push_back(std::move(x));
    });
    return nodes;
}

// ---------------------------------------------------------------------------
// Fraction-free elimination over sparse integer rows with a tracked
// combination of the original rows. Rows are normalized by their content so
// entries stay primitive.

struct SparseVec {
    std::vector<std::pair<std::int64_t, BigInt>> e; // sorted by column
};

SparseVec combine(const BigInt& a, const SparseVec& x, const BigInt& b, const SparseVec& y) {
    SparseVec r;
    r.e.reserve(x.e.size() + y.e.size());
    size_t i = 0, j = 0;
    while (i < x.e.size() || j < y.e.size()) {
        if (j >= y.e.size() || (i < x.e.size() && x.e[i].first < y.e[j].first)) {
            r.e.emplace_back(x.e[i].first, a * x.e[i].second);
            ++i;
        } else if (i >= x.e.size() || y.e[j].first < x.e[i].first) {
            r.e.emplace_back(y.e[j].first, -(b * y.e[j].second));
            ++j;
        } else {
            BigInt v = a * x.e[i].second - b * y.e[j].second;
            if (v != 0) r.e.emplace_back(x.e[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return r;
}

void normalize_content(SparseVec& row, SparseVec& track) {
    BigInt g = 0;
    for (const auto& [c, v] : row.e) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    for (const auto& [c, v] : track.e) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 0 || g == 1) return;
    for (auto& [c, v] : row.e) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    for (auto& [c, v] : track.e) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

class Eliminator {
  public:
    struct Outcome {
        bool zero = false;
        SparseVec track;
    };

    Outcome reduce(SparseVec row, std::size_t row_id) {
        SparseVec track;
        track.e.emplace_back(static_cast<std::int64_t>(row_id), BigInt(1));
        while (!row.e.empty()) {
            std::int64_t col = row.e.front().first;
            auto it = by_col_.find(col);
            if (it == by_col_.end()) {
                by_col_.emplace(col, pivots_.size());
                pivots_.push_back(Pivot{col, std::move(row), std::move(track)});
                return Outcome{false, {}};
            }
            const Pivot& p = pivots_[it->second];
            BigInt a = p.row.e.front().second;
            BigInt b = row.e.front().second;
            row = combine(a, row, b, p.row);
            track = combine(a, track, b, p.track);
            normalize_content(row, track);
        }
        return Outcome{true, std::move(track)};
    }

    std::size_t rank() const { return pivots_.size(); }

  private:
    struct Pivot {
        std::int64_t col;
        SparseVec row;
        SparseVec track;
    };
    std::vector<Pivot> pivots_;
    std::map<std::int64_t, std::size_t> by_col_;
};

// Integer form of a rational row plus the scale that relates them:
// row_int = scale * row_rational.
struct ScaledRow {
    SparseVec row;
    Rational scale{1};
};

ScaledRow clear_denominators(const std::vector<std::pair<std::int64_t, Rational>>& entries) {
    BigInt lcm = 1;
    for (const auto& [c, q] : entries)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    ScaledRow out;
    out.row.e.reserve(entries.size());
    BigInt content = 0;
    for (const auto& [c, q] : entries) {
        BigInt v = q.get_num() * (lcm / q.get_den());
        if (v != 0) {
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
            out.row.e.emplace_back(c, std::move(v));
        }
    }
    if (content > 1)
        for (auto& [c, v] : out.row.e)
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), content.get_mpz_t());
    out.scale = content > 1 ? Rational(lcm) / Rational(content) : Rational(lcm);
    return out;
}

// Builds the collocation row of one function: its exact values at every node
// of every cover cell it is positive on.
ScaledRow function_row(const SpaceConfig& cfg, const SplineRef& f,
                       const std::vector<CoverCell>& cover,
                       const std::vector<std::size_t>& first_node, std::size_t func_id) {
    std::vector<std::pair<std::int64_t, Rational>> entries;
    const Index m = cfg.m;
    for (size_t ci = 0; ci < cover.size(); ++ci) {
        const CoverCell& cc = cover[ci];
        if (!std::binary_search(cc.funcs.begin(), cc.funcs.end(), func_id)) continue;
        // Per-axis master values at the m+1 nodes, then the tensor product.
        const Index den = 2 * (m + 1);
        Index cell_scale = checked_pow(cfg.n, cc.cell.level);
        std::vector<std::vector<Rational>> axis_vals(static_cast<size_t>(cfg.d));
        for (size_t a = 0; a < axis_vals.size(); ++a) {
            axis_vals[a].resize(static_cast<size_t>(m) + 1);
            for (Index t = 0; t <= m; ++t) {
                Rational x = make_rational(checked_add(checked_mul(cc.cell.index[a], den), 2 * t + 1),
                                           checked_mul(den, cell_scale));
                Rational y = x * rational_from_index(checked_pow(cfg.n, f.level)) -
                             rational_from_index(f.index[a]);
                axis_vals[a][static_cast<size_t>(t)] = eval_master(cfg, y);
            }
        }
        LatticeBox grid{broadcast(0, cfg.dim()), broadcast(m, cfg.dim())};
        std::int64_t node = 0;
        for_each_point(grid, [&](const MultiIndex& t) {
            Rational v(1);
            for (size_t a = 0; a < t.size(); ++a)
                v *= axis_vals[a][static_cast<size_t>(t[a])];
            if (v != 0)
                entries.emplace_back(static_cast<std::int64_t>(first_node[ci]) + node, v);
            ++node;
        });
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    return clear_denominators(entries);
}

struct RowSystem {
    std::vector<CoverCell> cover;
    std::vector<std::size_t> first_node;
};

RowSystem build_rows(const SpaceConfig& cfg, std::span<const SplineRef> funcs) {
    RowSystem sys;
    auto cover_map = mixed_cover(cfg, funcs);
    sys.cover.reserve(cover_map.size());
    for (auto& [cell, ids] : cover_map) sys.cover.push_back(CoverCell{cell, std::move(ids)});
    std::size_t nodes_per_cell = 1;
    for (Index a = 0; a < cfg.d; ++a)
        nodes_per_cell *= static_cast<std::size_t>(cfg.m) + 1;
    sys.first_node.resize(sys.cover.size());
    for (size_t i = 0; i < sys.cover.size(); ++i) sys.first_node[i] = i * nodes_per_cell;
    return sys;
}

// Finer functions have fewer nonzero nodes; eliminating them first keeps the
// rows sparse.
std::vector<std::size_t> elimination_order(std::span<const SplineRef> funcs) {
    std::vector<std::size_t> order(funcs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        if (funcs[lhs].level != funcs[rhs].level) return funcs[lhs].level > funcs[rhs].level;
        return funcs[lhs] < funcs[rhs];
    });
    return order;
}

} // namespace

CollocationSystem collocation_system(const SpaceConfig& cfg,
                                     std::span<const SplineRef> funcs) {
    CollocationSystem out;
    for (auto& [cell, ids] : mixed_cover(cfg, funcs)) {
        out.points.push_back(cell_nodes(cfg, cell));
        out.cells.push_back(cell);
    }
    return out;
}

RankResult check_linear_independence(const SpaceConfig& cfg,
                                     std::span<const SplineRef> funcs) {
    RankResult result;
    RowSystem sys = build_rows(cfg, funcs);
    Eliminator elim;
    std::vector<Rational> scales(funcs.size(), Rational(1));
    bool have_witness = false;
    for (std::size_t id : elimination_order(funcs)) {
        ScaledRow row = function_row(cfg, funcs[id], sys.cover, sys.first_node, id);
        scales[id] = row.scale;
        Eliminator::Outcome oc = elim.reduce(std::move(row.row), id);
        if (oc.zero && !have_witness) {
            have_witness = true;
            result.independent = false;
            result.kernel.assign(funcs.size(), Rational(0));
            for (const auto& [rid, v] : oc.track.e)
                result.kernel[static_cast<std::size_t>(rid)] =
                    Rational(v) * scales[static_cast<std::size_t>(rid)];
        }
    }
    result.rank = elim.rank();
    return result;
}

SpanSolve span_contains(const SpaceConfig& cfg, std::span<const SplineRef> basis,
                        const SplineRef& target) {
    std::vector<SplineRef> all(basis.begin(), basis.end());
    all.push_back(target);
    RowSystem sys = build_rows(cfg, all);
    Eliminator elim;
    std::vector<Rational> scales(all.size(), Rational(1));
    std::vector<std::size_t> order = elimination_order(std::span<const SplineRef>(all.data(), basis.size()));
    for (std::size_t id : order) {
        ScaledRow row = function_row(cfg, all[id], sys.cover, sys.first_node, id);
        scales[id] = row.scale;
        elim.reduce(std::move(row.row), id);
    }
    const std::size_t target_id = basis.size();
    ScaledRow row = function_row(cfg, target, sys.cover, sys.first_node, target_id);
    scales[target_id] = row.scale;
    Eliminator::Outcome oc = elim.reduce(std::move(row.row), target_id);
    SpanSolve out;
    if (!oc.zero) return out;
    out.contained = true;
    Rational target_coeff(0);
    for (const auto& [rid, v] : oc.track.e)
        if (static_cast<std::size_t>(rid) == target_id)
            target_coeff = Rational(v) * scales[target_id];
    if (target_coeff == 0)
        throw error("span_contains: degenerate tracking combination");
    for (const auto& [rid, v] : oc.track.e) {
        if (static_cast<std::size_t>(rid) == target_id) continue;
        out.coefficients[all[static_cast<std::size_t>(rid)]] =
            -(Rational(v) * scales[static_cast<std::size_t>(rid)]) / target_coeff;
    }
    return out;
}

int gap_by_definition(const Lineage& lin, const GeneratorView& gen, const SplineRef& f) {
    if (!gen.contains(f))
        throw contract_error("gap_by_definition: not a generator member");
    const SpaceConfig& cfg = lin.config();
    for (int k = f.level; k >= 1; --k) {
        const auto& slot = gen.levels[static_cast<size_t>(f.level - k)];
        for (const MultiIndex& p : slot)
            if (supports_overlap(cfg, f, SplineRef{f.level - k, p})) return k;
    }
    return 0;
}

int gap_by_definition(const Lineage& lin, const SplineRef& f) {
    return gap_by_definition(lin, generator(lin), f);
}

int generator_gap_by_definition(const Lineage& lin) {
    GeneratorView gen = generator(lin);
    int best = 0;
    for (const SplineRef& f : gen.members())
        best = std::max(best, gap_by_definition(lin, gen, f));
    return best;
}

namespace {

// Definitional helpers for the exhaustive searches; they use only the
// child-box definition and interval geometry, never the derived closed forms.

struct CandidateSets {
    std::vector<std::set<MultiIndex>> members; // refined sets per level
    std::vector<std::set<MultiIndex>> pool;    // coarsest basis + definitional children
};

bool build_candidate(const SpaceConfig& cfg, const std::vector<std::set<MultiIndex>>& members,
                     CandidateSets& out) {
    int top = 0;
    for (size_t level = 0; level < members.size(); ++level)
        if (!members[level].empty()) top = static_cast<int>(level);
    out.members = members;
    out.members.resize(static_cast<size_t>(top) + 1);
    out.pool.assign(static_cast<size_t>(top) + 2, {});
    for_each_point(spline_domain(cfg, 0), [&](const MultiIndex& p) { out.pool[0].insert(p); });
    for (int level = 0; level <= top; ++level) {
        for (const MultiIndex& p : out.members[static_cast<size_t>(level)])
            if (!out.pool[static_cast<size_t>(level)].count(p)) return false; // orphan
        for (const MultiIndex& p : out.members[static_cast<size_t>(level)]) {
            LatticeBox raw{m_iter(cfg, 0, 1, p), m_iter(cfg, checked_mul(cfg.s(), cfg.m), 1, p)};
            LatticeBox clamped = intersect(raw, spline_domain(cfg, level + 1));
            for_each_point(clamped, [&](const MultiIndex& c) {
                out.pool[static_cast<size_t>(level) + 1].insert(c);
            });
        }
    }
    return true;
}

bool candidate_absorbing(const SpaceConfig& cfg, const CandidateSets& cand) {
    for (size_t level = 0; level < cand.members.size(); ++level) {
        if (cand.members[level].empty()) continue;
        std::set<MultiIndex> covered;
        for (const MultiIndex& p : cand.members[level]) {
            CellBox supp = cell_support(cfg, SplineRef{static_cast<int>(level), p});
            for_each_point(supp.box, [&](const MultiIndex& c) { covered.insert(c); });
        }
        for (const MultiIndex& p : cand.pool[level]) {
            if (cand.members[level].count(p)) continue;
            CellBox supp = cell_support(cfg, SplineRef{static_cast<int>(level), p});
            bool inside = true;
            for_each_point(supp.box, [&](const MultiIndex& c) {
                if (!covered.count(c)) inside = false;
            });
            if (inside) return false;
        }
    }
    return true;
}

bool candidate_gap_bounded(const SpaceConfig& cfg, const CandidateSets& cand, Index bound) {
    std::vector<std::vector<SplineRef>> gen(cand.pool.size());
    for (size_t level = 0; level < cand.pool.size(); ++level)
        for (const MultiIndex& p : cand.pool[level])
            if (level >= cand.members.size() || !cand.members[level].count(p))
                gen[level].push_back(SplineRef{static_cast<int>(level), p});
    for (size_t level = 0; level < gen.size(); ++level) {
        for (const SplineRef& f : gen[level]) {
            for (size_t coarse = 0; coarse + static_cast<size_t>(bound) < level; ++coarse) {
                for (const SplineRef& other : gen[coarse]) {
                    if (supports_overlap(cfg, f, other))
                        return false; // gap of f is at least level - coarse > bound
                }
            }
        }
    }
    return true;
}

} // namespace

LeastElementResult least_element(const Lineage& base, FamilyKind kind,
                                 const std::optional<SplineRef>& must_refine,
                                 std::size_t cap) {
    const SpaceConfig& cfg = base.config();
    LeastElementResult result;

    int pool_depth = base.depth();
    if (kind == FamilyKind::gap_bounded_with) {
        if (!must_refine || !base.in_generator(*must_refine))
            throw contract_error("least_element: must_refine is not a generator member");
        pool_depth = std::max(pool_depth, must_refine->level + 1);
    }

    std::vector<SplineRef> addable;
    for (int level = 0; level < pool_depth; ++level) {
        for_each_point(spline_domain(cfg, level), [&](const MultiIndex& p) {
            SplineRef f{level, p};
            if (!base.is_refined(f)) addable.push_back(f);
        });
    }
    if (addable.size() >= 63 || (std::size_t{1} << addable.size()) > cap)
        throw size_error("least_element: candidate pool exceeds the enumeration cap");

    std::size_t must_bit = addable.size();
    if (kind == FamilyKind::gap_bounded_with) {
        for (std::size_t i = 0; i < addable.size(); ++i)
            if (addable[i] == *must_refine) must_bit = i;
        if (must_bit == addable.size())
            throw error("least_element: must_refine missing from the pool");
    }

    const std::uint64_t total = std::uint64_t{1} << addable.size();
    std::vector<std::uint64_t> family;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        ++result.enumerated;
        if (kind == FamilyKind::gap_bounded_with && !(mask >> must_bit & 1)) continue;
        std::vector<std::set<MultiIndex>> members(static_cast<size_t>(pool_depth));
        for (int level = 0; level < base.depth(); ++level)
            members[static_cast<size_t>(level)] = base.refined_at(level);
        for (std::size_t i = 0; i < addable.size(); ++i)
            if (mask >> i & 1)
                members[static_cast<size_t>(addable[i].level)].insert(addable[i].index);
        CandidateSets cand;
        if (!build_candidate(cfg, members, cand)) continue;
        bool pass = kind == FamilyKind::absorbing
                        ? candidate_absorbing(cfg, cand)
                        : candidate_gap_bounded(cfg, cand, cfg.g);
        if (pass) family.push_back(mask);
    }
    result.family_size = family.size();
    if (family.empty()) return result;

    std::uint64_t best = family.front();
    for (std::uint64_t mask : family)
        if (__builtin_popcountll(mask) < __builtin_popcountll(best)) best = mask;
    for (std::uint64_t mask : family)
        if ((best & ~mask) != 0) return result; // minimal but not least

    std::vector<std::vector<MultiIndex>> raw(static_cast<size_t>(pool_depth));
    for (int level = 0; level < base.depth(); ++level)
        for (const MultiIndex& p : base.refined_at(level))
            raw[static_cast<size_t>(level)].push_back(p);
    for (std::size_t i = 0; i < addable.size(); ++i)
        if (best >> i & 1)
            raw[static_cast<size_t>(addable[i].level)].push_back(addable[i].index);
    result.least = Lineage::from_levels(cfg, raw);
    return result;
}

} // namespace hbs::oracle
