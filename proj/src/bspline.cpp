#include "hbs/bspline.hpp"

#include <algorithm>

namespace hbs {

LatticeBox spline_domain(const SpaceConfig& cfg, int level) {
    if (level < 0) throw contract_error("spline_domain: negative level");
    if (level > cfg.max_level) throw depth_error("spline_domain: level beyond max_level");
    Index top = checked_sub(checked_pow(cfg.n, level), 1);
    return LatticeBox{broadcast(-cfg.p(), cfg.dim()), broadcast(top, cfg.dim())};
}

SplineBox make_spline_box(const SpaceConfig& cfg, int level, const LatticeBox& raw) {
    return SplineBox{level, intersect(raw, spline_domain(cfg, level))};
}

bool is_valid_spline(const SpaceConfig& cfg, const SplineRef& f) {
    if (f.level < 0 || f.level > cfg.max_level) return false;
    if (static_cast<int>(f.index.size()) != cfg.dim()) return false;
    return spline_domain(cfg, f.level).contains(f.index);
}

namespace {

Index binomial(Index mm, Index j) {
    Index r = 1;
    for (Index t = 1; t <= j; ++t)
        r = checked_mul(r, mm - t + 1) / t;
    return r;
}

Index factorial(Index v) {
    Index r = 1;
    for (Index t = 2; t <= v; ++t) r = checked_mul(r, t);
    return r;
}

} // namespace

Rational eval_master(const SpaceConfig& cfg, const Rational& y) {
    const Index m = cfg.m;
    if (y <= 0 || y >= m) {
        if (m == 1) return (y >= 0 && y < 1) ? Rational(1) : Rational(0);
        return Rational(0);
    }
    if (m == 1) return Rational(1);
    Rational acc(0);
    for (Index j = 0; j <= m; ++j) {
        Rational t = y - rational_from_index(j);
        if (t <= 0) break;
        Rational term = rational_pow(t, static_cast<unsigned>(m - 1));
        if (j % 2 == 1) term = -term;
        acc += term * rational_from_index(binomial(m, j));
    }
    return acc / rational_from_index(factorial(m - 1));
}

double eval_master(const SpaceConfig& cfg, double y) {
    const Index m = cfg.m;
    if (y <= 0.0 || y >= static_cast<double>(m)) {
        if (m == 1) return (y >= 0.0 && y < 1.0) ? 1.0 : 0.0;
        return 0.0;
    }
    if (m == 1) return 1.0;
    double acc = 0.0;
    for (Index j = 0; j <= m; ++j) {
        double t = y - static_cast<double>(j);
        if (t <= 0.0) break;
        double term = 1.0;
        for (Index e = 0; e < m - 1; ++e) term *= t;
        acc += (j % 2 == 1 ? -term : term) * static_cast<double>(binomial(m, j));
    }
    return acc / static_cast<double>(factorial(m - 1));
}

Rational evaluate(const SpaceConfig& cfg, const SplineRef& f, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != cfg.dim())
        throw contract_error("evaluate: point dimension mismatch");
    Rational scale = rational_from_index(checked_pow(cfg.n, f.level));
    Rational v(1);
    for (size_t a = 0; a < x.size(); ++a) {
        if (x[a] < 0 || x[a] > 1)
            throw contract_error("evaluate: point outside the domain");
        v *= eval_master(cfg, x[a] * scale - rational_from_index(f.index[a]));
        if (v == 0) return Rational(0);
    }
    return v;
}

double evaluate(const SpaceConfig& cfg, const SplineRef& f, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != cfg.dim())
        throw contract_error("evaluate: point dimension mismatch");
    double scale = static_cast<double>(checked_pow(cfg.n, f.level));
    double v = 1.0;
    for (size_t a = 0; a < x.size(); ++a) {
        v *= eval_master(cfg, x[a] * scale - static_cast<double>(f.index[a]));
        if (v == 0.0) return 0.0;
    }
    return v;
}

std::vector<Rational> subdivision_mask(const SpaceConfig& cfg) {
    const Index width = checked_mul(cfg.s(), cfg.m); // children indices 0..width
    const size_t unknowns = static_cast<size_t>(width) + 1;

    // Collocation of the two-scale identity on a rational grid inside (0, m).
    const size_t rows = unknowns + 2;
    std::vector<std::vector<Rational>> sys(rows, std::vector<Rational>(unknowns + 1));
    for (size_t t = 0; t < rows; ++t) {
        Rational y = rational_from_index(cfg.m) * make_rational(2 * static_cast<Index>(t) + 1,
                                                                2 * static_cast<Index>(rows));
        for (size_t k = 0; k < unknowns; ++k)
            sys[t][k] = eval_master(cfg, y * rational_from_index(cfg.n) -
                                             rational_from_index(static_cast<Index>(k)));
        sys[t][unknowns] = eval_master(cfg, y);
    }

    // Plain rational elimination; the system is overdetermined and must be
    // consistent, anything else means the evaluation code is broken.
    std::vector<Rational> solution(unknowns);
    size_t row = 0;
    std::vector<size_t> pivot_row(unknowns, SIZE_MAX);
    for (size_t col = 0; col < unknowns && row < rows; ++col) {
        size_t pr = SIZE_MAX;
        for (size_t r = row; r < rows; ++r)
            if (sys[r][col] != 0) { pr = r; break; }
        if (pr == SIZE_MAX) continue;
        std::swap(sys[row], sys[pr]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == row || sys[r][col] == 0) continue;
            Rational factor = sys[r][col] / sys[row][col];
            for (size_t c = col; c <= unknowns; ++c)
                sys[r][c] -= factor * sys[row][c];
        }
        pivot_row[col] = row;
        ++row;
    }
    for (size_t col = 0; col < unknowns; ++col) {
        if (pivot_row[col] == SIZE_MAX)
            throw error("subdivision_mask: collocation system is rank deficient");
        solution[col] = sys[pivot_row[col]][unknowns] / sys[pivot_row[col]][col];
    }
    for (size_t r = row; r < rows; ++r)
        if (sys[r][unknowns] != 0)
            throw error("subdivision_mask: collocation system is inconsistent");

    // Cross-check: coefficients of n^{1-m} (1 + z + ... + z^{n-1})^m.
    std::vector<BigInt> poly{1};
    for (Index rep = 0; rep < cfg.m; ++rep) {
        std::vector<BigInt> next(poly.size() + static_cast<size_t>(cfg.s()), 0);
        for (size_t i = 0; i < poly.size(); ++i)
            for (Index j = 0; j < cfg.n; ++j)
                next[i + static_cast<size_t>(j)] += poly[i];
        poly = std::move(next);
    }
    Rational denom = rational_pow(rational_from_index(cfg.n), static_cast<unsigned>(cfg.m - 1));
    Rational axis_sum(0);
    for (size_t k = 0; k < unknowns; ++k) {
        Rational closed = Rational(poly[k]) / denom;
        if (closed != solution[k])
            throw error("subdivision_mask: solve disagrees with the closed form");
        if (solution[k] <= 0)
            throw error("subdivision_mask: nonpositive coefficient");
        axis_sum += solution[k];
    }
    if (axis_sum != rational_from_index(cfg.n))
        throw error("subdivision_mask: axis sum is not n");
    return solution;
}

SplineBox spline_children_box(const SpaceConfig& cfg, const SplineBox& f, int k) {
    if (k < 1) throw contract_error("spline_children_box: k must be >= 1");
    if (f.level + k > cfg.max_level)
        throw depth_error("spline_children_box: level beyond max_level");
    LatticeBox img = box_image(cfg, f.box,
                               MapSpec{MapSpec::Kind::scale_up, 0, k},
                               MapSpec{MapSpec::Kind::scale_up, checked_mul(cfg.s(), cfg.m), k});
    return make_spline_box(cfg, f.level + k, img);
}

SplineBox spline_ancestor_box(const SpaceConfig& cfg, const SplineBox& f, int k) {
    if (k < 1) throw contract_error("spline_ancestor_box: k must be >= 1");
    if (k > f.level) throw contract_error("spline_ancestor_box: k exceeds level");
    LatticeBox img = box_image(cfg, f.box,
                               MapSpec{MapSpec::Kind::scale_down, checked_mul(cfg.s(), cfg.p()), k},
                               MapSpec{MapSpec::Kind::scale_down, 0, k});
    return make_spline_box(cfg, f.level - k, img);
}

CellBox cell_support(const SpaceConfig& cfg, const SplineRef& f) {
    MultiIndex hi(f.index.size());
    for (size_t a = 0; a < f.index.size(); ++a) hi[a] = checked_add(f.index[a], cfg.p());
    return make_cell_box(cfg, f.level, LatticeBox{f.index, std::move(hi)});
}

CellBox cells_overlapping(const SpaceConfig& cfg, const SplineRef& f, int k) {
    CellBox supp = cell_support(cfg, f);
    if (k == 0) return supp;
    if (k > 0) return cell_children_box(cfg, supp, k);
    return cell_ancestor_box(cfg, supp, -k);
}

SplineBox splines_over_cells(const SpaceConfig& cfg, const CellBox& cells, int k) {
    const int target = cells.level + k;
    if (target < 0) throw contract_error("splines_over_cells: target level below 0");
    if (target > cfg.max_level)
        throw depth_error("splines_over_cells: level beyond max_level");
    if (cells.box.is_empty()) return SplineBox{target, LatticeBox::empty(cfg.dim())};
    MultiIndex lo(cells.box.lo.size()), hi(cells.box.hi.size());
    for (size_t a = 0; a < lo.size(); ++a) {
        if (k == 0) {
            lo[a] = checked_sub(cells.box.lo[a], cfg.p());
            hi[a] = cells.box.hi[a];
        } else if (k > 0) {
            lo[a] = checked_sub(m_iter(cfg, 0, k, cells.box.lo[a]), cfg.p());
            hi[a] = m_iter(cfg, cfg.s(), k, cells.box.hi[a]);
        } else {
            lo[a] = checked_sub(d_iter(cfg, 0, -k, cells.box.lo[a]), cfg.p());
            hi[a] = d_iter(cfg, 0, -k, cells.box.hi[a]);
        }
    }
    return make_spline_box(cfg, target, LatticeBox::of(std::move(lo), std::move(hi)));
}

std::vector<Rational> rho(const SpaceConfig& cfg, const SplineRef& a, const SplineRef& b) {
    std::vector<Rational> out(a.index.size());
    const int diff = a.level - b.level;
    for (size_t k = 0; k < a.index.size(); ++k) {
        Rational scaled = diff >= 0
                              ? make_rational(a.index[k], checked_pow(cfg.n, diff))
                              : rational_from_index(checked_mul(a.index[k], checked_pow(cfg.n, -diff)));
        out[k] = scaled - rational_from_index(b.index[k]);
    }
    return out;
}

std::vector<SplineRef> ball(const SpaceConfig& cfg, const SplineRef& f,
                            const Rational& D, int k) {
    if (D < 0) throw contract_error("ball: negative radius");
    const int target = f.level + k;
    if (target < 0) throw contract_error("ball: target level below 0");
    MultiIndex lo(f.index.size()), hi(f.index.size());
    for (size_t a = 0; a < f.index.size(); ++a) {
        Rational center = k >= 0
                              ? rational_from_index(checked_mul(f.index[a], checked_pow(cfg.n, k)))
                              : make_rational(f.index[a], checked_pow(cfg.n, -k));
        lo[a] = rational_ceil(center - D);
        hi[a] = rational_floor(center + D);
    }
    SplineBox b = make_spline_box(cfg, target, LatticeBox::of(std::move(lo), std::move(hi)));
    return splines_of_box(b);
}

SplineBox overlap_box(const SpaceConfig& cfg, const SplineRef& f, int shift) {
    return splines_over_cells(cfg, cell_support(cfg, f), shift);
}

std::vector<SplineRef> overlap_set(const SpaceConfig& cfg, std::span<const SplineRef> F,
                                   int shift, const LevelIndexSets& H) {
    std::set<SplineRef> acc;
    for (const SplineRef& f : F) {
        const int target = f.level + shift;
        if (target < 0 || target >= static_cast<int>(H.size())) continue;
        const std::set<MultiIndex>& slot = H[static_cast<size_t>(target)];
        if (slot.empty()) continue;
        SplineBox box = overlap_box(cfg, f, shift);
        if (box.box.is_empty()) continue;
        if (static_cast<size_t>(box.box.cardinality()) <= slot.size()) {
            for_each_point(box.box, [&](const MultiIndex& p) {
                if (slot.count(p)) acc.insert(SplineRef{target, p});
            });
        } else {
            for (const MultiIndex& p : slot)
                if (box.box.contains(p)) acc.insert(SplineRef{target, p});
        }
    }
    return {acc.begin(), acc.end()};
}

SplineBox overlap_chain_box(const SpaceConfig& cfg, const SplineBox& f, int k) {
    if (k < 1) throw contract_error("overlap_chain_box: k must be >= 1");
    const int target = f.level - static_cast<int>(cfg.g) * k;
    if (target < 0) throw contract_error("overlap_chain_box: chain walks below level 0");
    if (f.box.is_empty()) return SplineBox{target, LatticeBox::empty(cfg.dim())};
    return make_spline_box(cfg, target,
                           LatticeBox::of(lr_iter(cfg, Side::left, k, f.box.lo),
                                          lr_iter(cfg, Side::right, k, f.box.hi)));
}

std::vector<SplineRef> splines_of_box(const SplineBox& f) {
    std::vector<SplineRef> out;
    for_each_point(f.box, [&](const MultiIndex& p) { out.push_back(SplineRef{f.level, p}); });
    return out;
}

} // namespace hbs
