#pragma once

#include <compare>
#include <set>
#include <span>
#include <vector>

#include "hbs/mesh.hpp"

namespace hbs {

/// One multilevel B-spline: level plus multi-index in [-p : n^level-1]^d.
struct SplineRef {
    int level = 0;
    MultiIndex index;

    auto operator<=>(const SplineRef&) const = default;
};

/// A box of B-splines of one level, always clamped to the valid index range.
struct SplineBox {
    int level = 0;
    LatticeBox box;

    bool operator==(const SplineBox&) const = default;
};

/// Per-level sets of spline indices, the common currency for overlap queries
/// against lineages and generators.
using LevelIndexSets = std::vector<std::set<MultiIndex>>;

/// Valid spline index range [-p : n^level-1]^d.
LatticeBox spline_domain(const SpaceConfig& cfg, int level);

SplineBox make_spline_box(const SpaceConfig& cfg, int level, const LatticeBox& raw);

bool is_valid_spline(const SpaceConfig& cfg, const SplineRef& f);

/// Master spline of order m evaluated at y, exact. Nonnegative, supported on
/// [0, m], normalized so that the integer translates sum to one.
Rational eval_master(const SpaceConfig& cfg, const Rational& y);
double eval_master(const SpaceConfig& cfg, double y);

/// Value of one tensor-product spline at a point of Omega.
Rational evaluate(const SpaceConfig& cfg, const SplineRef& f, const std::vector<Rational>& x);
double evaluate(const SpaceConfig& cfg, const SplineRef& f, const std::vector<double>& x);

/// One-axis two-scale coefficients c_0..c_{sm}: f = sum_k c_k child_k holds
/// identically. Solved from a rational collocation system of the identity and
/// cross-checked against the binomial-power closed form; all entries positive
/// with axis sum n.
std::vector<Rational> subdivision_mask(const SpaceConfig& cfg);

SplineBox spline_children_box(const SpaceConfig& cfg, const SplineBox& f, int k);
SplineBox spline_ancestor_box(const SpaceConfig& cfg, const SplineBox& f, int k);

/// Cells of the spline's own level where it is positive.
CellBox cell_support(const SpaceConfig& cfg, const SplineRef& f);

/// Cells of level level+k meeting the spline's support (its support cells
/// when k = 0, their descendants or ancestors otherwise).
CellBox cells_overlapping(const SpaceConfig& cfg, const SplineRef& f, int k);

/// Splines of level level+k whose support meets some cell of the box.
SplineBox splines_over_cells(const SpaceConfig& cfg, const CellBox& cells, int k);

/// Oriented level-scaled index distance between two splines.
std::vector<Rational> rho(const SpaceConfig& cfg, const SplineRef& a, const SplineRef& b);

/// All splines of level level+k within oriented distance D of f.
std::vector<SplineRef> ball(const SpaceConfig& cfg, const SplineRef& f,
                            const Rational& D, int k);

/// Splines of a level-shifted slice of H whose support meets the support of
/// some member of F. A plain index-set intersection of the box query with
/// H's per-level sets; levels outside H (or below 0) contribute nothing.
std::vector<SplineRef> overlap_set(const SpaceConfig& cfg, std::span<const SplineRef> F,
                                   int shift, const LevelIndexSets& H);

SplineBox overlap_box(const SpaceConfig& cfg, const SplineRef& f, int shift);

/// Closed form of the k-fold overlap chain of a spline box against the full
/// multilevel basis, g levels coarser per step.
SplineBox overlap_chain_box(const SpaceConfig& cfg, const SplineBox& f, int k);

std::vector<SplineRef> splines_of_box(const SplineBox& f);

} // namespace hbs
