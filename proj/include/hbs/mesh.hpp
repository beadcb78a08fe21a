#pragma once

#include <compare>
#include <vector>

#include "hbs/index_maps.hpp"
#include "hbs/rational.hpp"

namespace hbs {

/// One n-adic cell of Omega = [0,1]^d: level plus multi-index in
/// [0 : n^level-1]^d. Cells are half-open boxes, closed at the right
/// domain boundary.
struct CellRef {
    int level = 0;
    MultiIndex index;

    auto operator<=>(const CellRef&) const = default;
};

/// A box of cells of one level, always clamped to the valid index range.
struct CellBox {
    int level = 0;
    LatticeBox box;

    bool operator==(const CellBox&) const = default;
};

/// Valid cell index range [0 : n^level-1]^d.
LatticeBox cell_domain(const SpaceConfig& cfg, int level);

/// Clamps a raw box to the valid range of the level.
CellBox make_cell_box(const SpaceConfig& cfg, int level, const LatticeBox& raw);

/// Box of all k-th generation descendants; their union equals the union of
/// the input cells as point sets.
CellBox cell_children_box(const SpaceConfig& cfg, const CellBox& cells, int k);

/// Box of all k-th generation ancestors (cells whose descendants meet the
/// input box).
CellBox cell_ancestor_box(const SpaceConfig& cfg, const CellBox& cells, int k);

/// The unique cell of the level containing x, half-open convention with the
/// right domain boundary closed.
CellRef cell_of_point(const SpaceConfig& cfg, int level, const std::vector<Rational>& x);

/// Exact cell geometry: lower and upper corner coordinates.
std::vector<Rational> cell_lower(const SpaceConfig& cfg, const CellRef& cell);
std::vector<Rational> cell_upper(const SpaceConfig& cfg, const CellRef& cell);

std::vector<CellRef> cells_of_box(const CellBox& cells);

} // namespace hbs
