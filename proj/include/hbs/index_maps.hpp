#pragma once

#include "hbs/lattice.hpp"
#include "hbs/space_config.hpp"

namespace hbs {

// The two basic index maps, parameterized by an integer shift:
//   scale-up  i -> n*i + shift
//   scale-down i -> floor((i - shift) / n)
// m_iter / d_iter are their k-fold iterates (k = 0 is the identity).

Index m_iter(const SpaceConfig& cfg, Index shift, int k, Index i);
Index d_iter(const SpaceConfig& cfg, Index shift, int k, Index i);

MultiIndex m_iter(const SpaceConfig& cfg, Index shift, int k, const MultiIndex& i);
MultiIndex d_iter(const SpaceConfig& cfg, Index shift, int k, const MultiIndex& i);

/// Which of the two coarsening companions to apply: left() = g-fold
/// scale-down of i, minus p; right() = g-fold scale-down of i + p.
enum class Side { left, right };

Index lr_iter(const SpaceConfig& cfg, Side side, int k, Index i);
MultiIndex lr_iter(const SpaceConfig& cfg, Side side, int k, const MultiIndex& i);

/// One endpoint map of a box function: kind selects scale-up or scale-down,
/// applied k times with the given shift.
struct MapSpec {
    enum class Kind { scale_up, scale_down };
    Kind kind;
    Index shift;
    int k;
};

/// Image of a box under the box function [lo_map(i) : hi_map(i)].
/// Requires the pair to be box preserving: for scale-up pairs
/// hi.shift - lo.shift >= n - 1, for scale-down pairs lo.shift >= hi.shift,
/// and both endpoints of the same kind with equal iteration count.
LatticeBox box_image(const SpaceConfig& cfg, const LatticeBox& box,
                     const MapSpec& lo_map, const MapSpec& hi_map);

/// The box of all j such that m_iter(m_lo,k,j) <= i <= m_iter(m_hi,k,j) for
/// some i in target: [d_iter(m_hi-(n-1), k, lo) : d_iter(m_lo, k, hi)].
LatticeBox dual_box(const SpaceConfig& cfg, int k, Index m_lo, Index m_hi,
                    const LatticeBox& target);

} // namespace hbs
