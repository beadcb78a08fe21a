#pragma once

#include <span>

#include "hbs/hierarchy.hpp"

namespace hbs {

/// What one refinement call did to a lineage and its generator.
struct RefinementReport {
    std::vector<SplineRef> refiner;  // newly refined functions
    std::vector<SplineRef> marked;   // refiner members that were generator members before
    std::vector<SplineRef> added;    // generator after minus generator before
    std::vector<SplineRef> removed;  // generator before minus generator after
    int depth_before = 0;
    int depth_after = 0;
    std::size_t generator_before = 0;
    std::size_t generator_after = 0;
};

/// Moves one generator member into the refined set; the smallest refinement
/// whose refiner contains it.
RefinementReport single_refine(Lineage& lin, const SplineRef& f);

/// Refines every marked function; result independent of the order.
RefinementReport refine(Lineage& lin, std::span<const SplineRef> marks);

/// Smallest absorbing refinement: level by level, additionally refines every
/// candidate whose support cells are covered by the refined functions of its
/// level. Preserves depth.
RefinementReport abs_refine(Lineage& lin);

enum class GcVariant {
    precomputed, // overlap set fixed at call entry
    recompute,   // overlap set re-evaluated each round (differential testing)
};

/// Smallest refinement that refines f while keeping the generator gap
/// bounded by g: recursively refines every generator function g levels
/// coarser that overlaps the function about to be refined.
RefinementReport gc_single_refine(Lineage& lin, const SplineRef& f,
                                  GcVariant variant = GcVariant::precomputed);

/// Gap-controlled refinement of a marked set.
RefinementReport gc_refine(Lineage& lin, std::span<const SplineRef> marks,
                           GcVariant variant = GcVariant::precomputed);

/// Gap-controlled refinement followed by the absorbing closure; maps
/// absorbing gap-bounded bases to absorbing gap-bounded bases.
RefinementReport ga_refine(Lineage& lin, std::span<const SplineRef> marks);

/// Rebuilds an arbitrary lineage as an absorbing gap-controlled one whose
/// span contains the input span: walks the input levels and re-refines each
/// through ga_refine.
Lineage to_absorbing_gap_controlled(const Lineage& coarse);

/// Bound on the oriented distance between a marked function and any
/// generator function created by one ga_refine call, from the two proof
/// branches of the locality argument.
double ga_locality_constant(const SpaceConfig& cfg);

/// Weaker companion bound sometimes quoted for the same constant; reported
/// for comparison, not used by any check.
double ga_locality_constant_alt(const SpaceConfig& cfg);

} // namespace hbs
