#pragma once

#include <map>
#include <optional>

#include "hbs/complexity.hpp"

namespace hbs::oracle {

/// Row points for the exact rank tests: a mixed-level cell cover of the
/// supports of the queried functions (every cell at least as fine as every
/// function overlapping it, so that all restrictions are polynomial pieces),
/// with an (m+1)^d tensor grid of interior rational nodes per cell.
struct CollocationSystem {
    std::vector<CellRef> cells;
    std::vector<std::vector<std::vector<Rational>>> points; // [cell][node][axis]
};

CollocationSystem collocation_system(const SpaceConfig& cfg,
                                     std::span<const SplineRef> funcs);

struct RankResult {
    std::size_t rank = 0;
    bool independent = true;
    std::vector<Rational> kernel; // aligned with the input order when dependent
};

/// Exact rank of the function set as functions on Omega, via fraction-free
/// elimination of the collocation rows over the integers. No tolerance.
RankResult check_linear_independence(const SpaceConfig& cfg,
                                     std::span<const SplineRef> funcs);

struct SpanSolve {
    bool contained = false;
    std::map<SplineRef, Rational> coefficients;
};

/// Whether target lies in the span of basis, with exact coefficients when it
/// does. Residual must vanish identically, not approximately.
SpanSolve span_contains(const SpaceConfig& cfg, std::span<const SplineRef> basis,
                        const SplineRef& target);

/// Definition-level gap: scans coarser generator levels for a function whose
/// support interior meets the support interior of f. Pure interval
/// arithmetic, no box algebra.
int gap_by_definition(const Lineage& lin, const GeneratorView& gen, const SplineRef& f);
int gap_by_definition(const Lineage& lin, const SplineRef& f);
int generator_gap_by_definition(const Lineage& lin);

enum class FamilyKind {
    absorbing,        // refinements that are absorbing
    gap_bounded_with, // refinements with gap <= g whose refiner holds a given function
};

struct LeastElementResult {
    std::optional<Lineage> least; // empty when the family has no least element
    std::size_t family_size = 0;
    std::size_t enumerated = 0;
};

/// Exhaustive search over all refinements inside the bounded candidate pool,
/// filtered by the family predicate. Throws size_error beyond the cap.
LeastElementResult least_element(const Lineage& base, FamilyKind kind,
                                 const std::optional<SplineRef>& must_refine,
                                 std::size_t cap = std::size_t{1} << 20);

} // namespace hbs::oracle
