#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hbs/bspline.hpp"

namespace hbs {

/// The set of refined functions, stored per level. This is the single
/// mutable object of the whole system: every refined function of level
/// l >= 1 is a child of another refined function, functions of level 0 are
/// admitted unconditionally. The candidate pool (coarsest basis plus all
/// children of refined functions) is cached incrementally.
class Lineage {
  public:
    explicit Lineage(const SpaceConfig& cfg);

    /// Validates raw per-level index sets; throws contract_error naming the
    /// first orphan member (one that is neither level 0 nor a child of
    /// another member).
    static Lineage from_levels(const SpaceConfig& cfg,
                               const std::vector<std::vector<MultiIndex>>& raw);

    const SpaceConfig& config() const { return cfg_; }

    /// Smallest level with no refined functions.
    int depth() const { return static_cast<int>(refined_.size()); }

    std::size_t refined_count() const;

    bool is_refined(const SplineRef& f) const;
    bool in_pool(const SplineRef& f) const;
    bool in_generator(const SplineRef& f) const;

    static const std::set<MultiIndex>& empty_set();
    const std::set<MultiIndex>& refined_at(int level) const;
    const std::set<MultiIndex>& pool_at(int level) const;

    /// Per-level copies of the refined sets (levels 0..depth-1).
    LevelIndexSets refined_sets() const;

    /// Adds one generator member to the refined set and extends the pool
    /// with its children. The workhorse of every refinement algorithm.
    void refine_member(const SplineRef& f);

    /// Replaces the whole state; used by algorithms that rebuild a lineage
    /// from scratch. The new state must be a refinement of the old one.
    void adopt(const Lineage& finer);

    std::uint64_t version() const { return version_; }

    bool operator==(const Lineage& o) const {
        return cfg_ == o.cfg_ && refined_ == o.refined_;
    }

    // Lazy caches, invalidated by the version counter.
    const std::map<SplineRef, Rational>& unity_coefficients() const;

  private:
    SpaceConfig cfg_;
    std::vector<std::set<MultiIndex>> refined_; // exactly depth() levels, none empty
    std::vector<std::set<MultiIndex>> pool_;    // level 0..depth(); pool_[0] = coarsest basis
    std::uint64_t version_ = 0;

    mutable std::uint64_t unity_version_ = UINT64_MAX;
    mutable std::map<SplineRef, Rational> unity_cache_;

    void extend_pool(const SplineRef& f);
};

/// Immutable snapshot of the generator (pool minus refined), per level.
struct GeneratorView {
    LevelIndexSets levels; // index 0..depth
    int depth = 0;
    std::size_t size = 0;

    bool contains(const SplineRef& f) const {
        return f.level >= 0 && f.level < static_cast<int>(levels.size()) &&
               levels[static_cast<size_t>(f.level)].count(f.index) > 0;
    }
    std::vector<SplineRef> members() const;
};

GeneratorView generator(const Lineage& lin);

/// Cells covered by the pool but by no refined function of the same level.
struct ActiveCellSet {
    std::vector<std::set<MultiIndex>> levels;

    bool contains(const CellRef& c) const {
        return c.level >= 0 && c.level < static_cast<int>(levels.size()) &&
               levels[static_cast<size_t>(c.level)].count(c.index) > 0;
    }
    std::vector<CellRef> members() const;
};

ActiveCellSet active_cells(const Lineage& lin);

/// Cell sets of level `level` covered by the refined functions of that level.
std::set<MultiIndex> refined_support_cells(const Lineage& lin, int level);

struct AbsorbingCheck {
    bool absorbing = true;
    std::optional<SplineRef> witness; // a generator member fully covered by
                                      // refined functions of its level
};

AbsorbingCheck is_absorbing(const Lineage& lin);

/// Positive coefficients c_f with sum_f c_f * f == 1 on Omega, computed by
/// pushing the coarsest-level unit coefficients down through the
/// subdivision mask across refined functions. Exact rationals; cached per
/// lineage version.
std::map<SplineRef, Rational> partition_of_unity(const Lineage& lin);

/// Largest k such that some generator function k levels coarser overlaps f.
/// Diagnostic; the refinement algorithms never need it.
int gap_of_function(const Lineage& lin, const GeneratorView& gen, const SplineRef& f);
int gap_of_function(const Lineage& lin, const SplineRef& f);
int gap_of_generator(const Lineage& lin);

struct RefinementRelation {
    bool refines = false;
    std::vector<SplineRef> refiner; // finer minus coarser when refines
};

/// Whether l_star refines lin (set inclusion of the refined sets).
RefinementRelation is_refinement(const Lineage& l_star, const Lineage& lin);

/// Canonical JSON serialization; round-trips byte-exactly.
std::string to_json(const Lineage& lin);
Lineage lineage_from_json(const std::string& text);

} // namespace hbs
