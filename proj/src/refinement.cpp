#include "hbs/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hbs {

namespace {

struct Snapshot {
    LevelIndexSets generator_levels;
    LevelIndexSets refined_levels;
    int depth = 0;
    std::size_t generator_size = 0;
};

Snapshot take_snapshot(const Lineage& lin) {
    GeneratorView gen = generator(lin);
    return Snapshot{gen.levels, lin.refined_sets(), lin.depth(), gen.size};
}

RefinementReport diff_reports(const Lineage& lin, const Snapshot& before) {
    RefinementReport rep;
    GeneratorView after = generator(lin);
    rep.depth_before = before.depth;
    rep.depth_after = lin.depth();
    rep.generator_before = before.generator_size;
    rep.generator_after = after.size;

    LevelIndexSets refined_after = lin.refined_sets();
    for (size_t level = 0; level < refined_after.size(); ++level) {
        const std::set<MultiIndex>* old_slot =
            level < before.refined_levels.size() ? &before.refined_levels[level] : nullptr;
        for (const MultiIndex& p : refined_after[level]) {
            if (old_slot && old_slot->count(p)) continue;
            SplineRef f{static_cast<int>(level), p};
            rep.refiner.push_back(f);
            if (level < before.generator_levels.size() &&
                before.generator_levels[level].count(p))
                rep.marked.push_back(f);
        }
    }
    for (size_t level = 0; level < after.levels.size(); ++level) {
        const std::set<MultiIndex>* old_slot =
            level < before.generator_levels.size() ? &before.generator_levels[level] : nullptr;
        for (const MultiIndex& p : after.levels[level])
            if (!old_slot || !old_slot->count(p))
                rep.added.push_back(SplineRef{static_cast<int>(level), p});
    }
    for (size_t level = 0; level < before.generator_levels.size(); ++level) {
        const std::set<MultiIndex>* new_slot =
            level < after.levels.size() ? &after.levels[level] : nullptr;
        for (const MultiIndex& p : before.generator_levels[level])
            if (!new_slot || !new_slot->count(p))
                rep.removed.push_back(SplineRef{static_cast<int>(level), p});
    }
    return rep;
}

void require_marks_in_generator(const Lineage& lin, std::span<const SplineRef> marks) {
    std::vector<SplineRef> offenders;
    for (const SplineRef& f : marks)
        if (!lin.in_generator(f)) offenders.push_back(f);
    if (offenders.empty()) return;
    std::ostringstream os;
    os << "marks outside the generator:";
    for (const SplineRef& f : offenders) {
        os << " [level " << f.level << " (";
        for (size_t k = 0; k < f.index.size(); ++k) os << (k ? "," : "") << f.index[k];
        os << ")]";
    }
    throw contract_error(os.str());
}

// Core bodies shared by the reporting wrappers.

void refine_core(Lineage& lin, std::span<const SplineRef> marks) {
    require_marks_in_generator(lin, marks);
    for (const SplineRef& f : marks)
        if (lin.in_generator(f)) lin.refine_member(f); // duplicates in marks are no-ops
}

void abs_refine_core(Lineage& lin) {
    const int input_depth = lin.depth();
    Lineage rebuilt(lin.config());
    for (int level = 0; level < input_depth; ++level) {
        std::set<MultiIndex> covered = refined_support_cells(lin, level);
        std::vector<SplineRef> marks;
        for (const MultiIndex& p : rebuilt.pool_at(level)) {
            SplineRef f{level, p};
            if (lin.refined_at(level).count(p)) {
                marks.push_back(f);
                continue;
            }
            if (covered.empty()) continue;
            CellBox supp = cell_support(lin.config(), f);
            bool inside = true;
            for_each_point(supp.box, [&](const MultiIndex& c) {
                if (!covered.count(c)) inside = false;
            });
            if (inside) marks.push_back(f);
        }
        refine_core(rebuilt, marks);
    }
    lin.adopt(rebuilt);
}

std::vector<SplineRef> gc_overlap(const Lineage& lin, const SplineRef& f) {
    GeneratorView gen = generator(lin);
    SplineRef fs[1] = {f};
    return overlap_set(lin.config(), fs, -static_cast<int>(lin.config().g), gen.levels);
}

void gc_single_refine_core(Lineage& lin, const SplineRef& f, GcVariant variant) {
    if (variant == GcVariant::recompute) {
        // Faithful while-loop form: the overlap set is re-evaluated until it
        // drains, then the target itself is refined.
        std::vector<SplineRef> stack{f};
        while (!stack.empty()) {
            SplineRef target = stack.back();
            std::vector<SplineRef> pending = gc_overlap(lin, target);
            if (!pending.empty()) {
                stack.push_back(pending.front());
                continue;
            }
            if (lin.in_generator(target)) lin.refine_member(target);
            stack.pop_back();
        }
        return;
    }
    // Overlap set fixed at frame entry; recursion replaced by a work stack,
    // members processed in level-major lexicographic order.
    struct Frame {
        SplineRef target;
        std::vector<SplineRef> pending;
        size_t next = 0;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{f, gc_overlap(lin, f), 0});
    while (!stack.empty()) {
        Frame& top = stack.back();
        bool descended = false;
        while (top.next < top.pending.size()) {
            SplineRef next = top.pending[top.next++];
            if (!lin.in_generator(next)) continue;
            std::vector<SplineRef> pending = gc_overlap(lin, next);
            stack.push_back(Frame{next, std::move(pending), 0});
            descended = true;
            break;
        }
        if (descended) continue;
        SplineRef target = stack.back().target;
        if (lin.in_generator(target)) lin.refine_member(target);
        stack.pop_back();
    }
}

void gc_refine_core(Lineage& lin, std::span<const SplineRef> marks, GcVariant variant) {
    require_marks_in_generator(lin, marks);
    std::vector<SplineRef> order(marks.begin(), marks.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (const SplineRef& f : order)
        if (lin.in_generator(f)) gc_single_refine_core(lin, f, variant);
}

} // namespace

RefinementReport single_refine(Lineage& lin, const SplineRef& f) {
    require_marks_in_generator(lin, std::span<const SplineRef>(&f, 1));
    Snapshot before = take_snapshot(lin);
    lin.refine_member(f);
    return diff_reports(lin, before);
}

RefinementReport refine(Lineage& lin, std::span<const SplineRef> marks) {
    Snapshot before = take_snapshot(lin);
    refine_core(lin, marks);
    return diff_reports(lin, before);
}

RefinementReport abs_refine(Lineage& lin) {
    Snapshot before = take_snapshot(lin);
    abs_refine_core(lin);
    return diff_reports(lin, before);
}

RefinementReport gc_single_refine(Lineage& lin, const SplineRef& f, GcVariant variant) {
    require_marks_in_generator(lin, std::span<const SplineRef>(&f, 1));
    Snapshot before = take_snapshot(lin);
    gc_single_refine_core(lin, f, variant);
    return diff_reports(lin, before);
}

RefinementReport gc_refine(Lineage& lin, std::span<const SplineRef> marks, GcVariant variant) {
    Snapshot before = take_snapshot(lin);
    gc_refine_core(lin, marks, variant);
    return diff_reports(lin, before);
}

RefinementReport ga_refine(Lineage& lin, std::span<const SplineRef> marks) {
    Snapshot before = take_snapshot(lin);
    gc_refine_core(lin, marks, GcVariant::precomputed);
    abs_refine_core(lin);
    return diff_reports(lin, before);
}

Lineage to_absorbing_gap_controlled(const Lineage& coarse) {
    Lineage out(coarse.config());
    for (int level = 0; level < coarse.depth(); ++level) {
        std::vector<SplineRef> marks;
        for (const MultiIndex& p : coarse.refined_at(level)) {
            SplineRef f{level, p};
            if (out.in_generator(f)) marks.push_back(f);
            else if (!out.is_refined(f))
                throw error("to_absorbing_gap_controlled: input member escaped the pool");
        }
        ga_refine(out, marks);
    }
    return out;
}

double ga_locality_constant(const SpaceConfig& cfg) {
    const double ng = std::pow(static_cast<double>(cfg.n), static_cast<double>(cfg.g));
    const double m = static_cast<double>(cfg.m);
    const double n = static_cast<double>(cfg.n);
    return std::max(ng * (3.0 * n + 1.0) * m, 4.0 * m * ng);
}

double ga_locality_constant_alt(const SpaceConfig& cfg) {
    return 4.0 * std::pow(static_cast<double>(cfg.m), static_cast<double>(cfg.g));
}

} // namespace hbs
