#include <doctest.h>

#include <algorithm>

#include "hbs/oracle.hpp"
#include "test_support.hpp"

using namespace hbs;

namespace {

SpaceConfig cfg_with(Index n, Index m, Index d = 1, Index g = 1) {
    SpaceConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.d = d;
    cfg.g = g;
    return cfg;
}

} // namespace

TEST_CASE("independence of plain sets") {
    SpaceConfig cfg = cfg_with(2, 2);
    std::vector<SplineRef> b0{SplineRef{0, {-1}}, SplineRef{0, {0}}};
    oracle::RankResult r = oracle::check_linear_independence(cfg, b0);
    CHECK(r.independent);
    CHECK(r.rank == 2);

    // mixed-level independent set
    std::vector<SplineRef> mixed{SplineRef{0, {-1}}, SplineRef{1, {0}}, SplineRef{2, {3}}};
    CHECK(oracle::check_linear_independence(cfg, mixed).independent);
}

TEST_CASE("the dependent worked example and its kernel") {
    SpaceConfig cfg = cfg_with(2, 3);
    Lineage dep = Lineage::from_levels(cfg, {{{-2}, {0}}});
    std::vector<SplineRef> gen = generator(dep).members();
    oracle::RankResult r = oracle::check_linear_independence(cfg, gen);
    CHECK_FALSE(r.independent);
    CHECK(r.rank == gen.size() - 1);
    REQUIRE(r.kernel.size() == gen.size());

    // the kernel really is a dependence, and it involves the coarse function
    Rng rng(41);
    size_t coarse_pos = SIZE_MAX;
    for (size_t i = 0; i < gen.size(); ++i)
        if (gen[i] == SplineRef{0, {-1}}) coarse_pos = i;
    REQUIRE(coarse_pos != SIZE_MAX);
    CHECK(r.kernel[coarse_pos] != 0);
    for (int pt = 0; pt < 40; ++pt) {
        std::vector<Rational> x = brute::random_domain_point(rng, 1);
        Rational sum(0);
        for (size_t i = 0; i < gen.size(); ++i) sum += r.kernel[i] * evaluate(cfg, gen[i], x);
        CHECK(sum == 0);
    }

    // the independent-but-not-absorbing example passes the rank test
    Lineage ina = Lineage::from_levels(cfg_with(2, 2), {{{-1}, {0}}, {{-1}, {1}}});
    CHECK(oracle::check_linear_independence(ina.config(), generator(ina).members()).independent);
}

TEST_CASE("rank is invariant under input order") {
    Rng rng(42);
    SpaceConfig cfg = cfg_with(2, 2, 1);
    Lineage lin = brute::random_lineage(cfg, rng, 5, 3);
    std::vector<SplineRef> gen = generator(lin).members();
    oracle::RankResult base = oracle::check_linear_independence(cfg, gen);
    for (int trial = 0; trial < 5; ++trial) {
        for (size_t i = gen.size(); i > 1; --i)
            std::swap(gen[i - 1], gen[rng.below(i)]);
        oracle::RankResult shuffled = oracle::check_linear_independence(cfg, gen);
        CHECK(shuffled.rank == base.rank);
        CHECK(shuffled.independent == base.independent);
    }

    // rank is monotone under adding functions
    std::vector<SplineRef> extended = gen;
    extended.push_back(SplineRef{0, {-1}});
    extended.push_back(SplineRef{1, {1}});
    std::sort(extended.begin(), extended.end());
    extended.erase(std::unique(extended.begin(), extended.end()), extended.end());
    oracle::RankResult bigger = oracle::check_linear_independence(cfg, extended);
    CHECK(bigger.rank >= base.rank);
}

TEST_CASE("span solves") {
    SpaceConfig cfg = cfg_with(2, 2);
    // children reproduce the parent with the mask coefficients
    SplineRef parent{0, {0}};
    SplineBox kids = spline_children_box(cfg, SplineBox{0, LatticeBox::single(parent.index)}, 1);
    oracle::SpanSolve solve = oracle::span_contains(cfg, splines_of_box(kids), parent);
    CHECK(solve.contained);
    std::vector<Rational> mask = subdivision_mask(cfg);
    for (const auto& [child, coeff] : solve.coefficients) {
        CHECK(coeff == mask[static_cast<size_t>(child.index[0] - cfg.n * parent.index[0])]);
    }

    // the level-one box of the dependent example contains the coarse function
    SpaceConfig m3 = cfg_with(2, 3);
    std::vector<SplineRef> level1;
    for_each_point(spline_domain(m3, 1),
                   [&](const MultiIndex& p) { level1.push_back(SplineRef{1, p}); });
    CHECK(oracle::span_contains(m3, level1, SplineRef{0, {-1}}).contained);

    // far-away functions are not contained
    std::vector<SplineRef> far{SplineRef{2, {3}}};
    CHECK_FALSE(oracle::span_contains(cfg, far, SplineRef{2, {-1}}).contained);
}

TEST_CASE("collocation cover is a partition fine enough for every function") {
    Rng rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        SpaceConfig cfg = cfg_with(2, 2, trial % 2 ? 2 : 1);
        Lineage lin = brute::random_lineage(cfg, rng, trial % 2 ? 3 : 5, 3);
        std::vector<SplineRef> gen = generator(lin).members();
        oracle::CollocationSystem sys = oracle::collocation_system(cfg, gen);
        REQUIRE(!sys.cells.empty());
        // cells pairwise have disjoint interiors
        for (size_t i = 0; i < sys.cells.size(); ++i)
            for (size_t j = i + 1; j < sys.cells.size(); ++j) {
                bool overlap = true;
                for (size_t a = 0; a < sys.cells[i].index.size(); ++a)
                    if (!brute::spans_overlap(cfg, brute::cell_span(sys.cells[i], a),
                                              brute::cell_span(sys.cells[j], a)))
                        overlap = false;
                CHECK_FALSE(overlap);
            }
        // every cell is at least as fine as any function overlapping it
        for (const CellRef& cell : sys.cells)
            for (const SplineRef& f : gen)
                if (brute::cell_meets_support(cfg, cell, f)) CHECK(cell.level >= f.level);
        // nodes are strictly interior
        for (size_t ci = 0; ci < sys.cells.size(); ++ci) {
            std::vector<Rational> lo = cell_lower(cfg, sys.cells[ci]);
            std::vector<Rational> hi = cell_upper(cfg, sys.cells[ci]);
            for (const auto& node : sys.points[ci])
                for (size_t a = 0; a < node.size(); ++a) {
                    CHECK(node[a] > lo[a]);
                    CHECK(node[a] < hi[a]);
                }
        }
    }
}

TEST_CASE("definition-level gap agrees with the box route") {
    Rng rng(44);
    for (int trial = 0; trial < 8; ++trial) {
        SpaceConfig cfg = cfg_with(2, trial % 2 ? 3 : 2, 1);
        Lineage lin = brute::random_lineage(cfg, rng, 6, 4);
        GeneratorView gen = generator(lin);
        for (const SplineRef& f : gen.members())
            CHECK(oracle::gap_by_definition(lin, gen, f) == gap_of_function(lin, gen, f));
    }
}

TEST_CASE("exhaustive least elements") {
    // absorbing family of the dependent example
    Lineage dep = Lineage::from_levels(cfg_with(2, 3), {{{-2}, {0}}});
    oracle::LeastElementResult abs =
        oracle::least_element(dep, oracle::FamilyKind::absorbing, std::nullopt);
    REQUIRE(abs.least.has_value());
    Lineage algo = dep;
    abs_refine(algo);
    CHECK(*abs.least == algo);
    CHECK(abs.family_size == 1); // only one absorbing candidate at this depth
    CHECK(abs.enumerated == 2);

    // already conforming: the least element is the lineage itself
    Lineage empty(cfg_with(2, 2));
    oracle::LeastElementResult self =
        oracle::least_element(empty, oracle::FamilyKind::absorbing, std::nullopt);
    REQUIRE(self.least.has_value());
    CHECK(*self.least == empty);

    // gap family of the worked single-refinement example
    SpaceConfig cfg = cfg_with(2, 2, 1, 1);
    Lineage base = Lineage::from_levels(cfg, {{{0}}});
    oracle::LeastElementResult gap =
        oracle::least_element(base, oracle::FamilyKind::gap_bounded_with, SplineRef{1, {0}});
    REQUIRE(gap.least.has_value());
    Lineage algo2 = base;
    gc_single_refine(algo2, SplineRef{1, {0}});
    CHECK(*gap.least == algo2);

    // the cap is enforced
    Lineage deeper = Lineage::from_levels(cfg, {{{0}}, {{1}}});
    CHECK_THROWS_AS(oracle::least_element(deeper, oracle::FamilyKind::absorbing, std::nullopt, 4),
                    size_error);
}
