#include <doctest.h>

#include "test_support.hpp"

using namespace hbs;

namespace {

SpaceConfig cfg_with(Index n, Index m = 2, Index d = 1) {
    SpaceConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.d = d;
    return cfg;
}

} // namespace

TEST_CASE("children boxes of cells") {
    SpaceConfig cfg = cfg_with(2);
    CHECK(cell_children_box(cfg, CellBox{0, LatticeBox{{0}, {0}}}, 1) ==
          CellBox{1, LatticeBox{{0}, {1}}});
    CHECK(cell_children_box(cfg, CellBox{1, LatticeBox{{0}, {1}}}, 1) ==
          CellBox{2, LatticeBox{{0}, {3}}});

    SpaceConfig c3 = cfg_with(3, 2, 2);
    CHECK(cell_children_box(c3, CellBox{0, LatticeBox{{0, 0}, {0, 0}}}, 2) ==
          CellBox{2, LatticeBox{{0, 0}, {8, 8}}});
    // equals two single-level applications
    CellBox once = cell_children_box(c3, CellBox{0, LatticeBox{{0, 0}, {0, 0}}}, 1);
    CHECK(cell_children_box(c3, once, 1) ==
          cell_children_box(c3, CellBox{0, LatticeBox{{0, 0}, {0, 0}}}, 2));
}

TEST_CASE("ancestor boxes of cells") {
    SpaceConfig cfg = cfg_with(2);
    CHECK(cell_ancestor_box(cfg, CellBox{2, LatticeBox{{1}, {2}}}, 1) ==
          CellBox{1, LatticeBox{{0}, {1}}});
    CHECK(cell_ancestor_box(cfg, CellBox{2, LatticeBox{{0}, {3}}}, 2) ==
          CellBox{0, LatticeBox{{0}, {0}}});
    CHECK_THROWS_AS(cell_ancestor_box(cfg, CellBox{1, LatticeBox{{0}, {1}}}, 2), contract_error);
}

TEST_CASE("cell ancestry matches enumeration") {
    Rng rng(3);
    for (Index n : {2, 3})
        for (Index d : {1, 2}) {
            SpaceConfig cfg = cfg_with(n, 2, d);
            for (int trial = 0; trial < 60; ++trial) {
                int level = 1 + static_cast<int>(rng.below(2));
                int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(level)));
                LatticeBox domain = cell_domain(cfg, level);
                MultiIndex a = brute::random_point(rng, domain);
                MultiIndex b = brute::random_point(rng, domain);
                MultiIndex lo(a.size()), hi(a.size());
                for (size_t ax = 0; ax < a.size(); ++ax) {
                    lo[ax] = std::min(a[ax], b[ax]);
                    hi[ax] = std::max(a[ax], b[ax]);
                }
                CellBox cells{level, LatticeBox{lo, hi}};
                CHECK(brute::box_point_set(cell_ancestor_box(cfg, cells, k).box) ==
                      brute::cell_ancestors(cfg, brute::box_point_set(cells.box), level, k));
                if (level + k <= cfg.max_level) {
                    CHECK(brute::box_point_set(cell_children_box(cfg, cells, k).box) ==
                          brute::cell_descendants(cfg, brute::box_point_set(cells.box), level, k));
                }
            }
        }
}

TEST_CASE("ancestry duality on small levels") {
    SpaceConfig cfg = cfg_with(2, 2, 1);
    for (int la = 0; la <= 3; ++la)
        for (int lb = la + 1; lb <= 3; ++lb) {
            int k = lb - la;
            for_each_point(cell_domain(cfg, la), [&](const MultiIndex& i) {
                std::set<MultiIndex> desc = brute::cell_descendants(cfg, {i}, la, k);
                for_each_point(cell_domain(cfg, lb), [&](const MultiIndex& j) {
                    bool in_children =
                        cell_children_box(cfg, CellBox{la, LatticeBox::single(i)}, k).box.contains(j);
                    bool in_ancestors =
                        cell_ancestor_box(cfg, CellBox{lb, LatticeBox::single(j)}, k).box.contains(i);
                    CHECK(in_children == in_ancestors);
                    CHECK(in_children == (desc.count(j) > 0));
                });
            });
        }
}

TEST_CASE("children then ancestors recovers single cells") {
    SpaceConfig cfg = cfg_with(3, 2, 2);
    CellBox cell{1, LatticeBox{{1, 2}, {1, 2}}};
    CellBox down = cell_children_box(cfg, cell, 2);
    CHECK(cell_ancestor_box(cfg, down, 2) == cell);

    CellBox wide{1, LatticeBox{{0, 0}, {1, 2}}};
    CellBox round_trip = cell_ancestor_box(cfg, cell_children_box(cfg, wide, 1), 1);
    for_each_point(wide.box, [&](const MultiIndex& p) { CHECK(round_trip.box.contains(p)); });
}

TEST_CASE("cell of a point") {
    SpaceConfig cfg = cfg_with(2);
    CHECK(cell_of_point(cfg, 1, {make_rational(1, 2)}) == CellRef{1, {1}});
    CHECK(cell_of_point(cfg, 1, {Rational(1)}) == CellRef{1, {1}});
    SpaceConfig c3 = cfg_with(3);
    CHECK(cell_of_point(c3, 2, {make_rational(4, 9)}) == CellRef{2, {4}});
    CHECK_THROWS_AS(cell_of_point(cfg, 1, {Rational(2)}), contract_error);

    // the located cell really contains the point
    Rng rng(5);
    SpaceConfig c2 = cfg_with(2, 2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> x = brute::random_domain_point(rng, 2);
        CellRef cell = cell_of_point(c2, 2, x);
        std::vector<Rational> lo = cell_lower(c2, cell);
        std::vector<Rational> hi = cell_upper(c2, cell);
        for (size_t a = 0; a < x.size(); ++a) {
            CHECK(x[a] >= lo[a]);
            if (x[a] != 1) CHECK(x[a] < hi[a]);
        }
    }
}

TEST_CASE("children of one cell partition it") {
    for (Index n : {2, 3}) {
        SpaceConfig cfg = cfg_with(n, 2, 1);
        CellBox kids = cell_children_box(cfg, CellBox{1, LatticeBox{{1}, {1}}}, 1);
        CHECK(kids.box.cardinality() == n);
        // contiguous range whose union is exactly the parent interval
        CHECK(kids.box.lo[0] == n);
        CHECK(kids.box.hi[0] == 2 * n - 1);
    }
}

TEST_CASE("level cap produces a depth error") {
    SpaceConfig cfg = cfg_with(2);
    cfg.max_level = 3;
    CHECK_THROWS_AS(cell_children_box(cfg, CellBox{3, LatticeBox{{0}, {0}}}, 1), depth_error);
}
