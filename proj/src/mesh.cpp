#include "hbs/mesh.hpp"

namespace hbs {

LatticeBox cell_domain(const SpaceConfig& cfg, int level) {
    if (level < 0) throw contract_error("cell_domain: negative level");
    if (level > cfg.max_level) throw depth_error("cell_domain: level beyond max_level");
    Index top = checked_sub(checked_pow(cfg.n, level), 1);
    return LatticeBox{broadcast(0, cfg.dim()), broadcast(top, cfg.dim())};
}

CellBox make_cell_box(const SpaceConfig& cfg, int level, const LatticeBox& raw) {
    return CellBox{level, intersect(raw, cell_domain(cfg, level))};
}

CellBox cell_children_box(const SpaceConfig& cfg, const CellBox& cells, int k) {
    if (k < 1) throw contract_error("cell_children_box: k must be >= 1");
    if (cells.level + k > cfg.max_level)
        throw depth_error("cell_children_box: level beyond max_level");
    LatticeBox img = box_image(cfg, cells.box,
                               MapSpec{MapSpec::Kind::scale_up, 0, k},
                               MapSpec{MapSpec::Kind::scale_up, cfg.s(), k});
    return make_cell_box(cfg, cells.level + k, img);
}

CellBox cell_ancestor_box(const SpaceConfig& cfg, const CellBox& cells, int k) {
    if (k < 1) throw contract_error("cell_ancestor_box: k must be >= 1");
    if (k > cells.level) throw contract_error("cell_ancestor_box: k exceeds level");
    LatticeBox img = box_image(cfg, cells.box,
                               MapSpec{MapSpec::Kind::scale_down, 0, k},
                               MapSpec{MapSpec::Kind::scale_down, 0, k});
    return make_cell_box(cfg, cells.level - k, img);
}

CellRef cell_of_point(const SpaceConfig& cfg, int level, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != cfg.dim())
        throw contract_error("cell_of_point: point dimension mismatch");
    Index top = checked_sub(checked_pow(cfg.n, level), 1);
    MultiIndex idx(x.size());
    for (size_t a = 0; a < x.size(); ++a) {
        if (x[a] < 0 || x[a] > 1)
            throw contract_error("cell_of_point: point outside the domain");
        Index i = rational_floor(x[a] * rational_from_index(checked_pow(cfg.n, level)));
        if (i > top) i = top; // right boundary is closed
        idx[a] = i;
    }
    return CellRef{level, std::move(idx)};
}

std::vector<Rational> cell_lower(const SpaceConfig& cfg, const CellRef& cell) {
    Index scale = checked_pow(cfg.n, cell.level);
    std::vector<Rational> out(cell.index.size());
    for (size_t a = 0; a < cell.index.size(); ++a)
        out[a] = make_rational(cell.index[a], scale);
    return out;
}

std::vector<Rational> cell_upper(const SpaceConfig& cfg, const CellRef& cell) {
    Index scale = checked_pow(cfg.n, cell.level);
    std::vector<Rational> out(cell.index.size());
    for (size_t a = 0; a < cell.index.size(); ++a)
        out[a] = make_rational(checked_add(cell.index[a], 1), scale);
    return out;
}

std::vector<CellRef> cells_of_box(const CellBox& cells) {
    std::vector<CellRef> out;
    for_each_point(cells.box, [&](const MultiIndex& p) { out.push_back(CellRef{cells.level, p}); });
    return out;
}

} // namespace hbs
