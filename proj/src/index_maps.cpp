#include "hbs/index_maps.hpp"

namespace hbs {

Index m_iter(const SpaceConfig& cfg, Index shift, int k, Index i) {
    if (k < 0) throw contract_error("m_iter: k must be >= 0");
    Index v = i;
    for (int t = 0; t < k; ++t)
        v = checked_add(checked_mul(cfg.n, v), shift);
    return v;
}

Index d_iter(const SpaceConfig& cfg, Index shift, int k, Index i) {
    if (k < 0) throw contract_error("d_iter: k must be >= 0");
    Index v = i;
    for (int t = 0; t < k; ++t)
        v = floor_div(checked_sub(v, shift), cfg.n);
    return v;
}

MultiIndex m_iter(const SpaceConfig& cfg, Index shift, int k, const MultiIndex& i) {
    MultiIndex out(i.size());
    for (size_t a = 0; a < i.size(); ++a) out[a] = m_iter(cfg, shift, k, i[a]);
    return out;
}

MultiIndex d_iter(const SpaceConfig& cfg, Index shift, int k, const MultiIndex& i) {
    MultiIndex out(i.size());
    for (size_t a = 0; a < i.size(); ++a) out[a] = d_iter(cfg, shift, k, i[a]);
    return out;
}

Index lr_iter(const SpaceConfig& cfg, Side side, int k, Index i) {
    if (k < 1) throw contract_error("lr_iter: k must be >= 1");
    Index v = i;
    for (int t = 0; t < k; ++t) {
        if (side == Side::left)
            v = checked_sub(d_iter(cfg, 0, static_cast<int>(cfg.g), v), cfg.p());
        else
            v = d_iter(cfg, 0, static_cast<int>(cfg.g), checked_add(v, cfg.p()));
    }
    return v;
}

MultiIndex lr_iter(const SpaceConfig& cfg, Side side, int k, const MultiIndex& i) {
    MultiIndex out(i.size());
    for (size_t a = 0; a < i.size(); ++a) out[a] = lr_iter(cfg, side, k, i[a]);
    return out;
}

static Index apply_map(const SpaceConfig& cfg, const MapSpec& m, Index i) {
    return m.kind == MapSpec::Kind::scale_up ? m_iter(cfg, m.shift, m.k, i)
                                             : d_iter(cfg, m.shift, m.k, i);
}

LatticeBox box_image(const SpaceConfig& cfg, const LatticeBox& box,
                     const MapSpec& lo_map, const MapSpec& hi_map) {
    if (lo_map.kind != hi_map.kind || lo_map.k != hi_map.k)
        throw contract_error("box_image: endpoint maps must share kind and iteration count");
    if (lo_map.k < 0) throw contract_error("box_image: negative iteration count");
    if (lo_map.k > 0) {
        if (lo_map.kind == MapSpec::Kind::scale_up) {
            if (hi_map.shift - lo_map.shift < cfg.n - 1)
                throw contract_error("box_image: scale-up pair is not box preserving");
        } else {
            if (lo_map.shift - hi_map.shift < 0)
                throw contract_error("box_image: scale-down pair is not box preserving");
        }
    }
    if (box.is_empty()) return LatticeBox::empty(box.dim());
    MultiIndex lo(box.lo.size()), hi(box.hi.size());
    for (size_t a = 0; a < box.lo.size(); ++a) {
        lo[a] = apply_map(cfg, lo_map, box.lo[a]);
        hi[a] = apply_map(cfg, hi_map, box.hi[a]);
    }
    return LatticeBox::of(std::move(lo), std::move(hi));
}

LatticeBox dual_box(const SpaceConfig& cfg, int k, Index m_lo, Index m_hi,
                    const LatticeBox& target) {
    if (k < 1) throw contract_error("dual_box: k must be >= 1");
    if (target.is_empty()) return LatticeBox::empty(target.dim());
    MultiIndex lo(target.lo.size()), hi(target.hi.size());
    for (size_t a = 0; a < target.lo.size(); ++a) {
        lo[a] = d_iter(cfg, checked_sub(m_hi, cfg.n - 1), k, target.lo[a]);
        hi[a] = d_iter(cfg, m_lo, k, target.hi[a]);
    }
    return LatticeBox::of(std::move(lo), std::move(hi));
}

} // namespace hbs
