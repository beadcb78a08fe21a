#include "hbs/hierarchy.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace hbs {

using nlohmann::json;

Lineage::Lineage(const SpaceConfig& cfg) : cfg_(cfg) {
    pool_.emplace_back();
    for_each_point(spline_domain(cfg_, 0),
                   [&](const MultiIndex& p) { pool_[0].insert(p); });
}

static std::string ref_string(const SplineRef& f) {
    std::ostringstream os;
    os << "level " << f.level << " index (";
    for (size_t k = 0; k < f.index.size(); ++k)
        os << (k ? "," : "") << f.index[k];
    os << ")";
    return os.str();
}

Lineage Lineage::from_levels(const SpaceConfig& cfg,
                             const std::vector<std::vector<MultiIndex>>& raw) {
    Lineage lin(cfg);
    for (size_t level = 0; level < raw.size(); ++level) {
        for (const MultiIndex& idx : raw[level]) {
            SplineRef f{static_cast<int>(level), idx};
            if (!is_valid_spline(cfg, f))
                throw contract_error("lineage member out of range: " + ref_string(f));
            if (!lin.in_pool(f))
                throw contract_error("orphan lineage member: " + ref_string(f));
            if (!lin.is_refined(f)) lin.refine_member(f);
        }
    }
    return lin;
}

std::size_t Lineage::refined_count() const {
    std::size_t c = 0;
    for (const auto& s : refined_) c += s.size();
    return c;
}

bool Lineage::is_refined(const SplineRef& f) const {
    if (f.level < 0 || f.level >= depth()) return false;
    return refined_[static_cast<size_t>(f.level)].count(f.index) > 0;
}

bool Lineage::in_pool(const SplineRef& f) const {
    if (f.level < 0 || f.level >= static_cast<int>(pool_.size())) return false;
    return pool_[static_cast<size_t>(f.level)].count(f.index) > 0;
}

bool Lineage::in_generator(const SplineRef& f) const {
    return in_pool(f) && !is_refined(f);
}

const std::set<MultiIndex>& Lineage::empty_set() {
    static const std::set<MultiIndex> e;
    return e;
}

const std::set<MultiIndex>& Lineage::refined_at(int level) const {
    if (level < 0 || level >= depth()) return empty_set();
    return refined_[static_cast<size_t>(level)];
}

const std::set<MultiIndex>& Lineage::pool_at(int level) const {
    if (level < 0 || level >= static_cast<int>(pool_.size())) return empty_set();
    return pool_[static_cast<size_t>(level)];
}

LevelIndexSets Lineage::refined_sets() const { return refined_; }

void Lineage::extend_pool(const SplineRef& f) {
    SplineBox ch = spline_children_box(cfg_, SplineBox{f.level, LatticeBox::single(f.index)}, 1);
    if (static_cast<int>(pool_.size()) <= f.level + 1) pool_.resize(static_cast<size_t>(f.level) + 2);
    auto& slot = pool_[static_cast<size_t>(f.level) + 1];
    for_each_point(ch.box, [&](const MultiIndex& p) { slot.insert(p); });
}

void Lineage::refine_member(const SplineRef& f) {
    if (!in_generator(f))
        throw contract_error("refine of a function outside the generator: " + ref_string(f));
    extend_pool(f); // throws past the level cap, before any state change
    if (static_cast<int>(refined_.size()) <= f.level) refined_.resize(static_cast<size_t>(f.level) + 1);
    refined_[static_cast<size_t>(f.level)].insert(f.index);
    ++version_;
}

void Lineage::adopt(const Lineage& finer) {
    if (!(cfg_ == finer.cfg_)) throw contract_error("adopt: configuration mismatch");
    refined_ = finer.refined_;
    pool_ = finer.pool_;
    ++version_;
}

GeneratorView generator(const Lineage& lin) {
    GeneratorView view;
    view.depth = lin.depth();
    view.levels.resize(static_cast<size_t>(view.depth) + 1);
    for (int level = 0; level <= view.depth; ++level) {
        const auto& pool = lin.pool_at(level);
        const auto& refined = lin.refined_at(level);
        auto& out = view.levels[static_cast<size_t>(level)];
        std::set_difference(pool.begin(), pool.end(), refined.begin(), refined.end(),
                            std::inserter(out, out.end()));
        view.size += out.size();
    }
    return view;
}

std::vector<SplineRef> GeneratorView::members() const {
    std::vector<SplineRef> out;
    out.reserve(size);
    for (size_t level = 0; level < levels.size(); ++level)
        for (const MultiIndex& p : levels[level])
            out.push_back(SplineRef{static_cast<int>(level), p});
    return out;
}

std::set<MultiIndex> refined_support_cells(const Lineage& lin, int level) {
    std::set<MultiIndex> cells;
    for (const MultiIndex& p : lin.refined_at(level)) {
        CellBox supp = cell_support(lin.config(), SplineRef{level, p});
        for_each_point(supp.box, [&](const MultiIndex& c) { cells.insert(c); });
    }
    return cells;
}

ActiveCellSet active_cells(const Lineage& lin) {
    ActiveCellSet out;
    out.levels.resize(static_cast<size_t>(lin.depth()) + 1);
    for (int level = 0; level <= lin.depth(); ++level) {
        std::set<MultiIndex> covered = refined_support_cells(lin, level);
        auto& slot = out.levels[static_cast<size_t>(level)];
        for (const MultiIndex& p : lin.pool_at(level)) {
            CellBox supp = cell_support(lin.config(), SplineRef{level, p});
            for_each_point(supp.box, [&](const MultiIndex& c) {
                if (!covered.count(c)) slot.insert(c);
            });
        }
    }
    return out;
}

std::vector<CellRef> ActiveCellSet::members() const {
    std::vector<CellRef> out;
    for (size_t level = 0; level < levels.size(); ++level)
        for (const MultiIndex& p : levels[level])
            out.push_back(CellRef{static_cast<int>(level), p});
    return out;
}

AbsorbingCheck is_absorbing(const Lineage& lin) {
    for (int level = 0; level < lin.depth(); ++level) {
        std::set<MultiIndex> covered = refined_support_cells(lin, level);
        if (covered.empty()) continue;
        const auto& refined = lin.refined_at(level);
        for (const MultiIndex& p : lin.pool_at(level)) {
            if (refined.count(p)) continue;
            CellBox supp = cell_support(lin.config(), SplineRef{level, p});
            bool inside = true;
            for_each_point(supp.box, [&](const MultiIndex& c) {
                if (!covered.count(c)) inside = false;
            });
            if (inside) return AbsorbingCheck{false, SplineRef{level, p}};
        }
    }
    return AbsorbingCheck{};
}

const std::map<SplineRef, Rational>& Lineage::unity_coefficients() const {
    if (unity_version_ == version_) return unity_cache_;
    std::map<SplineRef, Rational> carried; // coefficients of refined functions in flight
    std::map<SplineRef, Rational> result;
    std::vector<Rational> mask = subdivision_mask(cfg_);
    const Index width = checked_mul(cfg_.s(), cfg_.m);

    for (int level = 0; level <= depth(); ++level) {
        // Classify pool coefficients of this level.
        for (const MultiIndex& p : pool_at(level)) {
            SplineRef f{level, p};
            Rational coeff = level == 0 ? Rational(1) : Rational(0);
            if (auto it = carried.find(f); it != carried.end()) coeff = it->second;
            if (coeff == 0) continue;
            if (is_refined(f)) {
                // Push through the tensor-product mask onto the children.
                LatticeBox ch = intersect(
                    LatticeBox{m_iter(cfg_, 0, 1, p), m_iter(cfg_, width, 1, p)},
                    spline_domain(cfg_, level + 1));
                for_each_point(ch, [&](const MultiIndex& c) {
                    Rational w = coeff;
                    for (size_t a = 0; a < c.size(); ++a)
                        w *= mask[static_cast<size_t>(c[a] - cfg_.n * p[a])];
                    carried[SplineRef{level + 1, c}] += w;
                });
            } else {
                result[f] += coeff;
            }
        }
    }
    unity_cache_ = std::move(result);
    unity_version_ = version_;
    return unity_cache_;
}

std::map<SplineRef, Rational> partition_of_unity(const Lineage& lin) {
    return lin.unity_coefficients();
}

int gap_of_function(const Lineage& lin, const GeneratorView& gen, const SplineRef& f) {
    if (!gen.contains(f))
        throw contract_error("gap_of_function: not a generator member");
    const SpaceConfig& cfg = lin.config();
    for (int k = f.level; k >= 1; --k) {
        SplineBox box = splines_over_cells(cfg, cell_support(cfg, f), -k);
        if (box.box.is_empty()) continue;
        const auto& slot = gen.levels[static_cast<size_t>(f.level - k)];
        bool hit = false;
        if (static_cast<size_t>(box.box.cardinality()) <= slot.size()) {
            for_each_point(box.box, [&](const MultiIndex& p) {
                if (slot.count(p)) hit = true;
            });
        } else {
            for (const MultiIndex& p : slot)
                if (box.box.contains(p)) { hit = true; break; }
        }
        if (hit) return k;
    }
    return 0;
}

int gap_of_function(const Lineage& lin, const SplineRef& f) {
    return gap_of_function(lin, generator(lin), f);
}

int gap_of_generator(const Lineage& lin) {
    GeneratorView gen = generator(lin);
    int best = 0;
    for (const SplineRef& f : gen.members())
        best = std::max(best, gap_of_function(lin, gen, f));
    return best;
}

RefinementRelation is_refinement(const Lineage& l_star, const Lineage& lin) {
    if (!(l_star.config() == lin.config())) return RefinementRelation{};
    RefinementRelation rel;
    for (int level = 0; level < lin.depth(); ++level) {
        const auto& coarse = lin.refined_at(level);
        const auto& fine = l_star.refined_at(level);
        if (!std::includes(fine.begin(), fine.end(), coarse.begin(), coarse.end()))
            return RefinementRelation{};
    }
    rel.refines = true;
    for (int level = 0; level < l_star.depth(); ++level) {
        const auto& coarse = lin.refined_at(level);
        for (const MultiIndex& p : l_star.refined_at(level))
            if (!coarse.count(p)) rel.refiner.push_back(SplineRef{level, p});
    }
    return rel;
}

std::string to_json(const Lineage& lin) {
    json doc;
    doc["format"] = 1;
    doc["config"] = {{"m", lin.config().m},
                     {"n", lin.config().n},
                     {"d", lin.config().d},
                     {"g", lin.config().g}};
    json levels = json::array();
    for (int level = 0; level < lin.depth(); ++level) {
        json entry;
        entry["level"] = level;
        json indices = json::array();
        for (const MultiIndex& p : lin.refined_at(level)) indices.push_back(p);
        entry["indices"] = std::move(indices);
        levels.push_back(std::move(entry));
    }
    doc["lineage"] = std::move(levels);
    return doc.dump();
}

Lineage lineage_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw io_error(std::string("lineage parse: ") + e.what());
    }
    try {
        if (doc.contains("format") && doc["format"].get<int>() != 1)
            throw io_error("lineage parse: unsupported format version");
        SpaceConfig cfg;
        cfg.m = doc.at("config").at("m").get<Index>();
        cfg.n = doc.at("config").at("n").get<Index>();
        cfg.d = doc.at("config").at("d").get<Index>();
        cfg.g = doc.at("config").at("g").get<Index>();
        cfg.validate();
        std::vector<std::vector<MultiIndex>> raw;
        for (const json& entry : doc.at("lineage")) {
            int level = entry.at("level").get<int>();
            if (level < 0 || level > cfg.max_level)
                throw io_error("lineage parse: level out of range");
            if (static_cast<int>(raw.size()) <= level) raw.resize(static_cast<size_t>(level) + 1);
            for (const json& idx : entry.at("indices")) {
                MultiIndex p = idx.get<MultiIndex>();
                if (static_cast<int>(p.size()) != cfg.dim())
                    throw io_error("lineage parse: index dimension mismatch");
                raw[static_cast<size_t>(level)].push_back(std::move(p));
            }
        }
        return Lineage::from_levels(cfg, raw);
    } catch (const json::exception& e) {
        throw io_error(std::string("lineage parse: ") + e.what());
    }
}

} // namespace hbs
