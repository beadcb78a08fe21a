#include "hbs/driver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace hbs {

using nlohmann::json;

namespace {

json ref_to_json(const SplineRef& f) {
    return json{{"index", f.index}, {"level", f.level}};
}

SplineRef ref_from_json(const json& j, int dim) {
    SplineRef f;
    f.level = j.at("level").get<int>();
    f.index = j.at("index").get<MultiIndex>();
    if (static_cast<int>(f.index.size()) != dim)
        throw io_error("spline reference has the wrong dimension");
    return f;
}

json refs_to_json(const std::vector<SplineRef>& refs) {
    json arr = json::array();
    for (const SplineRef& f : refs) arr.push_back(ref_to_json(f));
    return arr;
}

} // namespace

RunConfig run_config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw io_error(std::string("run config parse: ") + e.what());
    }
    try {
        RunConfig config;
        config.space.m = doc.at("m").get<Index>();
        config.space.n = doc.at("n").get<Index>();
        config.space.d = doc.at("d").get<Index>();
        config.space.g = doc.at("g").get<Index>();
        if (doc.contains("max_level")) config.space.max_level = doc["max_level"].get<int>();
        config.space.validate();
        config.iterations = doc.at("iterations").get<int>();
        if (config.iterations < 0) throw config_error("iterations must be >= 0");

        const json& strat = doc.at("strategy");
        std::string kind = strat.at("kind").get<std::string>();
        if (kind == "random_k") {
            config.strategy.kind = MarkStrategy::Kind::random_k;
            config.strategy.k = strat.at("k").get<int>();
            config.strategy.seed = strat.at("seed").get<std::uint64_t>();
        } else if (kind == "greedy_support") {
            config.strategy.kind = MarkStrategy::Kind::greedy_support;
            config.strategy.k = strat.at("k").get<int>();
            if (strat.contains("seed")) config.strategy.seed = strat["seed"].get<std::uint64_t>();
        } else if (kind == "scripted") {
            config.strategy.kind = MarkStrategy::Kind::scripted;
            for (const json& step : strat.at("steps")) {
                std::vector<SplineRef> marks;
                for (const json& j : step) marks.push_back(ref_from_json(j, config.space.dim()));
                config.strategy.scripted_steps.push_back(std::move(marks));
            }
        } else {
            throw config_error("unknown marking strategy: " + kind);
        }
        if (config.strategy.kind != MarkStrategy::Kind::scripted && config.strategy.k < 1)
            throw config_error("strategy parameter k must be >= 1");

        std::string audit = doc.value("audit", std::string("fast"));
        if (audit == "none") config.audit = AuditLevel::none;
        else if (audit == "fast") config.audit = AuditLevel::fast;
        else if (audit == "oracle") config.audit = AuditLevel::oracle;
        else throw config_error("unknown audit level: " + audit);
        return config;
    } catch (const json::exception& e) {
        throw io_error(std::string("run config parse: ") + e.what());
    }
}

std::vector<SplineRef> choose_marks(const Lineage& lin, const MarkStrategy& strategy,
                                    int step, Rng& rng) {
    GeneratorView gen = generator(lin);
    std::vector<SplineRef> members = gen.members();
    switch (strategy.kind) {
    case MarkStrategy::Kind::scripted: {
        if (step >= static_cast<int>(strategy.scripted_steps.size())) return {};
        return strategy.scripted_steps[static_cast<size_t>(step)];
    }
    case MarkStrategy::Kind::random_k: {
        const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(strategy.k),
                                                       members.size());
        for (std::size_t i = 0; i < want; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(members.size() - i));
            std::swap(members[i], members[j]);
        }
        members.resize(want);
        std::sort(members.begin(), members.end());
        return members;
    }
    case MarkStrategy::Kind::greedy_support: {
        int finest = 0;
        for (const SplineRef& f : members) finest = std::max(finest, f.level);
        std::vector<std::pair<Rational, SplineRef>> scored;
        for (const SplineRef& f : members) {
            if (f.level != finest) continue;
            Index scale = checked_pow(lin.config().n, f.level);
            Rational volume(1);
            for (size_t a = 0; a < f.index.size(); ++a) {
                Index lo = std::max<Index>(f.index[a], 0);
                Index hi = std::min<Index>(f.index[a] + lin.config().m, scale);
                volume *= make_rational(hi - lo, scale);
            }
            scored.emplace_back(std::move(volume), f);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& lhs, const auto& rhs) {
            if (lhs.first != rhs.first) return lhs.first > rhs.first;
            return lhs.second < rhs.second;
        });
        std::vector<SplineRef> marks;
        for (size_t i = 0; i < scored.size() && i < static_cast<size_t>(strategy.k); ++i)
            marks.push_back(scored[i].second);
        std::sort(marks.begin(), marks.end());
        return marks;
    }
    }
    return {};
}

RunLog run(const RunConfig& config) {
    RunLog log;
    log.config = config;
    Lineage lin(config.space);
    log.initial_generator_size = generator(lin).size;
    Rng rng(config.strategy.seed);

    for (int step = 0; step < config.iterations; ++step) {
        std::vector<SplineRef> marks = choose_marks(lin, config.strategy, step, rng);
        StepRecord rec;
        rec.step = step;
        rec.marked = marks;
        const auto started = std::chrono::steady_clock::now();
        Lineage before_step = lin;
        try {
            RefinementReport rep = ga_refine(lin, marks);
            rec.refiner = rep.refiner;
            rec.generator_size = rep.generator_after;
            rec.depth = rep.depth_after;
        } catch (const depth_error&) {
            lin = before_step; // discard the half-applied step
            log.depth_capped = true;
            break;
        }
        if (config.audit != AuditLevel::none) {
            AbsorbingCheck abs = is_absorbing(lin);
            if (!abs.absorbing) throw error("run: step output is not absorbing");
            for (const SplineRef& f : rec.marked) {
                bool in_refiner = std::binary_search(rec.refiner.begin(), rec.refiner.end(), f);
                if (!in_refiner) throw error("run: marked function missing from the refiner");
            }
        }
        if (config.audit == AuditLevel::oracle) {
            rec.max_gap = oracle::generator_gap_by_definition(lin);
            if (rec.max_gap > static_cast<int>(config.space.g))
                throw error("run: generator gap exceeds the bound");
            oracle::RankResult rank =
                oracle::check_linear_independence(config.space, generator(lin).members());
            if (!rank.independent) throw error("run: generator is not independent");
        }
        const auto finished = std::chrono::steady_clock::now();
        log.step_wall_ms.push_back(
            std::chrono::duration<double, std::milli>(finished - started).count());
        log.steps.push_back(std::move(rec));
    }

    ComplexityConstants constants = complexity_constants(config.space);
    std::vector<AuditStep> audit_steps;
    for (const StepRecord& rec : log.steps)
        audit_steps.push_back(AuditStep{rec.marked.size(), rec.generator_size});
    log.audit = complexity_audit(audit_steps, log.initial_generator_size,
                                 constants.C_U / constants.C_L);
    log.final_lineage_json = to_json(lin);
    return log;
}

std::string RunLog::to_jsonl() const {
    std::ostringstream os;
    for (const StepRecord& rec : steps) {
        json line;
        line["step"] = rec.step;
        line["marked"] = refs_to_json(rec.marked);
        line["refiner"] = refs_to_json(rec.refiner);
        line["generator_size"] = rec.generator_size;
        line["depth"] = rec.depth;
        if (rec.max_gap >= 0) line["max_gap"] = rec.max_gap;
        os << line.dump() << "\n";
    }
    return os.str();
}

std::string RunLog::summary_json() const {
    json doc;
    doc["initial_generator_size"] = initial_generator_size;
    doc["steps"] = steps.size();
    doc["depth_capped"] = depth_capped;
    doc["final_generator_size"] =
        steps.empty() ? initial_generator_size : steps.back().generator_size;
    doc["audit"] = {{"ok", audit.ok},
                    {"bound", audit.bound},
                    {"worst_ratio", audit.worst_ratio},
                    {"first_violation", audit.first_violation}};
    double total_ms = 0;
    for (double ms : step_wall_ms) total_ms += ms;
    doc["wall_ms_total"] = total_ms;
    return doc.dump();
}

std::string VerifyReport::to_json() const {
    json doc;
    doc["pass"] = pass;
    doc["absorbing"] = absorbing;
    doc["serialization_round_trip"] = serialization_round_trip;
    doc["independent"] = independent;
    if (generator_gap >= 0) doc["generator_gap"] = generator_gap;
    doc["gap_within_bound"] = gap_within_bound;
    if (!witness.empty()) doc["witness"] = witness;
    return doc.dump();
}

VerifyReport verify_lineage(const Lineage& lin, AuditLevel level) {
    VerifyReport rep;
    AbsorbingCheck abs = is_absorbing(lin);
    rep.absorbing = abs.absorbing;
    if (!abs.absorbing) {
        rep.pass = false;
        std::ostringstream os;
        os << "generator member fully covered by refined functions: level "
           << abs.witness->level << " (";
        for (size_t k = 0; k < abs.witness->index.size(); ++k)
            os << (k ? "," : "") << abs.witness->index[k];
        os << ")";
        rep.witness = os.str();
    }
    std::string text = to_json(lin);
    rep.serialization_round_trip = to_json(lineage_from_json(text)) == text;
    if (!rep.serialization_round_trip) rep.pass = false;

    if (level == AuditLevel::oracle) {
        oracle::RankResult rank =
            oracle::check_linear_independence(lin.config(), generator(lin).members());
        rep.independent = rank.independent;
        if (!rank.independent) rep.pass = false;
        rep.generator_gap = oracle::generator_gap_by_definition(lin);
        rep.gap_within_bound = rep.generator_gap <= static_cast<int>(lin.config().g);
        if (!rep.gap_within_bound) rep.pass = false;
    }
    return rep;
}

std::string sample_grid(const Lineage& lin, int resolution) {
    if (resolution < 1) throw config_error("sample_grid: resolution must be >= 1");
    const SpaceConfig& cfg = lin.config();
    GeneratorView gen = generator(lin);
    std::vector<SplineRef> members = gen.members();
    std::map<SplineRef, Rational> unity = partition_of_unity(lin);

    std::ostringstream os;
    for (int a = 0; a < cfg.dim(); ++a) os << "x" << (a + 1) << ",";
    os << "unity,active\n";
    os.precision(17);

    LatticeBox grid{broadcast(0, cfg.dim()), broadcast(resolution - 1, cfg.dim())};
    for_each_point(grid, [&](const MultiIndex& t) {
        std::vector<double> x(t.size());
        for (size_t a = 0; a < t.size(); ++a)
            x[a] = resolution == 1 ? 0.0
                                   : static_cast<double>(t[a]) / static_cast<double>(resolution - 1);
        double unity_value = 0.0;
        int active = 0;
        for (const SplineRef& f : members) {
            double v = evaluate(cfg, f, x);
            if (v > 0.0) ++active;
            auto it = unity.find(f);
            if (it != unity.end()) unity_value += it->second.get_d() * v;
        }
        for (double c : x) os << c << ",";
        os << unity_value << "," << active << "\n";
    });
    return os.str();
}

} // namespace hbs
