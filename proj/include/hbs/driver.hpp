#pragma once

#include <string>

#include "hbs/oracle.hpp"
#include "hbs/rng.hpp"

namespace hbs {

/// How marks are chosen each step. random_k draws k distinct generator
/// functions with the seeded portable generator; greedy_support takes the k
/// finest-level functions with the largest in-domain support volume;
/// scripted replays explicit per-step lists.
struct MarkStrategy {
    enum class Kind { random_k, greedy_support, scripted };
    Kind kind = Kind::random_k;
    int k = 1;
    std::uint64_t seed = 0;
    std::vector<std::vector<SplineRef>> scripted_steps;
};

enum class AuditLevel { none, fast, oracle };

struct RunConfig {
    SpaceConfig space;
    int iterations = 0;
    MarkStrategy strategy;
    AuditLevel audit = AuditLevel::fast;
};

RunConfig run_config_from_json(const std::string& text);

struct StepRecord {
    int step = 0;
    std::vector<SplineRef> marked;
    std::vector<SplineRef> refiner;
    std::size_t generator_size = 0;
    int depth = 0;
    int max_gap = -1; // filled in oracle mode only
};

struct RunLog {
    RunConfig config;
    std::size_t initial_generator_size = 0;
    std::vector<StepRecord> steps;
    bool depth_capped = false;  // stopped early at the level cap
    AuditReport audit;
    std::string final_lineage_json;
    std::vector<double> step_wall_ms; // timing sidecar, not part of the log proper

    /// One JSON object per step; deterministic for a fixed config and seed.
    std::string to_jsonl() const;
    std::string summary_json() const;
};

/// Runs the adaptive loop from the coarsest basis, one ga_refine per step.
RunLog run(const RunConfig& config);

/// Picks this step's marks without mutating anything.
std::vector<SplineRef> choose_marks(const Lineage& lin, const MarkStrategy& strategy,
                                    int step, Rng& rng);

struct VerifyReport {
    bool pass = true;
    bool absorbing = true;
    bool serialization_round_trip = true;
    bool independent = true;   // oracle level
    int generator_gap = -1;    // oracle level
    bool gap_within_bound = true;
    std::string witness;       // first failure description
    std::string to_json() const;
};

/// fast: structural checks (validity, absorbing test, round-trip).
/// oracle: adds the exact rank test and the definition-level gap bound.
VerifyReport verify_lineage(const Lineage& lin, AuditLevel level);

/// CSV evaluation grid: coordinates, the unity combination, and the number
/// of generator functions positive at each grid point.
std::string sample_grid(const Lineage& lin, int resolution);

} // namespace hbs
