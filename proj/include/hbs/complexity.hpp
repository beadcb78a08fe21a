#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "hbs/refinement.hpp"

namespace hbs {

/// Allocation-argument constants bounding generator growth by the total
/// number of marked functions across an adaptive run.
struct ComplexityConstants {
    double A = 0;            // sum of a(k) over k >= -g
    double B = 0;            // sum of b(k) n^{-k} over k >= -g
    double D = 0;            // locality constant times B
    double locality = 0;     // ga_locality_constant
    double locality_alt = 0; // ga_locality_constant_alt, reported only
    double C_U = 0;          // (2D+1)^d * A
    double C_L = 0;          // inf_{k >= -g} a(k) b(k)
};

/// Remainder of a series past index K: an estimate plus a bound on its
/// absolute error.
struct TailEstimate {
    double value = 0;
    double error = 0;
};

/// A weight pair for the allocation argument: a decreasing and summable,
/// b increasing with b(0) >= 1 and sum b(k) n^{-k} finite. The tail
/// callables estimate the remainders sum_{k>K} a(k) and sum_{k>K} b(k) n^{-k}.
struct SequencePair {
    std::function<double(std::int64_t)> a;
    std::function<double(std::int64_t)> b;
    std::function<TailEstimate(std::int64_t)> a_tail;
    std::function<TailEstimate(std::int64_t)> b_tail;
};

/// a(k) = (k+g+1)^{-2}, b(k) = n^{k/2}.
SequencePair default_sequences(const SpaceConfig& cfg);

ComplexityConstants complexity_constants(const SpaceConfig& cfg);
ComplexityConstants complexity_constants(const SpaceConfig& cfg, const SequencePair& seq);

/// One adaptive step as seen by the audit: how many functions were marked
/// and how large the generator was after the step.
struct AuditStep {
    std::size_t marked = 0;
    std::size_t generator_size = 0;
};

struct AuditReport {
    bool ok = true;
    double bound = 0;           // C_U / C_L
    double worst_ratio = 0;     // max over prefixes of growth / marked total
    int first_violation = -1;   // step index, -1 when ok
};

/// Checks #H_R - #H_0 <= (C_U/C_L) * sum of marked counts for every prefix.
AuditReport complexity_audit(std::span<const AuditStep> steps, std::size_t initial_size,
                             double cu_over_cl);

} // namespace hbs
