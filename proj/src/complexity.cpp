#include "hbs/complexity.hpp"

#include <cmath>

namespace hbs {

SequencePair default_sequences(const SpaceConfig& cfg) {
    const double g = static_cast<double>(cfg.g);
    const double n = static_cast<double>(cfg.n);
    SequencePair seq;
    seq.a = [g](std::int64_t k) {
        double base = static_cast<double>(k) + g + 1.0;
        return 1.0 / (base * base);
    };
    seq.b = [n](std::int64_t k) { return std::pow(n, static_cast<double>(k) / 2.0); };
    // sum_{j>J} j^{-2} = 1/J - 1/(2J^2) + 1/(6J^3) - 1/(30J^5) + ...
    seq.a_tail = [g](std::int64_t K) {
        double J = static_cast<double>(K) + g + 1.0;
        return TailEstimate{1.0 / J - 1.0 / (2.0 * J * J) + 1.0 / (6.0 * J * J * J),
                            1.0 / (30.0 * std::pow(J, 5.0))};
    };
    // sum_{k>K} n^{-k/2} is geometric with ratio n^{-1/2}, summed exactly.
    seq.b_tail = [n](std::int64_t K) {
        double r = std::pow(n, -0.5);
        return TailEstimate{std::pow(n, -static_cast<double>(K + 1) / 2.0) / (1.0 - r), 0.0};
    };
    return seq;
}

ComplexityConstants complexity_constants(const SpaceConfig& cfg) {
    return complexity_constants(cfg, default_sequences(cfg));
}

ComplexityConstants complexity_constants(const SpaceConfig& cfg, const SequencePair& seq) {
    const std::int64_t g = cfg.g;
    const double n = static_cast<double>(cfg.n);
    if (seq.b(0) < 1.0)
        throw config_error("complexity_constants: b(0) must be >= 1");
    for (std::int64_t k = -g; k < 64; ++k) {
        if (seq.a(k + 1) > seq.a(k))
            throw config_error("complexity_constants: a must be decreasing");
        if (seq.b(k + 1) < seq.b(k))
            throw config_error("complexity_constants: b must be increasing");
    }

    const double rel = 1e-9;
    ComplexityConstants out;

    double partial_a = 0;
    std::int64_t K = -g - 1;
    while (true) {
        ++K;
        partial_a += seq.a(K);
        TailEstimate tail = seq.a_tail(K);
        if (tail.error <= rel * partial_a) {
            out.A = partial_a + tail.value;
            break;
        }
        if (K > (1 << 24))
            throw config_error("complexity_constants: series a converges too slowly");
    }

    double partial_b = 0;
    K = -g - 1;
    while (true) {
        ++K;
        partial_b += seq.b(K) * std::pow(n, -static_cast<double>(K));
        TailEstimate tail = seq.b_tail(K);
        if (tail.error <= rel * partial_b) {
            out.B = partial_b + tail.value;
            break;
        }
        if (K > (1 << 24))
            throw config_error("complexity_constants: series b n^{-k} converges too slowly");
    }

    double inf = seq.a(-g) * seq.b(-g);
    std::int64_t since_growth = 0;
    for (std::int64_t k = -g + 1; k <= 1 << 20; ++k) {
        double prod = seq.a(k) * seq.b(k);
        if (prod < inf) {
            inf = prod;
            since_growth = 0;
        } else {
            ++since_growth;
        }
        if (prod > 1e6 * inf && since_growth > 64) break;
        if (k == 1 << 20)
            throw config_error("complexity_constants: cannot certify the infimum of a*b");
    }
    out.C_L = inf;

    out.locality = ga_locality_constant(cfg);
    out.locality_alt = ga_locality_constant_alt(cfg);
    out.D = out.locality * out.B;
    out.C_U = std::pow(2.0 * out.D + 1.0, static_cast<double>(cfg.d)) * out.A;
    return out;
}

AuditReport complexity_audit(std::span<const AuditStep> steps, std::size_t initial_size,
                             double cu_over_cl) {
    AuditReport rep;
    rep.bound = cu_over_cl;
    double marked_total = 0;
    for (size_t r = 0; r < steps.size(); ++r) {
        marked_total += static_cast<double>(steps[r].marked);
        double growth = static_cast<double>(steps[r].generator_size) -
                        static_cast<double>(initial_size);
        if (marked_total > 0) {
            double ratio = growth / marked_total;
            if (ratio > rep.worst_ratio) rep.worst_ratio = ratio;
        }
        if (growth > cu_over_cl * marked_total + 1e-9) {
            rep.ok = false;
            if (rep.first_violation < 0) rep.first_violation = static_cast<int>(r);
        }
    }
    return rep;
}

} // namespace hbs
