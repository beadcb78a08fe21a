#pragma once

#include "hbs/errors.hpp"
#include "hbs/int_math.hpp"

namespace hbs {

/// Global parameters fixing the whole multilevel structure.
///
/// m  spline order (degree p = m-1)
/// n  subdivision arity per axis when moving one level finer (s = n-1)
/// d  space dimension
/// g  gap bound enforced by the gap-controlled refinement algorithms
struct SpaceConfig {
    Index m = 2;
    Index n = 2;
    Index d = 1;
    Index g = 1;
    int max_level = 28;

    Index p() const { return m - 1; }
    Index s() const { return n - 1; }
    int dim() const { return static_cast<int>(d); }

    /// Throws config_error unless the parameters are admissible and every
    /// index computation up to max_level stays inside the machine range.
    void validate() const {
        if (m < 2) throw config_error("SpaceConfig: order m must be >= 2");
        if (n < 2) throw config_error("SpaceConfig: arity n must be >= 2");
        if (d < 1) throw config_error("SpaceConfig: dimension d must be >= 1");
        if (g < 1) throw config_error("SpaceConfig: gap bound g must be >= 1");
        if (max_level < 1) throw config_error("SpaceConfig: max_level must be >= 1");
        // Worst-case magnitude reached by the index maps at max_level + 1.
        Index scale = checked_pow(n, max_level + 1);
        checked_mul(scale, checked_add(m, checked_mul(s(), m)));
    }

    bool operator==(const SpaceConfig& o) const = default;
};

} // namespace hbs
