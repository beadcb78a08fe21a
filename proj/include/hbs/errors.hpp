#pragma once

#include <stdexcept>
#include <string>

namespace hbs {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, or index arithmetic left the checked integer range.
struct config_error : error {
    using error::error;
};

/// A caller broke an operation precondition.
struct contract_error : error {
    using error::error;
};

/// Level arithmetic walked past SpaceConfig::max_level.
struct depth_error : error {
    using error::error;
};

/// An exhaustive search exceeded its cap.
struct size_error : error {
    using error::error;
};

/// File or format problem.
struct io_error : error {
    using error::error;
};

} // namespace hbs
