#pragma once

#include <stdexcept>
#include <string>

namespace emvm {

// Base class for model-level failures (as opposed to precondition violations,
// which throw std::invalid_argument).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The matched-load value K^2/Dp - Rc would be non-positive: the coil eats all
// the matched damping and no resistive load can realize De = Dp.
struct NonPhysicalOptimum : ModelError {
    using ModelError::ModelError;
};

// Time-domain run exhausted max_cycles without meeting the periodic
// steady-state criterion.
struct NoConvergence : ModelError {
    using ModelError::ModelError;
};

// Least-squares source-resistance extraction got a singular/ill-posed system
// (fewer than two distinct current points).
struct DegenerateFit : ModelError {
    using ModelError::ModelError;
};

// Invalid run configuration. `path` is the dotted location of the offending
// field ("generator.mass_kg"), empty when the problem is document-wide.
struct ConfigError : std::runtime_error {
    std::string path;
    ConfigError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path.empty() ? message
                                                : field_path + ": " + message),
          path(std::move(field_path)) {}
};

}  // namespace emvm
