#pragma once

#include <stdexcept>
#include <string>

namespace adsmax {

enum class ErrorCode : int {
    ok = 0,
    invalid_parameter = 1,
    grid_mismatch = 2,
    no_convergence = 3,
    norm_too_large = 4,
    inverse_interpolation_failure = 5,
    vanishing_derivative = 6,
    newton_divergence = 7,
    norm_violation = 8,
    non_unique_candidate = 9,
    config_parse = 10,
    scenario_failure = 11,
    internal = 99,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg, long node = -1)
        : std::runtime_error(msg), code_(code), node_(node) {}
    ErrorCode code() const { return code_; }
    // node index for pointwise failures, -1 otherwise
    long node() const { return node_; }

private:
    ErrorCode code_;
    long node_;
};

} // namespace adsmax
