#pragma once

#include <stdexcept>
#include <string>

namespace dualsrc {

// Domain error with a stable machine-readable code, surfaced by the CLI as
// {"error": code, "message": ...} on stderr with exit status 1.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* negative_value = "NegativeValue";
inline constexpr const char* off_lattice = "OffLattice";
inline constexpr const char* prob_sum_mismatch = "ProbSumMismatch";
inline constexpr const char* zero_variance = "ZeroVariance";
inline constexpr const char* lead_time_order = "LeadTimeOrder";
inline constexpr const char* cost_order = "CostOrder";
inline constexpr const char* non_positive_cost = "NonPositiveCost";
inline constexpr const char* non_negative_drift = "NonNegativeDrift";
inline constexpr const char* truncation_too_tight = "TruncationTooTight";
inline constexpr const char* no_convergence = "NoConvergence";
inline constexpr const char* grid_too_narrow = "GridTooNarrow";
inline constexpr const char* state_escape = "StateEscape";
inline constexpr const char* parse_error = "ParseError";
}  // namespace errc

}  // namespace dualsrc
