#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace cnslab {

struct Trajectory;

// Every failure mode carries one of these codes so the CLI can map it to a
// documented exit status (config -> 2, blowup -> 4, anything numeric -> 3).
enum class ErrorCode {
    constraint_violation,
    no_feasible_p,
    degenerate_gamma,
    evaluation_past_blowup,
    origin_singularity,
    not_linear_velocity,
    non_integrable,
    quadrature_failure,
    grid_mismatch,
    origin_divergence,
    blowup_detected,
    fit_degenerate,
    wrong_gamma,
    out_of_domain,
    config_error,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

    int exit_code() const {
        switch (code_) {
            case ErrorCode::config_error: return 2;
            case ErrorCode::blowup_detected: return 4;
            default: return 3;
        }
    }

  private:
    ErrorCode code_;
};

// Thrown when a run loses finiteness or the stable time step collapses.
// Carries the trajectory up to (and including) the last healthy state.
class BlowupError : public Error {
  public:
    BlowupError(const std::string& what,
                std::shared_ptr<Trajectory> partial = nullptr)
        : Error(ErrorCode::blowup_detected, what), partial_(std::move(partial)) {}

    const std::shared_ptr<Trajectory>& partial() const { return partial_; }
    void attach(std::shared_ptr<Trajectory> t) { partial_ = std::move(t); }

  private:
    std::shared_ptr<Trajectory> partial_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::constraint_violation: return "ConstraintViolation";
        case ErrorCode::no_feasible_p: return "NoFeasibleP";
        case ErrorCode::degenerate_gamma: return "DegenerateGamma";
        case ErrorCode::evaluation_past_blowup: return "EvaluationPastBlowup";
        case ErrorCode::origin_singularity: return "OriginSingularity";
        case ErrorCode::not_linear_velocity: return "NotLinearVelocity";
        case ErrorCode::non_integrable: return "NonIntegrable";
        case ErrorCode::quadrature_failure: return "QuadratureFailure";
        case ErrorCode::grid_mismatch: return "GridMismatch";
        case ErrorCode::origin_divergence: return "OriginDivergence";
        case ErrorCode::blowup_detected: return "BlowupDetected";
        case ErrorCode::fit_degenerate: return "FitDegenerate";
        case ErrorCode::wrong_gamma: return "WrongGamma";
        case ErrorCode::out_of_domain: return "OutOfDomain";
        case ErrorCode::config_error: return "ConfigError";
    }
    return "Error";
}

}  // namespace cnslab
