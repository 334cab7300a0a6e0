#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mopp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (dimension mismatch, wrong problem class, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// The objective produced a non-finite value or was evaluated out of its domain.
class EvaluationError : public Error {
public:
    using Error::Error;
};

class WeightError : public Error {
public:
    using Error::Error;
};

class OracleError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration; `key()` names the offending setting when one applies.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// The inner solver hit its iteration cap with the stationarity residual above
/// tolerance. The best feasible iterate is carried along so callers that can
/// tolerate inexact steps may still use it.
class InnerSolveError : public Error {
public:
    InnerSolveError(const std::string& message, Eigen::VectorXd best, double residual)
        : Error(message), best_(std::move(best)), residual_(residual) {}

    const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::VectorXd best_;
    double residual_;
};

/// An inexact step could not be kept inside the summable inexactness budget.
class BudgetError : public Error {
public:
    BudgetError(std::size_t k, double achieved, double allowed)
        : Error(describe(k, achieved, allowed)), k_(k), achieved_(achieved), allowed_(allowed) {}

    std::size_t iteration() const noexcept { return k_; }
    double achieved() const noexcept { return achieved_; }
    double allowed() const noexcept { return allowed_; }

private:
    static std::string describe(std::size_t k, double achieved, double allowed) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "inexactness budget exceeded at k=%zu: delta=%.6g > budget=%.6g",
                      k, achieved, allowed);
        return buf;
    }

    std::size_t k_;
    double achieved_;
    double allowed_;
};

}  // namespace mopp
