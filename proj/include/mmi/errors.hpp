#pragma once

#include <stdexcept>
#include <string>

namespace mmi {

// Exit codes used by the command-line front end.
enum class ErrorCode : int { Validation = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string kind, const std::string& message);
    ErrorCode code() const noexcept { return code_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorCode code_;
    std::string kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message,
                             std::string kind = "validation");
};

// Observation series lacks a value the estimate needs.
class MissingObservationError : public ValidationError {
public:
    MissingObservationError(const std::string& message, long time);
    long time() const noexcept { return time_; }

private:
    long time_;
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message,
                            std::string kind = "numerical");
};

class PoleError : public NumericalError {
public:
    PoleError(const std::string& message, double lambda);
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& message, double residual);
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class MinimalityError : public NumericalError {
public:
    explicit MinimalityError(const std::string& message);
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message);
};

} // namespace mmi
