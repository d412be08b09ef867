#include "mmi/errors.hpp"

#include <utility>

namespace mmi {

Error::Error(ErrorCode code, std::string kind, const std::string& message)
    : std::runtime_error(message), code_(code), kind_(std::move(kind)) {}

ValidationError::ValidationError(const std::string& message, std::string kind)
    : Error(ErrorCode::Validation, std::move(kind), message) {}

MissingObservationError::MissingObservationError(const std::string& message, long time)
    : ValidationError(message, "missing_observation"), time_(time) {}

NumericalError::NumericalError(const std::string& message, std::string kind)
    : Error(ErrorCode::Numerical, std::move(kind), message) {}

PoleError::PoleError(const std::string& message, double lambda)
    : NumericalError(message, "pole"), lambda_(lambda) {}

ConvergenceError::ConvergenceError(const std::string& message, double residual)
    : NumericalError(message, "convergence"), residual_(residual) {}

MinimalityError::MinimalityError(const std::string& message)
    : NumericalError(message, "minimality") {}

IoError::IoError(const std::string& message) : Error(ErrorCode::Io, "io", message) {}

} // namespace mmi
