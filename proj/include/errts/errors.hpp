#pragma once

#include <stdexcept>
#include <string>

namespace errts {

/// Malformed, inconsistent, or insufficient input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model cannot be fitted or its parameters violate a required bound.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system is too ill-conditioned to solve reliably.
class ConditioningError : public ModelError {
public:
    ConditioningError(const std::string& what, double condition)
        : ModelError(what), condition_(condition) {}

    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace errts
