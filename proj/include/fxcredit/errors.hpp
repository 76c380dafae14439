#pragma once

#include <stdexcept>
#include <string>

namespace fxcredit {

/// Input outside the mathematical domain of an operation (p not in (0,1), |rho| > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An inverse problem has no admissible solution for the given inputs.
class NoSolutionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Parameters are individually valid but do not define a model
/// (indefinite correlation matrix, nonpositive latent variance).
class ModelValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fxcredit
