#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cohere {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class NormalizationError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class UnknownStateError : public Error {
public:
  using Error::Error;
};

class OrthogonalityError : public Error {
public:
  using Error::Error;
};

/// Kraus set whose operators do not sum to the identity.
class CompletenessError : public Error {
public:
  using Error::Error;
};

/// Random incoherent channel sampler ran out of retries.
class CompletionError : public Error {
public:
  using Error::Error;
};

class NotMCSError : public Error {
public:
  using Error::Error;
};

class NegativeRadicandError : public Error {
public:
  NegativeRadicandError(const std::string& what, double radicand)
      : Error(what), radicand_(radicand) {}
  double radicand() const { return radicand_; }

private:
  double radicand_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// One failed density-matrix invariant, with its measured magnitude.
struct Violation {
  enum class Kind { NonFinite, Hermiticity, Trace, Positivity };
  Kind kind;
  double magnitude;
};

std::string to_string(Violation::Kind kind);

/// Base for all density-matrix validation failures. Carries every violated
/// invariant, not only the one that selected the concrete exception type.
class ValidationError : public Error {
public:
  ValidationError(const std::string& what, std::vector<Violation> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

class HermiticityError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class TraceError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class PositivityError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class NonFiniteError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

}  // namespace cohere
