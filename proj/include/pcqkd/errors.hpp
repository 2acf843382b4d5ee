#pragma once

#include <stdexcept>
#include <string>

namespace pcqkd {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computed object violates a physical or structural invariant.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fock-space truncation lost more norm than allowed.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, int suggested_cutoff)
      : std::runtime_error(what), suggested_cutoff_(suggested_cutoff) {}
  int suggested_cutoff() const { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

/// No distance reaches the requested key rate, not even L = 0.
class NoDistanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied configuration. `field()` names the offending key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace pcqkd
