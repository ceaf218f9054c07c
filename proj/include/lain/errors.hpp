#ifndef LAIN_ERRORS_HPP_
#define LAIN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lain {

// Invalid configuration value. The message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Argument outside the domain of a physical model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Coincident positions where a distance must be nonzero.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violation of the presence, reachability or single-assignment rules.
class ConstraintError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class LinkUnavailableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AccountingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lain

#endif  // LAIN_ERRORS_HPP_
