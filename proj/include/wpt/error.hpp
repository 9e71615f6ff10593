#pragma once

#include <stdexcept>
#include <string>

namespace wpt {

/// Base of every error the library throws. `kind()` is a short stable tag
/// used by the command-line front end as a machine-parsable prefix.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class InvalidGeometry : public Error {
public:
  explicit InvalidGeometry(const std::string& what) : Error("invalid-geometry", what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& what) : Error("singularity", what) {}
};

class UnphysicalCoupling : public Error {
public:
  explicit UnphysicalCoupling(const std::string& what) : Error("unphysical-coupling", what) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

class UnreachableTarget : public Error {
public:
  UnreachableTarget(const std::string& what, double closest, int closest_turns)
      : Error("unreachable-target", what), closest_(closest), closest_turns_(closest_turns) {}

  /// Closest inductance the search could reach (H).
  double closest() const noexcept { return closest_; }
  int closest_turns() const noexcept { return closest_turns_; }

private:
  double closest_;
  int closest_turns_;
};

namespace detail {

template <typename Scalar>
inline void require_positive(Scalar value, const char* name) {
  if (!(value > Scalar(0))) {
    throw DomainError(std::string(name) + " must be positive");
  }
}

}  // namespace detail
}  // namespace wpt
