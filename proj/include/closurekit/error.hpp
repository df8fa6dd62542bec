#ifndef CLOSUREKIT_ERROR_HPP_
#define CLOSUREKIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace closurekit {

enum class ErrorKind {
  degree_mismatch,
  order_cap_exceeded,
  not_an_orbit,
  not_a_subgroup,
  not_transitive,
  not_a_block_system,
  not_normal_block_system,
  maximum_not_unique,
  not_invariant,
  degree_too_large,
  not_regular_cyclic,
  identity_in_connection_set,
  non_unit_element,
  not_double_coset_closed,
  intersects_subgroup,
  size_too_large,
  not_cayley_object,
  invariant_violation,
  not_materialized,
  invalid_argument,
  parse_error,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::degree_mismatch: return "DegreeMismatch";
    case ErrorKind::order_cap_exceeded: return "OrderCapExceeded";
    case ErrorKind::not_an_orbit: return "NotAnOrbit";
    case ErrorKind::not_a_subgroup: return "NotASubgroup";
    case ErrorKind::not_transitive: return "NotTransitive";
    case ErrorKind::not_a_block_system: return "NotABlockSystem";
    case ErrorKind::not_normal_block_system: return "NotNormalBlockSystem";
    case ErrorKind::maximum_not_unique: return "MaximumNotUnique";
    case ErrorKind::not_invariant: return "NotInvariant";
    case ErrorKind::degree_too_large: return "DegreeTooLarge";
    case ErrorKind::not_regular_cyclic: return "NotRegularCyclic";
    case ErrorKind::identity_in_connection_set: return "IdentityInConnectionSet";
    case ErrorKind::non_unit_element: return "NonUnitElement";
    case ErrorKind::not_double_coset_closed: return "NotDoubleCosetClosed";
    case ErrorKind::intersects_subgroup: return "IntersectsSubgroup";
    case ErrorKind::size_too_large: return "SizeTooLarge";
    case ErrorKind::not_cayley_object: return "NotCayleyObject";
    case ErrorKind::invariant_violation: return "InvariantViolation";
    case ErrorKind::not_materialized: return "NotMaterialized";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace closurekit

#endif  // CLOSUREKIT_ERROR_HPP_
