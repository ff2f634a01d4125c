#pragma once

#include <stdexcept>
#include <string>

namespace hinfraud {

enum class ErrorKind {
  io_error,
  parse_error,
  config_invalid,
  schema_mismatch,
  unknown_node_id,
  unknown_link,
  cardinality_violation,
  oracle_cap_exceeded,
  end_type_mismatch,
  single_class_training_set,
  non_finite_feature,
  shape_mismatch,
  length_mismatch,
  insufficient_span,
  degenerate_group,
  baseline_zero,
  empty_test_set,
};

constexpr const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io_error: return "IoError";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::config_invalid: return "ConfigInvalid";
    case ErrorKind::schema_mismatch: return "SchemaMismatch";
    case ErrorKind::unknown_node_id: return "UnknownNodeId";
    case ErrorKind::unknown_link: return "UnknownLink";
    case ErrorKind::cardinality_violation: return "CardinalityViolation";
    case ErrorKind::oracle_cap_exceeded: return "OracleCapExceeded";
    case ErrorKind::end_type_mismatch: return "EndTypeMismatch";
    case ErrorKind::single_class_training_set: return "SingleClassTrainingSet";
    case ErrorKind::non_finite_feature: return "NonFiniteFeature";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::length_mismatch: return "LengthMismatch";
    case ErrorKind::insufficient_span: return "InsufficientSpan";
    case ErrorKind::degenerate_group: return "DegenerateGroup";
    case ErrorKind::baseline_zero: return "BaselineZero";
    case ErrorKind::empty_test_set: return "EmptyTestSet";
  }
  return "Error";
}

// Data/validation errors map to CLI exit code 2, everything else to 3.
constexpr bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io_error:
    case ErrorKind::parse_error:
    case ErrorKind::config_invalid:
    case ErrorKind::schema_mismatch:
    case ErrorKind::unknown_node_id:
    case ErrorKind::unknown_link:
    case ErrorKind::cardinality_violation:
    case ErrorKind::single_class_training_set:
    case ErrorKind::non_finite_feature:
    case ErrorKind::length_mismatch:
    case ErrorKind::insufficient_span:
    case ErrorKind::degenerate_group:
    case ErrorKind::empty_test_set:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace hinfraud
