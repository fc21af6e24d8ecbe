#pragma once

#include <stdexcept>
#include <string>

namespace probranch {

// Base for all toolkit errors; everything carries a plain message.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A grid was passed that does not belong to the lexical entry.
struct InvalidGridError : Error {
  using Error::Error;
};

// Span containment/adjacency violated.
struct SpanError : Error {
  using Error::Error;
};

// Theta criterion violated: no role left to discharge, or a marker with
// undischarged roles where completeness is required.
struct CriterionViolationError : Error {
  using Error::Error;
};

// A role's selected category does not match the argument's category.
struct SelectionError : Error {
  using Error::Error;
};

// An argument already bears a theta role.
struct DoubleRoleError : Error {
  using Error::Error;
};

// Estimation over zero observations.
struct EmptyCorpusError : Error {
  using Error::Error;
};

// A parse uses a schema with zero estimated probability.
struct UnseenSchemaError : Error {
  using Error::Error;
};

// A head is in the theta table but the selected grid was never observed.
struct UnseenGridError : Error {
  using Error::Error;
};

// A token has no lexical entry.
struct OovError : Error {
  std::string token;
  explicit OovError(std::string tok)
      : Error("out of vocabulary: " + tok), token(std::move(tok)) {}
};

struct EmptyInputError : Error {
  using Error::Error;
};

// A corpus branch whose marks fit none of the five schemata.
struct UnclassifiableBranchError : Error {
  using Error::Error;
};

// The per-sentence completed-marker cap was exceeded.
struct CapExceededError : Error {
  using Error::Error;
};

// File-format error; line is 1-based, 0 when not line-addressable.
struct LoadError : Error {
  int line;
  LoadError(int line_number, const std::string& message)
      : Error(line_number > 0
                  ? "line " + std::to_string(line_number) + ": " + message
                  : message),
        line(line_number) {}
};

}  // namespace probranch
