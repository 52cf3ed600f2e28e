#pragma once

#include <stdexcept>
#include <string>

namespace unfold {

struct invalid_interval_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_geometry_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct factorization_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File ingestion problems carry a 1-based row/column location.
struct parse_error : std::runtime_error {
  parse_error(const std::string& what, long row, long col)
      : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ")"),
        row(row),
        col(col) {}
  long row;
  long col;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct empty_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_found_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct insufficient_samples_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct insufficient_chains_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct undefined_correlation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct fingerprint_mismatch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace unfold
