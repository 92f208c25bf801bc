#pragma once

#include <stdexcept>
#include <string>

namespace midas {

// Base for everything thrown by the estimation pipeline, so callers can
// distinguish recoverable fit failures from programming errors.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Normal matrix of the profile criterion is numerically singular.
struct SingularDesignError : EstimationError {
  explicit SingularDesignError(const std::string& what, double condition = 0.0)
      : EstimationError(what), condition_number(condition) {}
  double condition_number;
};

// Corrected normal matrix X'X - n*Sigma_c is indefinite or singular; the ME
// variances are too large for this sample. Reported, never silently fixed.
struct CorrectionError : EstimationError {
  using EstimationError::EstimationError;
};

struct InsufficientHistoryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV ingestion problems carry a machine-readable kind plus the line number.
struct CsvError : std::runtime_error {
  CsvError(std::string kind_, const std::string& what, long line_ = -1)
      : std::runtime_error(what), kind(std::move(kind_)), line(line_) {}
  std::string kind;  // "missing-value", "ragged-subperiods", "parse", "io"
  long line;
};

}  // namespace midas
