#pragma once

#include <stdexcept>
#include <string>

namespace ideaflow {

// Non-finite values or otherwise unusable input.
struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lengths or shapes of related containers disagree.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Duplicate token where tokens must be unique.
struct UniquenessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regressor has no variance; the pair cannot be fit.
struct DegenerateRegressorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DTW band excludes every path between the endpoints.
struct InfeasibleBandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A tunable is out of its allowed range.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sub-tensor selection with an empty index set.
struct EmptySelectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Factorization requested on a tensor with no entries.
struct EmptyTensorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unparseable file content; message carries the line number when known.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A corpus yielded no documents for one of the groups.
struct EmptyGroupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ideaflow
