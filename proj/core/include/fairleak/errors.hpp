// Copyright 2026 The Fairleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRLEAK_ERRORS_HPP
#define FAIRLEAK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairleak {

// Coarse classification used by the CLI to map exceptions to exit codes:
// kConfig -> 2, kData -> 3, kNumeric -> 4.
enum class ErrorKind { kConfig, kData, kNumeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message)
      : Error(ErrorKind::kConfig, std::move(message)) {}
};

class DataError : public Error {
 public:
  explicit DataError(std::string message)
      : Error(ErrorKind::kData, std::move(message)) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(std::string message)
      : Error(ErrorKind::kNumeric, std::move(message)) {}
};

// data module
struct MissingColumn : DataError {
  explicit MissingColumn(const std::string& name)
      : DataError("missing column: " + name) {}
};
struct NonBinaryValue : DataError {
  NonBinaryValue(std::size_t row, const std::string& col)
      : DataError("non-binary value at row " + std::to_string(row) +
                  ", column " + col) {}
};
struct EmptyDataset : DataError {
  EmptyDataset() : DataError("dataset has no rows") {}
};
struct UnparseableNumeric : DataError {
  UnparseableNumeric(std::size_t row, const std::string& col)
      : DataError("unparseable numeric at row " + std::to_string(row) +
                  ", column " + col) {}
};
struct ScoreOutOfRange : DataError {
  explicit ScoreOutOfRange(std::size_t row)
      : DataError("score outside [0,1] at row " + std::to_string(row)) {}
};
struct AmbiguousColumns : DataError {
  AmbiguousColumns()
      : DataError("both 'score' and 'hard' columns present") {}
};
struct DegenerateSplit : DataError {
  explicit DegenerateSplit(const std::string& what)
      : DataError("degenerate split: " + what) {}
};
struct InvalidSpec : ConfigError {
  explicit InvalidSpec(const std::string& what)
      : ConfigError("invalid synthesis spec: " + what) {}
};
struct CensoringViolation : DataError {
  explicit CensoringViolation(const std::string& col)
      : DataError("feature column duplicates the sensitive column: " + col) {}
};

// models module
struct DimensionMismatch : DataError {
  explicit DimensionMismatch(const std::string& what)
      : DataError("dimension mismatch: " + what) {}
};
struct NonFiniteLoss : NumericError {
  NonFiniteLoss() : NumericError("training loss became non-finite") {}
};

// metrics module
struct SingleClassActual : DataError {
  SingleClassActual() : DataError("actual labels contain a single class") {}
};
struct SingleClassSensitive : DataError {
  SingleClassSensitive()
      : DataError("sensitive attribute contains a single class") {}
};
struct EmptyCell : DataError {
  EmptyCell(int s, int y)
      : DataError("empty conditioning cell (S=" + std::to_string(s) +
                  ", Y=" + std::to_string(y) + ")") {}
};
struct OutOfRange : ConfigError {
  explicit OutOfRange(const std::string& what)
      : ConfigError("value out of range: " + what) {}
};
struct EmptyInput : DataError {
  explicit EmptyInput(const std::string& what)
      : DataError("empty input: " + what) {}
};

// fairness module
struct InvalidConfig : ConfigError {
  explicit InvalidConfig(const std::string& what)
      : ConfigError("invalid config: " + what) {}
};
struct DegenerateGroups : DataError {
  explicit DegenerateGroups(const std::string& what)
      : DataError("degenerate groups: " + what) {}
};

// oracle module
struct ZeroTotal : DataError {
  ZeroTotal() : DataError("count table sums to zero") {}
};
struct NotEqOdds : DataError {
  NotEqOdds() : DataError("joint distribution violates equalized odds") {}
};
struct DegenerateCell : DataError {
  explicit DegenerateCell(const std::string& what)
      : DataError("degenerate cell: " + what) {}
};

}  // namespace fairleak

#endif  // FAIRLEAK_ERRORS_HPP
