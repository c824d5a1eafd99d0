#pragma once

#include <stdexcept>
#include <string>

namespace interdiv {

// Error categories map onto CLI exit statuses: config 2, data 3, network 4.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All-zero affinity vector; the publication has no composition and must be skipped.
class EmptyProfileError : public DataError {
 public:
  EmptyProfileError() : DataError("empty profile: all affinity scores are zero") {}
};

class UndefinedDistanceError : public DataError {
 public:
  UndefinedDistanceError() : DataError("undefined distance: both membership sets are empty") {}
};

class InvalidDiversityArgument : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class RangeError : public DataError {
 public:
  using DataError::DataError;
};

class InconsistentRowError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateFitError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyRangeError : public ConfigError {
 public:
  EmptyRangeError() : ConfigError("empty range: first year is after last year") {}
};

class InvalidThresholdError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class FetchError : public NetworkError {
 public:
  FetchError(const std::string& what, int last_status) : NetworkError(what), last_status_(last_status) {}

  [[nodiscard]] int last_status() const noexcept { return last_status_; }

 private:
  int last_status_;
};

class PayloadError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

}  // namespace interdiv
