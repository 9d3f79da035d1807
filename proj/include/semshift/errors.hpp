#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace semshift {

// Base of every error the library raises. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Problems with the input data (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

class OutOfSpan : public DataError {
 public:
  OutOfSpan(long long timestamp)
      : DataError("document timestamp " + std::to_string(timestamp) +
                  " falls outside every slice"),
        timestamp_(timestamp) {}
  long long timestamp() const { return timestamp_; }

 private:
  long long timestamp_;
};

class EmptyVocabulary : public DataError {
 public:
  EmptyVocabulary() : DataError("empty vocabulary: no token passes the frequency threshold") {}
};

class InvalidAlpha : public ConfigError {
 public:
  explicit InvalidAlpha(double alpha)
      : ConfigError("smoothing constant alpha must be positive, got " + std::to_string(alpha)) {}
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateInput : public DataError {
 public:
  using DataError::DataError;
};

class InvalidScenario : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownWord : public DataError {
 public:
  explicit UnknownWord(std::vector<std::string> words)
      : DataError(make_message(words)), words_(std::move(words)) {}
  const std::vector<std::string>& words() const { return words_; }

 private:
  static std::string make_message(const std::vector<std::string>& words) {
    std::string msg = "unknown word";
    if (words.size() > 1) msg += "s";
    msg += ":";
    for (const auto& w : words) msg += " " + w;
    return msg;
  }
  std::vector<std::string> words_;
};

// Iterative numerics gave up (exit code 4).
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace semshift
