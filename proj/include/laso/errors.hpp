#pragma once

#include <stdexcept>
#include <string>

namespace laso {

// Bad flags, bad parameter combinations, unreadable config.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (corpus rows, model files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A task implementation broke its contract (e.g. expand() returned no
// children for a non-goal state, or a good non-goal state has no good
// successor). Distinct from search Failure, which is an empty queue.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace laso
