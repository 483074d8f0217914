#pragma once

#include <stdexcept>
#include <string>

namespace wmstat {

// Problem size exceeds an enumeration or memory cap. The CLI maps this to
// exit code 1.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-range experiment configuration. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace wmstat
