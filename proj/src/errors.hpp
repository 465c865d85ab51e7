// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsnsim {

/// Invalid configuration. Carries every violation found, one message each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::string message)
      : std::runtime_error(message), violations_{std::move(message)} {}
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "\n";
      out += s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// Scenario text could not be parsed.
class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Broken simulator invariant (time regression, overlapping reception, ...).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tsnsim
