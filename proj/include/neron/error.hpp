#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace neron {

/// Input data violates a documented precondition (bad fibre data, unsupported
/// level, inconsistent complex, ...). The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fibre or modulus data failed validation; carries every violation found.
class ValidationError : public InvalidInput {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : InvalidInput(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "validation failed";
    for (const auto& s : v) out += "; " + s;
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace neron
