#pragma once

#include <stdexcept>
#include <string>

namespace qorder {

/// Exception carrying a short machine-readable code ("dim-mismatch",
/// "not-orthogonal", ...) alongside a human-readable message.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace qorder
