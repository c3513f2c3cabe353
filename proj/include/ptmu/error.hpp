#pragma once

#include <stdexcept>
#include <string>

namespace ptmu {

/// Failure raised by a numeric stage. `code` is a stable machine-readable
/// identifier ("on-singular-support", "insufficient-decay", ...).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

} // namespace ptmu
