#pragma once

#include <stdexcept>
#include <string>

namespace subprod {

// Library error with a stable machine-readable code; the CLI maps these to
// JSON diagnostics and exit status 2.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace subprod
