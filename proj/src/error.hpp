#pragma once

#include <stdexcept>
#include <string>

namespace dlpkit {

// Error categories mirror the dlpk_status codes of the C API.
enum class Errc {
  invalid_argument,
  parse,
  io,
  inconsistent,
  aborted,
  not_found,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

inline void require(bool ok, Errc code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace dlpkit
