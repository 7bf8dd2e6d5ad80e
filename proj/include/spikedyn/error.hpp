// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace spikedyn {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  overflow = 3,
  divergence = 4,
  singular = 5,
  numerical = 6,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorCode::invalid_argument, msg);
}

}  // namespace spikedyn
