#pragma once

#include <stdexcept>
#include <string>

namespace reactwave {

// Error taxonomy mirrors the CLI exit codes: validation problems (bad config,
// precondition violations) exit 2, numerical failures (non-convergence,
// bookkeeping violations) exit 3, I/O failures exit 4.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class validation_error : public error {
 public:
  using error::error;
};

class numerical_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_io = 4;

}  // namespace reactwave
