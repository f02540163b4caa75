#pragma once

#include <stdexcept>
#include <string>

namespace rydgan {

enum class ErrorKind {
    config,    // invalid configuration or parameter values
    argument,  // bad call arguments (empty batches, zero shots, ...)
    domain,    // evaluation outside a function's domain
    state,     // quantum state invariants violated
    shape,     // dimension mismatch
    data,      // dataset/file content errors
    io,        // filesystem failures
    numeric,   // non-finite values, failed decompositions
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

// CLI exit codes: 2 config/validation, 3 data/format, 4 numeric.
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::data:
        case ErrorKind::io:
            return 3;
        case ErrorKind::numeric:
        case ErrorKind::state:
            return 4;
        default:
            return 2;
    }
}

}  // namespace rydgan
