#ifndef EKD_ERROR_HPP
#define EKD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ekd {

// Error categories; values match the process exit codes of the CLI and the
// status codes of the C API.
enum class ErrorCode {
    Io = 1,          // file I/O, malformed streams, bad magic
    Degenerate = 2,  // encoder cannot produce a usable mask
    Solver = 3,      // iterative solver did not converge / factorization failed
    Invalid = 4,     // contract violation: bad dimensions, bad parameters
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace ekd

#endif
