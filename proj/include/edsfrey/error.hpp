#pragma once

#include <stdexcept>
#include <string>

namespace edsfrey {

enum class ErrorCode {
    invalid_input,
    not_on_curve,
    singular_model,
    torsion_point,
    precondition,
    budget_exceeded,
    undecided,
    unsafe_prime,
    degenerate,
    verification_failed,
    cache_corrupt,
    config,
    io,
};

const char* to_string(ErrorCode code);

// Exit status taxonomy shared by every CLI subcommand.
//   0 success, 1 verification failure, 2 input error, 3 budget/undecided
int exit_status(ErrorCode code);

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

}  // namespace edsfrey
