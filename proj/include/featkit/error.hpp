#pragma once

#include <stdexcept>
#include <string>

namespace featkit {

// Every failure the library reports deliberately goes through this type so
// callers can switch on the code instead of parsing messages.
enum class ErrorCode {
    invalid_parameter,
    out_of_bounds,
    degenerate_descriptor,
    incompatible_descriptor,
    insufficient_train_set,
    projection_error,
    io,
    dataset_not_found,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace featkit
