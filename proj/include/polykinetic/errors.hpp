#pragma once

#include <stdexcept>
#include <string>

namespace polykinetic {

enum class ErrorKind {
    InvalidParameter,
    Domain,
    Pole,
    Config,
    Resolution,
    Model,
    Accuracy,
    State,
    Precondition,
    Negativity,
    Solver,
    Audit,
    InsufficientSignal,
    Io,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

} // namespace polykinetic
