#pragma once

#include <stdexcept>
#include <string>

namespace pa {

enum class ErrorKind {
    domain,          // invalid arguments or violated precondition
    parse,           // malformed input text
    nonconvergence,  // iteration hit its budget without meeting the Cauchy criterion
    io,              // file system failure
    internal,        // broken internal invariant
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise_domain(const std::string& message) {
    throw Error(ErrorKind::domain, message);
}

[[noreturn]] inline void raise_parse(const std::string& message) {
    throw Error(ErrorKind::parse, message);
}

}  // namespace pa
