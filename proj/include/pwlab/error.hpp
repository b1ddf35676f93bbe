#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwlab {

enum class Errc {
    NotPrime,
    OrderMismatch,
    BadGenerator,
    InvalidElement,
    OutOfRange,
    SubgroupFail,
    TagMismatch,
    MissingMessage,
    ConfigError,
    IoError,
};

std::string_view errc_name(Errc c);

/// Exception carrying a typed error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what_arg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what_arg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace pwlab
