#include "pwlab/error.hpp"

namespace pwlab {

std::string_view errc_name(Errc c) {
    switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::BadGenerator: return "BadGenerator";
    case Errc::InvalidElement: return "InvalidElement";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::SubgroupFail: return "SubgroupFail";
    case Errc::TagMismatch: return "TagMismatch";
    case Errc::MissingMessage: return "MissingMessage";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace pwlab
