#include "polykinetic/errors.hpp"

namespace polykinetic {

const char* error_kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Config: return "config";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Model: return "model";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::State: return "state";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Negativity: return "negativity";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Audit: return "audit";
    case ErrorKind::InsufficientSignal: return "insufficient-signal";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

} // namespace polykinetic
