#pragma once

#include <map>
#include <string>

#include "polykinetic/discretization.hpp"

namespace polykinetic {

// "PKCHKPT1", u64 header length, key=value header lines, then u and psi as little-endian float64.
struct Checkpoint {
    std::map<std::string, std::string> header;
    State state;
};

void write_checkpoint(const std::string& path, const State& state, const std::string& fingerprint,
                      const Resolution& res, const std::map<std::string, std::string>& extra = {});
Checkpoint read_checkpoint(const std::string& path);

} // namespace polykinetic
