#pragma once

#include <string>
#include <vector>

#include "polykinetic/config.hpp"

namespace polykinetic {

std::vector<std::string> scenario_names();
// Preset configurations; throws a Config error for an unknown name.
RunConfig scenario_config(const std::string& name);

} // namespace polykinetic
