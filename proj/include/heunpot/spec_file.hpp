#pragma once

#include <string>

#include "heunpot/potential.hpp"

namespace heunpot {

// JSON object with keys: triad (3 doubled integers), a (3 reals),
// v (5 reals), sigma, x0, hbar, mass. sigma/x0/hbar/mass are optional with
// defaults 1/0/1/1; unknown keys are ignored. Structural problems (bad JSON,
// missing or non-numeric required entries, wrong lengths) raise BadSpecFile;
// domain violations surface later via PotentialSpec::validate().
PotentialSpec parse_spec_json(const std::string& text);

PotentialSpec load_spec(const std::string& path); // BadSpecFile if unreadable

std::string spec_to_json(const PotentialSpec& spec);

} // namespace heunpot
