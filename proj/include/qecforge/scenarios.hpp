#pragma once

#include "qecforge/environment.hpp"

#include <string>
#include <vector>

namespace qecforge {

// Built-in noise profiles. Parameterized iid channels accept a rate suffix,
// e.g. "iid_z:0.15" or "iid_xz:0.09"; the fixed names cover the published
// experiment channels.
NoiseProfile noise_profile_by_name(const std::string& name);
std::vector<std::string> noise_profile_names();

// Built-in experiment scenarios at full scale (ensembles of 60, 10^6-trial
// estimates). apply_desk_scale shrinks them to workstation size: 10 agents,
// 10x fewer estimator trials, 2000 trials with stage switches rescaled.
ScenarioConfig scenario_by_name(const std::string& name);
std::vector<std::string> scenario_names();
void apply_desk_scale(ScenarioConfig& cfg);

} // namespace qecforge
