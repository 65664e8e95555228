#pragma once

#include <string>

#include "gobrowse/simenv/observation.hpp"

namespace gobrowse::agent {

// Assembles the web-agent prompt: instruction preamble, goal, action space
// with worked examples, current page, last error, history, and the output
// format contract. Golden copies live under docs/prompts/.
std::string build_prompt(const simenv::Observation& obs, const std::string& action_space_doc);

// Exploration goals handed to the proposer agents.
const std::string& nav_explorer_goal();
const std::string& page_explorer_goal();

}  // namespace gobrowse::agent
