#pragma once

#include <string>

#include "gobrowse/simenv/actions.hpp"

namespace gobrowse::agent {

using simenv::ActionParseError;

struct ParsedStep {
  std::string thought;
  simenv::Action action;
};

// Extracts the first well-formed JSON object from model output (prose and
// code fences around it are tolerated) and parses its "action" field as a
// function-call expression. Throws ActionParseError when no document is
// found, when thought/action are missing or not strings, or when the call
// itself is malformed.
ParsedStep parse_action(const std::string& model_output);

// Serialized {"thought": ..., "action": ...} document, the exact inverse of
// parse_action for well-formed steps. Used for SFT targets.
std::string render_step_document(const ParsedStep& step);

}  // namespace gobrowse::agent
