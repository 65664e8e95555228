#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gobrowse/core/url.hpp"

namespace gobrowse::simenv {

// What the agent sees at one step. axtree is a flattened accessibility-tree
// rendering of the current page; action_history holds the rendered form of
// every action taken so far this episode.
struct Observation {
  std::string goal;
  std::string axtree;
  std::vector<std::string> action_history;
  std::optional<std::string> last_action_error;
  core::CanonicalUrl url;
  // Alternate page representations; reserved, never populated by the
  // simulated environment.
  std::optional<std::string> html;
  std::optional<std::string> screenshot_ref;

  bool operator==(const Observation&) const = default;
};

}  // namespace gobrowse::simenv
