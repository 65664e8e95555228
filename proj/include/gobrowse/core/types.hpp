#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gobrowse/core/url.hpp"
#include "gobrowse/simenv/actions.hpp"
#include "gobrowse/simenv/observation.hpp"

namespace gobrowse::core {

enum class TaskKind { information_seeking, site_navigation, content_modification };

std::string to_string(TaskKind kind);
std::optional<TaskKind> task_kind_from_string(const std::string& name);

// A proposed goal with provenance: which page it was proposed on and by whom
// (nav_explorer | page_explorer | labeler | external).
struct Task {
  std::string id;
  std::string goal;
  TaskKind kind = TaskKind::information_seeking;
  CanonicalUrl source_url;
  std::string proposer;
};

enum class TerminationReason { terminal_action, horizon, environment_error };

std::string to_string(TerminationReason reason);
std::optional<TerminationReason> termination_reason_from_string(const std::string& name);

struct StepRecord {
  int index = 0;
  simenv::Observation observation;  // what the agent saw before acting
  std::string thought;
  simenv::Action action;
  std::optional<std::string> action_error;  // error produced by executing this action
  CanonicalUrl url_after;
};

struct Trajectory {
  std::string task_id;
  CanonicalUrl start_url;
  std::vector<StepRecord> steps;
  std::optional<int> reward;  // 0 or 1 once scored
  std::string sampler;        // model/agent identity that produced the steps
  bool prefixed = false;      // started at the task's source page, not the root
  TerminationReason terminated_by = TerminationReason::horizon;
  // Form-field state at termination, when the environment exposes it. Needed
  // to re-score state-predicate checkers after the episode is gone.
  std::map<std::string, std::string> final_fields;

  bool succeeded() const { return reward.has_value() && *reward == 1; }
  // Last send_msg_to_user payload, if the trajectory ends with one.
  std::optional<std::string> final_message() const;
  // URL after the last executed step (start URL for empty trajectories).
  CanonicalUrl final_url() const;
};

// Dedup key for task goals: case-folded, whitespace runs collapsed, trimmed.
std::string normalize_goal(const std::string& goal);

}  // namespace gobrowse::core
