#pragma once

#include <cstdint>
#include <string>

#include "gobrowse/agent/policy.hpp"
#include "gobrowse/simenv/environment.hpp"

namespace gobrowse::agent {

struct RolloutConfig {
  int horizon = 10;
  std::string goal;
  core::CanonicalUrl start_url;
  std::uint64_t seed = 0;
};

// Runs one episode: reset to start_url with the goal, then act/step until a
// terminal action, the horizon, or an environment fault. Unparseable policy
// output consumes a step: it is recorded as a noop whose action_error carries
// the parse message, and the next observation carries the same error. The
// returned trajectory has reward unset; task_id/prefixed are left for the
// caller, sampler is taken from the policy. When final_observation is given
// it receives the last observation the environment produced (what a reward
// model should judge); empty when reset itself failed.
core::Trajectory rollout(AgentPolicy& policy, simenv::Environment& env, const RolloutConfig& cfg,
                         simenv::Observation* final_observation = nullptr);

}  // namespace gobrowse::agent
