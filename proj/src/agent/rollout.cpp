#include "gobrowse/agent/rollout.hpp"

#include <utility>

namespace gobrowse::agent {

core::Trajectory rollout(AgentPolicy& policy, simenv::Environment& env, const RolloutConfig& cfg,
                         simenv::Observation* final_observation) {
  core::Trajectory traj;
  traj.start_url = cfg.start_url;
  traj.sampler = policy.name();

  simenv::Observation obs;
  if (final_observation) *final_observation = {};
  try {
    obs = env.reset(cfg.start_url, cfg.goal);
  } catch (const Error&) {
    traj.terminated_by = core::TerminationReason::environment_error;
    return traj;
  }
  if (final_observation) *final_observation = obs;

  for (int i = 0; i < cfg.horizon; ++i) {
    core::StepRecord record;
    record.index = i;
    record.observation = obs;

    ParsedStep parsed;
    try {
      parsed = policy.act(obs);
    } catch (const ActionParseError& err) {
      // Malformed model output consumes a step: a noop enters the record and
      // the next observation carries the parse error.
      record.action = simenv::NoopAction{};
      record.action_error = err.what();
      obs = env.note_unexecuted(record.action, err.what());
      if (final_observation) *final_observation = obs;
      record.url_after = env.current_url();
      traj.steps.push_back(std::move(record));
      continue;
    }

    record.thought = parsed.thought;
    record.action = parsed.action;

    simenv::StepResult result;
    try {
      result = env.step(parsed.action);
    } catch (const simenv::EnvironmentError& err) {
      record.action_error = err.what();
      record.url_after = env.current_url();
      traj.steps.push_back(std::move(record));
      traj.terminated_by = core::TerminationReason::environment_error;
      traj.final_fields = env.state_snapshot();
      return traj;
    }

    record.action_error = result.observation.last_action_error;
    record.url_after = env.current_url();
    if (record.url_after != result.observation.url)
      throw Error("rollout invariant violated: environment url drifted from its observation");
    traj.steps.push_back(std::move(record));
    obs = result.observation;
    if (final_observation) *final_observation = obs;

    if (result.terminated) {
      traj.terminated_by = core::TerminationReason::terminal_action;
      traj.final_fields = env.state_snapshot();
      return traj;
    }
  }

  traj.terminated_by = core::TerminationReason::horizon;
  traj.final_fields = env.state_snapshot();
  return traj;
}

}  // namespace gobrowse::agent
