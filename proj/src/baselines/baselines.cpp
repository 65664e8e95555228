#include "gobrowse/baselines/baselines.hpp"

#include <iostream>
#include <utility>

#include "gobrowse/agent/prompts.hpp"
#include "gobrowse/agent/rollout.hpp"
#include "gobrowse/core/hash.hpp"
#include "gobrowse/explorer/parallel.hpp"
#include "gobrowse/simenv/actions.hpp"
#include "nlohmann/json.hpp"

namespace gobrowse::baselines {

namespace {

void log_warning(const std::string& message) { std::cerr << "[baselines] " << message << "\n"; }

explorer::Site wire(const explorer::Site& site) {
  if (!site.spec) throw Error("site has no spec");
  if (site.make_env) return site;
  return explorer::make_site(site.spec);
}

// Environment state at the end of a labeled prefix, rebuilt by replaying the
// recorded actions. Steps that errored during the episode error the same way
// here; a mid-replay environment failure keeps whatever state was reached.
struct PrefixEnd {
  simenv::Observation final_obs;
  std::map<std::string, std::string> final_fields;
};

PrefixEnd replay_prefix(const explorer::Site& site, const core::Trajectory& episode,
                        int end_step) {
  PrefixEnd out;
  auto env = site.make_env();
  const auto& goal = episode.steps.empty() ? std::string() : episode.steps[0].observation.goal;
  out.final_obs = env->reset(episode.start_url, goal);
  for (int i = 0; i <= end_step; ++i) {
    try {
      auto result = env->step(episode.steps[i].action);
      out.final_obs = std::move(result.observation);
      if (result.terminated) break;
    } catch (const Error&) {
      break;
    }
  }
  out.final_fields = env->state_snapshot();
  return out;
}

}  // namespace

ScriptedLabeler::ScriptedLabeler(std::map<std::string, std::string> goal_by_url)
    : goal_by_url_(std::move(goal_by_url)) {}

std::vector<Label> ScriptedLabeler::label(const core::Trajectory& trajectory) {
  std::vector<Label> labels;
  std::set<std::string> fired;
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    auto key = core::without_query(trajectory.steps[i].url_after).render();
    auto it = goal_by_url_.find(key);
    if (it == goal_by_url_.end() || !fired.insert(key).second) continue;
    labels.push_back({it->second, static_cast<int>(i)});
  }
  return labels;
}

std::string build_labeler_prompt(const core::Trajectory& trajectory, int max_labels) {
  std::string prompt =
      "You are reviewing a recorded web browsing session and labeling it with the tasks it "
      "accomplished.\n\n# Session\nStart URL: " +
      trajectory.start_url.render() + "\n";
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const auto& step = trajectory.steps[i];
    prompt += "Step " + std::to_string(i) + ": " + simenv::render_action(step.action) + " -> " +
              step.url_after.render();
    if (step.action_error) prompt += " (failed: " + *step.action_error + ")";
    prompt += "\n";
  }
  prompt +=
      "\n# Instructions\nList the concrete tasks this session demonstrably completed, each with "
      "the zero-based index of the step that completed it. Phrase every task as a standalone "
      "instruction a user could have given before the session started. Reply with a JSON object "
      "of the form {\"tasks\": [{\"task\": \"<instruction>\", \"end_step\": <step index>}]} and "
      "nothing else. List at most " +
      std::to_string(max_labels) +
      " tasks. If the session completed nothing, reply with {\"tasks\": []}.\n";
  return prompt;
}

LlmLabeler::LlmLabeler(std::shared_ptr<llm::ChatProvider> provider, LlmLabelerConfig config)
    : provider_(std::move(provider)), config_(std::move(config)) {}

std::vector<Label> LlmLabeler::label(const core::Trajectory& trajectory) {
  if (trajectory.steps.empty()) return {};
  llm::ChatRequest request;
  request.messages.push_back(
      {llm::Role::user, build_labeler_prompt(trajectory, config_.max_labels), std::nullopt});
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  request.model_id = config_.model_id;
  auto reply = provider_->complete(request);

  auto open = reply.find('{');
  auto close = reply.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(reply.substr(open, close - open + 1));
  } catch (const nlohmann::json::exception&) {
    return {};
  }
  if (!doc.is_object() || !doc.contains("tasks") || !doc["tasks"].is_array()) return {};

  std::vector<Label> labels;
  for (const auto& entry : doc["tasks"]) {
    if (static_cast<int>(labels.size()) >= config_.max_labels) break;
    if (!entry.is_object()) continue;
    auto goal = entry.value("task", std::string());
    int end_step = entry.value("end_step", -1);
    if (goal.empty() || end_step < 0 || end_step >= static_cast<int>(trajectory.steps.size()))
      continue;
    labels.push_back({std::move(goal), end_step});
  }
  return labels;
}

const std::string& default_exploration_goal() {
  static const std::string goal =
      "You are a visitor browsing this website out of curiosity. Explore the site: follow links "
      "that look interesting, try the features you find, and get a feel for what a user can "
      "accomplish here. You have no single concrete task; interact naturally and cover ground.";
  return goal;
}

InteractionFirstResult run_interaction_first(const explorer::Site& site,
                                             const agent::PolicyFactory& policy, Labeler& labeler,
                                             const InteractionFirstConfig& cfg,
                                             datastore::Dataset& dataset) {
  auto wired = wire(site);
  auto run_cfg = cfg;
  if (run_cfg.deterministic) run_cfg.workers = 1;
  if (run_cfg.n_episodes < 0) run_cfg.n_episodes = 0;
  const auto root = core::without_query(wired.spec->root_url);

  struct Episode {
    core::Trajectory trajectory;
    simenv::Observation final_obs;
  };
  auto episodes =
      explorer::ordered_parallel(run_cfg.n_episodes, run_cfg.workers, [&](int i) -> Episode {
        agent::PolicyContext ctx;
        ctx.task.goal = run_cfg.exploration_goal;
        ctx.task.source_url = root;
        ctx.start_url = root;
        ctx.sample_index = i;
        ctx.seed = core::derive_seed(run_cfg.seed, {"interaction_first", std::to_string(i)});
        ctx.role = "interaction_explorer";
        Episode episode;
        try {
          auto instance = policy(ctx);
          auto env = wired.make_env();
          agent::RolloutConfig rcfg{run_cfg.horizon, run_cfg.exploration_goal, root, ctx.seed};
          episode.trajectory = agent::rollout(*instance, *env, rcfg, &episode.final_obs);
        } catch (const Error& err) {
          log_warning("exploration episode " + std::to_string(i) + " failed: " + err.what());
          episode.trajectory = explorer::failed_rollout_stub(root, "interaction_explorer");
        }
        return episode;
      });

  InteractionFirstResult result;
  result.episodes = run_cfg.n_episodes;
  reward::GroundTruthReward ground_truth(wired.spec);
  for (const auto& episode : episodes) {
    dataset.append_explorer_rollout(episode.trajectory, "interaction_explorer");
    std::vector<Label> labels;
    try {
      labels = labeler.label(episode.trajectory);
    } catch (const Error& err) {
      log_warning(std::string("labeling failed: ") + err.what());
      continue;
    }
    for (const auto& label : labels) {
      if (label.goal.empty()) continue;
      if (label.end_step < 0 ||
          label.end_step >= static_cast<int>(episode.trajectory.steps.size()))
        continue;

      auto [kind, goal] = explorer::split_kind_tag(label.goal);
      core::Task task;
      task.goal = goal;
      task.kind = kind;
      task.source_url = root;
      task.proposer = "labeler";

      core::Trajectory prefix;
      prefix.start_url = episode.trajectory.start_url;
      prefix.sampler = episode.trajectory.sampler;
      prefix.prefixed = false;
      prefix.steps.assign(episode.trajectory.steps.begin(),
                          episode.trajectory.steps.begin() + label.end_step + 1);
      prefix.terminated_by =
          label.end_step + 1 == static_cast<int>(episode.trajectory.steps.size())
              ? episode.trajectory.terminated_by
              : core::TerminationReason::horizon;
      auto end = replay_prefix(wired, episode.trajectory, label.end_step);
      prefix.final_fields = std::move(end.final_fields);

      // The labeler claims success; claims the site can check are re-scored.
      int score = 1;
      if (wired.spec->find_ground_truth(goal) || simenv::parse_nav_goal(goal))
        score = ground_truth.evaluate(goal, prefix, end.final_obs);
      prefix.reward = score;

      auto task_id = dataset.append_task(task, score == 1);
      prefix.task_id = task_id;
      dataset.append_trajectory(prefix);
      ++result.labels;
    }
  }
  return result;
}

InstructionFirstResult run_instruction_first(const explorer::Site& site,
                                             const agent::PolicyFactory& proposer,
                                             const agent::PolicyFactory& solver,
                                             reward::RewardModel& reward_model,
                                             const InstructionFirstConfig& cfg,
                                             datastore::Dataset& dataset) {
  auto wired = wire(site);
  auto run_cfg = cfg;
  if (run_cfg.deterministic) run_cfg.workers = 1;
  const auto root = core::without_query(wired.spec->root_url);

  agent::PolicyContext proposer_ctx;
  proposer_ctx.start_url = root;
  proposer_ctx.role = "page_explorer";
  proposer_ctx.seed = core::derive_seed(run_cfg.seed, {"instruction_first", "proposer"});
  core::Trajectory proposer_rollout;
  try {
    auto instance = proposer(proposer_ctx);
    auto env = wired.make_env();
    agent::RolloutConfig rcfg{run_cfg.proposer_steps, agent::page_explorer_goal(), root,
                              proposer_ctx.seed};
    proposer_rollout = agent::rollout(*instance, *env, rcfg);
  } catch (const Error& err) {
    log_warning(std::string("proposer episode failed: ") + err.what());
    proposer_rollout = explorer::failed_rollout_stub(root, "page_explorer");
  }
  dataset.append_explorer_rollout(proposer_rollout, "page_explorer");
  auto tasks = explorer::harvest_tasks(proposer_rollout, root, "page_explorer", false);

  auto attempts = explorer::ordered_parallel(
      static_cast<int>(tasks.size()), run_cfg.workers, [&](int k) -> core::Trajectory {
        const auto& task = tasks[k];
        agent::PolicyContext ctx;
        ctx.task = task;
        ctx.start_url = root;
        ctx.seed = core::derive_seed(run_cfg.seed, {"instruction_first", "solver", task.goal});
        ctx.role = "solver";
        core::Trajectory trajectory = explorer::failed_rollout_stub(root, "solver");
        trajectory.reward = 0;
        try {
          auto instance = solver(ctx);
          auto env = wired.make_env();
          simenv::Observation final_obs;
          agent::RolloutConfig rcfg{run_cfg.horizon, task.goal, root, ctx.seed};
          trajectory = agent::rollout(*instance, *env, rcfg, &final_obs);
          trajectory.reward = reward_model.evaluate(task.goal, trajectory, final_obs);
        } catch (const Error& err) {
          log_warning("attempt failed for '" + task.goal + "': " + err.what());
          trajectory.reward = 0;
        }
        return trajectory;
      });

  InstructionFirstResult result;
  result.proposed = static_cast<int>(tasks.size());
  for (std::size_t k = 0; k < attempts.size(); ++k) {
    if (attempts[k].reward != 1) continue;
    auto task_id = dataset.append_task(tasks[k], true);
    attempts[k].task_id = task_id;
    dataset.append_trajectory(attempts[k]);
    ++result.kept;
  }
  return result;
}

}  // namespace gobrowse::baselines
