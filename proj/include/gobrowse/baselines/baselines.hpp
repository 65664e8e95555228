#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gobrowse/agent/policy.hpp"
#include "gobrowse/datastore/dataset.hpp"
#include "gobrowse/explorer/explore.hpp"
#include "gobrowse/llm/client.hpp"
#include "gobrowse/reward/reward.hpp"

namespace gobrowse::baselines {

// A retrospective task claimed over the episode prefix ending at end_step.
struct Label {
  std::string goal;
  int end_step = 0;
};

class Labeler {
 public:
  virtual ~Labeler() = default;
  virtual std::vector<Label> label(const core::Trajectory& trajectory) = 0;
};

// Rule table keyed on query-stripped page URLs. Each rule fires at most once
// per trajectory, on the first step that lands on its page.
class ScriptedLabeler final : public Labeler {
 public:
  explicit ScriptedLabeler(std::map<std::string, std::string> goal_by_url);
  std::vector<Label> label(const core::Trajectory& trajectory) override;

 private:
  std::map<std::string, std::string> goal_by_url_;
};

struct LlmLabelerConfig {
  std::string model_id = "default";
  double temperature = 0.7;
  int max_tokens = 1024;
  int max_labels = 8;
};

// Prompts the model with the rendered episode and parses a JSON reply of the
// form {"tasks": [{"task": ..., "end_step": ...}]}. Unparseable replies and
// out-of-range or empty entries are dropped.
class LlmLabeler final : public Labeler {
 public:
  LlmLabeler(std::shared_ptr<llm::ChatProvider> provider, LlmLabelerConfig config = {});
  std::vector<Label> label(const core::Trajectory& trajectory) override;

 private:
  std::shared_ptr<llm::ChatProvider> provider_;
  LlmLabelerConfig config_;
};

std::string build_labeler_prompt(const core::Trajectory& trajectory, int max_labels);

const std::string& default_exploration_goal();

struct InteractionFirstConfig {
  int n_episodes = 1;
  int horizon = 10;
  std::string exploration_goal = default_exploration_goal();
  std::uint64_t seed = 0;
  int workers = 1;
  bool deterministic = false;
};

struct InteractionFirstResult {
  int episodes = 0;
  int labels = 0;  // labeled pairs persisted; equals the trajectory record count
};

// One exploration episode per iteration, labeled in retrospect. Every labeled
// (goal, prefix) pair is persisted; the reward is the labeler's claim of 1,
// except that goals the site can score (declared tasks and recognizable
// navigation goals) are re-scored against ground truth. Episode failures are
// logged and skipped.
InteractionFirstResult run_interaction_first(const explorer::Site& site,
                                             const agent::PolicyFactory& policy, Labeler& labeler,
                                             const InteractionFirstConfig& cfg,
                                             datastore::Dataset& dataset);

struct InstructionFirstConfig {
  int horizon = 10;
  int proposer_steps = 20;
  std::uint64_t seed = 0;
  int workers = 1;
  bool deterministic = false;
};

struct InstructionFirstResult {
  int proposed = 0;
  int kept = 0;  // reward-1 pairs persisted
};

// Tasks are proposed from the root page only, each attempted once from the
// root, and only reward-1 pairs enter the dataset.
InstructionFirstResult run_instruction_first(const explorer::Site& site,
                                             const agent::PolicyFactory& proposer,
                                             const agent::PolicyFactory& solver,
                                             reward::RewardModel& reward_model,
                                             const InstructionFirstConfig& cfg,
                                             datastore::Dataset& dataset);

}  // namespace gobrowse::baselines
