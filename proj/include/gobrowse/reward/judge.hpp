#pragma once

#include <memory>
#include <string>

#include "gobrowse/llm/client.hpp"
#include "gobrowse/reward/reward.hpp"

namespace gobrowse::reward {

// The judge prompt for one finished episode. The screenshot paragraph is
// omitted when the final observation has no screenshot. A verdict-format
// instruction is appended so replies can be mapped to {0,1} exactly; golden
// copy under docs/prompts/judge.txt.
std::string build_judge_prompt(const std::string& goal, const core::Trajectory& trajectory,
                               const simenv::Observation& final_obs);

// Maps a judge reply to {0,1}: a VERDICT line wins; otherwise a lone
// success/failure token decides; anything ambiguous scores 0.
int parse_verdict(const std::string& reply);

struct JudgeConfig {
  std::string model_id = "default";
  double temperature = 0.0;  // evaluation-style call
  int max_tokens = 512;
};

class JudgeReward final : public RewardModel {
 public:
  explicit JudgeReward(std::shared_ptr<llm::ChatProvider> provider, JudgeConfig config = {});

  int evaluate(const std::string& goal, const core::Trajectory& trajectory,
               const simenv::Observation& final_obs) override;

 private:
  std::shared_ptr<llm::ChatProvider> provider_;
  JudgeConfig config_;
};

}  // namespace gobrowse::reward
