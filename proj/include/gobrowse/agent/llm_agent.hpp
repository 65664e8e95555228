#pragma once

#include <memory>
#include <string>

#include "gobrowse/agent/policy.hpp"
#include "gobrowse/llm/client.hpp"

namespace gobrowse::agent {

struct LlmAgentConfig {
  std::string model_id = "default";
  double temperature = 0.7;
  int max_tokens = 1024;
  // Explorer roles get the add_tasks_to_dataset extension in their action
  // space documentation; solvers do not.
  bool with_extension = false;
  std::string sampler_name = "llm";
};

// ReAct policy: build_prompt over the observation, one chat completion, then
// parse_action on the reply. Stateless between steps; safe to share across
// workers when the provider is.
class LlmAgent final : public AgentPolicy {
 public:
  LlmAgent(std::shared_ptr<llm::ChatProvider> provider, LlmAgentConfig config);

  ParsedStep act(const simenv::Observation& obs) override;
  std::string name() const override { return config_.sampler_name; }

 private:
  std::shared_ptr<llm::ChatProvider> provider_;
  LlmAgentConfig config_;
  std::string action_space_doc_;
};

}  // namespace gobrowse::agent
