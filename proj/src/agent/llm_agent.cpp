#include "gobrowse/agent/llm_agent.hpp"

#include <utility>

#include "gobrowse/agent/prompts.hpp"

namespace gobrowse::agent {

LlmAgent::LlmAgent(std::shared_ptr<llm::ChatProvider> provider, LlmAgentConfig config)
    : provider_(std::move(provider)),
      config_(std::move(config)),
      action_space_doc_(simenv::action_space_doc(config_.with_extension)) {}

ParsedStep LlmAgent::act(const simenv::Observation& obs) {
  llm::ChatRequest request;
  request.messages.push_back({llm::Role::user, build_prompt(obs, action_space_doc_), std::nullopt});
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  request.model_id = config_.model_id;
  return parse_action(provider_->complete(request));
}

}  // namespace gobrowse::agent
