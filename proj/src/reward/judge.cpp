#include "gobrowse/reward/judge.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace gobrowse::reward {

namespace {

constexpr const char* kJudgePreamble =
    "You are an expert in evaluating the performance of a web navigation agent. The agent is "
    "designed to help a human user navigate a website to complete a task. Given the user's "
    "intent, the agent's action history, the final state of the webpage, and the agent's "
    "response to the user, your goal is to decide whether the agent's execution is successful "
    "or not. Please be careful of each detail and strict about the evaluation process.";

constexpr const char* kJudgeTaskTypes =
    "There are three types of tasks:\n"
    "1. Information seeking: The user wants to obtain certain information from the webpage, "
    "such as the information of a product, reviews, map info, comparison of map routes, etc. "
    "The bot's response must contain the information the user wants, or explicitly state that "
    "the information is not available. Otherwise, e.g. the bot encounters an exception and "
    "respond with the error content, the task is considered a failure. Besides, be careful "
    "about the sufficiency of the agent's actions. For example, when asked to list the "
    "top-searched items in a shop, the agent should order the items by the number of searches, "
    "and then return the top items. If the ordering action is missing, the task is likely to "
    "fail.\n"
    "2. Site navigation: The user wants to navigate to a specific page. Carefully examine the "
    "bot's action history and the final state of the webpage to determine whether the bot "
    "successfully completes the task. No need to consider the bot's response.\n"
    "3. Content modification: The user wants to modify the content of a webpage or "
    "configuration. Carefully examine the bot's action history and the final state of the "
    "webpage to determine whether the bot successfully completes the task. No need to consider "
    "the bot's response.";

constexpr const char* kVerdictInstruction =
    "Conclude your reply with a final line of exactly `VERDICT: success` or `VERDICT: "
    "failure`.";

std::string lowercase(const std::string& text) {
  std::string out = text;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string build_judge_prompt(const std::string& goal, const core::Trajectory& trajectory,
                               const simenv::Observation& final_obs) {
  std::string out;
  out += kJudgePreamble;
  out += "\n\n";
  out += kJudgeTaskTypes;
  out += "\n\nUser Intent: ";
  out += goal;
  out += "\n\nAction History:\n";
  for (const auto& step : trajectory.steps) {
    out += simenv::render_action(step.action);
    out += "\n";
  }
  out += "\nThe final state of the webpage provided as an accessibility tree:\n";
  out += final_obs.axtree;
  out += "\n";
  if (final_obs.screenshot_ref) {
    out += "\nThe last snapshot of the web page is shown in the image.\n";
  }
  out += "\n";
  out += kVerdictInstruction;
  out += "\n";
  return out;
}

int parse_verdict(const std::string& reply) {
  auto lower = lowercase(reply);
  auto verdict_pos = lower.rfind("verdict:");
  if (verdict_pos != std::string::npos) {
    auto tail = lower.substr(verdict_pos);
    auto success = tail.find("success");
    auto failure = tail.find("failure");
    if (success != std::string::npos && (failure == std::string::npos || success < failure))
      return 1;
    return 0;
  }
  bool success = lower.find("success") != std::string::npos;
  bool failure = lower.find("failure") != std::string::npos;
  return success && !failure ? 1 : 0;
}

JudgeReward::JudgeReward(std::shared_ptr<llm::ChatProvider> provider, JudgeConfig config)
    : provider_(std::move(provider)), config_(std::move(config)) {}

int JudgeReward::evaluate(const std::string& goal, const core::Trajectory& trajectory,
                          const simenv::Observation& final_obs) {
  llm::ChatRequest request;
  llm::ChatMessage message;
  message.role = llm::Role::user;
  message.content = build_judge_prompt(goal, trajectory, final_obs);
  message.image_ref = final_obs.screenshot_ref;
  request.messages.push_back(std::move(message));
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  request.model_id = config_.model_id;
  return parse_verdict(provider_->complete(request));
}

}  // namespace gobrowse::reward
