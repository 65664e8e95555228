#include "gobrowse/core/types.hpp"

#include <cctype>

#include "gobrowse/core/hash.hpp"

namespace gobrowse::core {

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::information_seeking: return "information_seeking";
    case TaskKind::site_navigation: return "site_navigation";
    case TaskKind::content_modification: return "content_modification";
  }
  return "information_seeking";
}

std::optional<TaskKind> task_kind_from_string(const std::string& name) {
  if (name == "information_seeking") return TaskKind::information_seeking;
  if (name == "site_navigation") return TaskKind::site_navigation;
  if (name == "content_modification") return TaskKind::content_modification;
  return std::nullopt;
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::terminal_action: return "terminal_action";
    case TerminationReason::horizon: return "horizon";
    case TerminationReason::environment_error: return "environment_error";
  }
  return "horizon";
}

std::optional<TerminationReason> termination_reason_from_string(const std::string& name) {
  if (name == "terminal_action") return TerminationReason::terminal_action;
  if (name == "horizon") return TerminationReason::horizon;
  if (name == "environment_error") return TerminationReason::environment_error;
  return std::nullopt;
}

std::optional<std::string> Trajectory::final_message() const {
  if (steps.empty()) return std::nullopt;
  const auto* msg = std::get_if<simenv::SendMsgToUserAction>(&steps.back().action);
  if (!msg) return std::nullopt;
  return msg->text;
}

CanonicalUrl Trajectory::final_url() const {
  if (steps.empty()) return start_url;
  return steps.back().url_after;
}

std::string normalize_goal(const std::string& goal) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : goal) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string hex64(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

uint64_t derive_seed(uint64_t base, std::initializer_list<std::string_view> parts) {
  uint64_t h = 0xcbf29ce484222325ull ^ base;
  h *= 0x100000001b3ull;
  for (auto part : parts) {
    h = fnv1a64(part, h);
    h = fnv1a64("\x1f", h);
  }
  return h;
}

}  // namespace gobrowse::core
