#include "gobrowse/llm/client.hpp"

#include <charconv>

#include "gobrowse/core/hash.hpp"

namespace gobrowse::llm {

std::string to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> role_from_string(const std::string& name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  return std::nullopt;
}

std::string request_digest(const ChatRequest& request) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::string_view part) {
    h = core::fnv1a64(part, h);
    h = core::fnv1a64("\x1f", h);
  };
  for (const auto& message : request.messages) {
    mix(to_string(message.role));
    mix(message.content);
    if (message.image_ref) {
      mix("image");
      mix(*message.image_ref);
    }
    h = core::fnv1a64("\x1e", h);
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), request.temperature);
  (void)ec;
  mix(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
  mix(std::to_string(request.max_tokens));
  mix(request.model_id);
  return core::hex64(h);
}

}  // namespace gobrowse::llm
