#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gobrowse/core/errors.hpp"

namespace gobrowse::llm {

struct ProviderUnavailable : Error {
  using Error::Error;
};
struct AuthError : Error {
  using Error::Error;
};
struct ResponseEmpty : Error {
  using Error::Error;
};
struct MissingRecording : Error {
  using Error::Error;
};

enum class Role { system, user, assistant };

std::string to_string(Role role);
std::optional<Role> role_from_string(const std::string& name);

struct ChatMessage {
  Role role = Role::user;
  std::string content;
  std::optional<std::string> image_ref;  // opaque reference; text-only pipelines leave it empty

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  int max_tokens = 1024;
  std::string model_id = "default";

  bool operator==(const ChatRequest&) const = default;
};

// Cache key for record/replay: a pure function of (messages, temperature,
// max_tokens, model_id). Image refs enter the digest only when present, and
// provider settings (endpoint, credentials) never do.
std::string request_digest(const ChatRequest& request);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  // Returns the assistant reply text. Thread-safe in all implementations.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<int> backoff_ms = {100, 400, 1600};
};

struct ProviderConfig {
  std::string endpoint;  // OpenAI-compatible chat completions URL
  std::string credentials_ref;  // name of the environment variable holding the key
  RetryPolicy retry;
  int timeout_ms = 30000;
};

// HTTP client for the wire protocol. Retries transport failures and 5xx per
// the retry policy; auth and other 4xx failures are terminal.
std::unique_ptr<ChatProvider> make_http_provider(const ProviderConfig& config);

}  // namespace gobrowse::llm
