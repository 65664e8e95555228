#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "gobrowse/llm/client.hpp"

namespace gobrowse::llm {

using nlohmann::json;

namespace {

struct SplitEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitEndpoint split_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw ProviderUnavailable("endpoint is not an absolute URL: " + endpoint);
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

json message_payload(const ChatMessage& message) {
  json out{{"role", to_string(message.role)}};
  if (message.image_ref) {
    out["content"] = json::array({
        json{{"type", "text"}, {"text", message.content}},
        json{{"type", "image_url"}, {"image_url", json{{"url", *message.image_ref}}}},
    });
  } else {
    out["content"] = message.content;
  }
  return out;
}

class HttpProvider final : public ChatProvider {
 public:
  explicit HttpProvider(ProviderConfig config) : config_(std::move(config)) {
    if (config_.retry.max_attempts < 1)
      throw ProviderUnavailable("retry.max_attempts must be at least 1");
  }

  std::string complete(const ChatRequest& request) override {
    json body{
        {"model", request.model_id},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    body["messages"] = json::array();
    for (const auto& message : request.messages) body["messages"].push_back(message_payload(message));
    auto payload = body.dump();

    auto split = split_endpoint(config_.endpoint);
    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
      if (attempt > 0) {
        auto idx = static_cast<std::size_t>(attempt - 1);
        int wait = idx < config_.retry.backoff_ms.size() ? config_.retry.backoff_ms[idx] : 0;
        if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
      }
      httplib::Client client(split.base);
      client.set_connection_timeout(config_.timeout_ms / 1000,
                                    (config_.timeout_ms % 1000) * 1000);
      client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (!config_.credentials_ref.empty()) {
        const char* key = std::getenv(config_.credentials_ref.c_str());
        if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
      }
      auto res = client.Post(split.path, headers, payload, "application/json");
      if (!res) {
        last_failure = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 401 || res->status == 403)
        throw AuthError("provider rejected credentials (status " +
                        std::to_string(res->status) + ")");
      if (res->status >= 500) {
        last_failure = "server error: status " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw ProviderUnavailable("provider returned status " + std::to_string(res->status) +
                                  ": " + res->body);
      return extract_text(res->body);
    }
    throw ProviderUnavailable("provider unreachable after " +
                              std::to_string(config_.retry.max_attempts) +
                              " attempts; last failure: " + last_failure);
  }

 private:
  static std::string extract_text(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw ResponseEmpty("provider returned unparseable body");
    try {
      const auto& content = doc.at("choices").at(0).at("message").at("content");
      if (!content.is_string() || content.get<std::string>().empty())
        throw ResponseEmpty("provider returned an empty completion");
      return content.get<std::string>();
    } catch (const json::exception&) {
      throw ResponseEmpty("provider response missing choices[0].message.content");
    }
  }

  ProviderConfig config_;
};

}  // namespace

std::unique_ptr<ChatProvider> make_http_provider(const ProviderConfig& config) {
  return std::make_unique<HttpProvider>(config);
}

}  // namespace gobrowse::llm
