#include "gobrowse/llm/replay.hpp"

#include <fstream>

#include "json.hpp"

namespace gobrowse::llm {

using nlohmann::json;

RecordReplayStore::RecordReplayStore(std::string path, ReplayMode mode,
                                     std::shared_ptr<ChatProvider> live)
    : path_(std::move(path)), mode_(mode), live_(std::move(live)) {
  load();
}

void RecordReplayStore::load() {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.contains("digest") || !record.contains("response"))
      throw Error("corrupt recording line in " + path_);
    responses_[record["digest"].get<std::string>()] = record["response"].get<std::string>();
  }
}

std::size_t RecordReplayStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return responses_.size();
}

std::string RecordReplayStore::complete(const ChatRequest& request) {
  auto digest = request_digest(request);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = responses_.find(digest);
    if (it != responses_.end()) return it->second;
  }
  if (mode_ == ReplayMode::replay || !live_)
    throw MissingRecording("no recording for request digest " + digest + " in " + path_);

  auto response = live_->complete(request);

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = responses_.emplace(digest, response);
  if (inserted) {
    json record{{"digest", digest}, {"response", response}};
    json messages = json::array();
    for (const auto& message : request.messages) {
      json m{{"role", to_string(message.role)}, {"content", message.content}};
      if (message.image_ref) m["image_ref"] = *message.image_ref;
      messages.push_back(std::move(m));
    }
    record["request"] = json{{"messages", std::move(messages)},
                             {"temperature", request.temperature},
                             {"max_tokens", request.max_tokens},
                             {"model_id", request.model_id}};
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot append to recording store " + path_);
    out << record.dump() << '\n';
  }
  return it->second;
}

}  // namespace gobrowse::llm
