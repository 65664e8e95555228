#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "gobrowse/llm/client.hpp"

namespace gobrowse::llm {

enum class ReplayMode {
  record,  // serve from the store when possible, otherwise call live and append
  replay,  // strict: unseen requests raise MissingRecording
};

// Append-only JSONL store of (digest, request, response) records. In record
// mode each distinct request hits the live provider once; afterwards every
// run replays byte-identical responses with no network.
class RecordReplayStore final : public ChatProvider {
 public:
  RecordReplayStore(std::string path, ReplayMode mode,
                    std::shared_ptr<ChatProvider> live = nullptr);

  std::string complete(const ChatRequest& request) override;

  std::size_t size() const;

 private:
  void load();

  std::string path_;
  ReplayMode mode_;
  std::shared_ptr<ChatProvider> live_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> responses_;
};

}  // namespace gobrowse::llm
