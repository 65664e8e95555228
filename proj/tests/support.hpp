#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gobrowse/llm/client.hpp"
#include "gobrowse/simenv/actions.hpp"
#include "gobrowse/simenv/site_spec.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(GOBROWSE_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::shared_ptr<const gobrowse::simenv::SiteSpec> load_fixture(const std::string& name) {
  return gobrowse::simenv::load_site_spec_file(fixture_path(name));
}

// Strings that stress quoting: escapes, quotes, brackets, commas.
inline std::string random_string(std::mt19937_64& rng) {
  static const std::string alphabet =
      "abcdefghij XYZ0123456789'\"\\\n\t\r[](),.{}:=-_/?&#";
  auto len = rng() % 12;
  std::string out;
  for (uint64_t i = 0; i < len; ++i) out += alphabet[rng() % alphabet.size()];
  return out;
}

inline std::vector<std::string> random_string_list(std::mt19937_64& rng) {
  std::vector<std::string> out;
  auto len = rng() % 4;
  for (uint64_t i = 0; i < len; ++i) out.push_back(random_string(rng));
  return out;
}

// Golden-file comparison. GOBROWSE_REGEN_GOLDENS=1 rewrites the file instead.
inline void check_golden(const std::string& name, const std::string& actual) {
  auto path = std::string(GOBROWSE_GOLDEN_DIR) + "/" + name;
  if (std::getenv("GOBROWSE_REGEN_GOLDENS") != nullptr) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    out << actual;
    REQUIRE(out.good());
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden " << path << "; rerun with GOBROWSE_REGEN_GOLDENS=1");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CHECK_MESSAGE(buffer.str() == actual, "golden mismatch for " << name);
}

// Fresh directory under the system temp root, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    path = base / ("gobrowse-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name) const { return (path / name).string(); }
};

// Scriptable in-process provider; records every request it serves.
struct FakeProvider final : gobrowse::llm::ChatProvider {
  std::function<std::string(const gobrowse::llm::ChatRequest&)> fn;
  std::vector<gobrowse::llm::ChatRequest> calls;
  std::mutex mu;

  explicit FakeProvider(std::function<std::string(const gobrowse::llm::ChatRequest&)> fn)
      : fn(std::move(fn)) {}
  explicit FakeProvider(std::string reply)
      : fn([reply = std::move(reply)](const gobrowse::llm::ChatRequest&) { return reply; }) {}

  std::string complete(const gobrowse::llm::ChatRequest& request) override {
    std::lock_guard<std::mutex> lock(mu);
    calls.push_back(request);
    return fn(request);
  }
};

inline gobrowse::simenv::Action random_action(std::mt19937_64& rng) {
  using namespace gobrowse::simenv;
  auto finite_double = [&rng]() {
    if (rng() % 3 == 0) return static_cast<double>(static_cast<int64_t>(rng() % 2000) - 1000);
    return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
  };
  switch (rng() % 16) {
    case 0: return NoopAction{static_cast<int>(rng() % 5000)};
    case 1: return ClickAction{random_string(rng)};
    case 2: return HoverAction{random_string(rng)};
    case 3: return FillAction{random_string(rng), random_string(rng)};
    case 4: return KeyboardPressAction{random_string(rng)};
    case 5: return ScrollAction{finite_double(), finite_double()};
    case 6: return SelectOptionAction{random_string(rng), random_string_list(rng)};
    case 7: return GotoAction{random_string(rng)};
    case 8: return GoBackAction{};
    case 9: return GoForwardAction{};
    case 10: return NewTabAction{};
    case 11: return TabCloseAction{};
    case 12: return TabFocusAction{static_cast<int>(rng() % 10)};
    case 13: return SendMsgToUserAction{random_string(rng)};
    case 14: return ReportInfeasibleAction{random_string(rng)};
    default: return AddTasksToDatasetAction{random_string_list(rng)};
  }
}

}  // namespace testsupport
