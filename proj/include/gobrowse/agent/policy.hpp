#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gobrowse/agent/action_parser.hpp"
#include "gobrowse/core/types.hpp"

namespace gobrowse::agent {

class AgentPolicy {
 public:
  virtual ~AgentPolicy() = default;
  // Produce the next step for the given observation. LLM-backed policies may
  // throw ActionParseError; the rollout loop turns that into a no-op step.
  virtual ParsedStep act(const simenv::Observation& obs) = 0;
  // Identity recorded as Trajectory.sampler.
  virtual std::string name() const = 0;
};

// Everything known about the episode a policy instance is built for.
// Factories use it to pick scripts, seeds, and prompt variants; policies that
// hold per-episode state are constructed fresh from one of these.
struct PolicyContext {
  core::Task task;
  core::CanonicalUrl start_url;
  bool prefixed = false;
  int sample_index = 0;
  std::uint64_t seed = 0;
  std::string role;  // solver | feasibility_checker | nav_explorer | page_explorer
};

using PolicyFactory = std::function<std::unique_ptr<AgentPolicy>(const PolicyContext&)>;

// Replays a fixed action list. With failure_probability > 0, each act()
// first consumes one uniform draw from the seeded stream and derails the
// episode with report_infeasible when the draw lands below the threshold.
// A policy that runs past its script also reports infeasible.
class ScriptedAgent final : public AgentPolicy {
 public:
  explicit ScriptedAgent(std::vector<simenv::Action> script, std::string name = "scripted",
                         double failure_probability = 0.0, std::uint64_t seed = 0);

  ParsedStep act(const simenv::Observation& obs) override;
  std::string name() const override { return name_; }

 private:
  std::vector<simenv::Action> script_;
  std::string name_;
  double failure_probability_;
  std::mt19937_64 rng_;
  std::size_t position_ = 0;
};

}  // namespace gobrowse::agent
