#include "gobrowse/agent/policy.hpp"

#include <utility>

#include "gobrowse/core/hash.hpp"

namespace gobrowse::agent {

ScriptedAgent::ScriptedAgent(std::vector<simenv::Action> script, std::string name,
                             double failure_probability, std::uint64_t seed)
    : script_(std::move(script)),
      name_(std::move(name)),
      failure_probability_(failure_probability),
      rng_(seed) {}

ParsedStep ScriptedAgent::act(const simenv::Observation&) {
  if (failure_probability_ > 0.0 && core::next_uniform(rng_) < failure_probability_)
    return {"lost track of the goal", simenv::ReportInfeasibleAction{"lost track of the goal"}};
  if (position_ >= script_.size())
    return {"script exhausted", simenv::ReportInfeasibleAction{"script exhausted"}};
  auto action = script_[position_];
  ++position_;
  return {"scripted step " + std::to_string(position_), action};
}

}  // namespace gobrowse::agent
