#pragma once

#include <memory>
#include <string>

#include "gobrowse/core/types.hpp"
#include "gobrowse/simenv/site_spec.hpp"

namespace gobrowse::reward {

// Binary trajectory evaluation. evaluate returns exactly 0 or 1.
class RewardModel {
 public:
  virtual ~RewardModel() = default;
  virtual int evaluate(const std::string& goal, const core::Trajectory& trajectory,
                       const simenv::Observation& final_obs) = 0;
};

// Applies one declared checker to a finished trajectory. Missing data (no
// final message for message checkers, no snapshot for state checkers) scores
// 0, never an error.
int evaluate_ground_truth(const simenv::GroundTruthTask& task, const core::Trajectory& trajectory,
                          const simenv::Observation& final_obs);

// Deterministic site-level reward: ground-truth goals use their declared
// checker; navigation goals pass when the final URL is a target of any site
// element carrying the goal's label; every other goal scores 0.
class GroundTruthReward final : public RewardModel {
 public:
  explicit GroundTruthReward(std::shared_ptr<const simenv::SiteSpec> spec);

  int evaluate(const std::string& goal, const core::Trajectory& trajectory,
               const simenv::Observation& final_obs) override;

 private:
  std::shared_ptr<const simenv::SiteSpec> spec_;
};

}  // namespace gobrowse::reward
