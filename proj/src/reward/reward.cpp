#include "gobrowse/reward/reward.hpp"

#include <utility>

#include "gobrowse/core/errors.hpp"
#include "gobrowse/core/url.hpp"

namespace gobrowse::reward {

int evaluate_ground_truth(const simenv::GroundTruthTask& task, const core::Trajectory& trajectory,
                          const simenv::Observation& final_obs) {
  return simenv::check_ground_truth(task, final_obs.url, trajectory.final_message(),
                                    trajectory.final_fields)
             ? 1
             : 0;
}

GroundTruthReward::GroundTruthReward(std::shared_ptr<const simenv::SiteSpec> spec)
    : spec_(std::move(spec)) {}

int GroundTruthReward::evaluate(const std::string& goal, const core::Trajectory& trajectory,
                                const simenv::Observation& final_obs) {
  if (const auto* gt = spec_->find_ground_truth(goal))
    return evaluate_ground_truth(*gt, trajectory, final_obs);

  auto label = simenv::parse_nav_goal(goal);
  if (!label) return 0;
  for (const auto& entry : spec_->pages) {
    for (const auto& elem : entry.page.elements) {
      if (elem.label != *label) continue;
      std::optional<std::string> pattern;
      if (elem.target) {
        try {
          if (elem.target->find("://") != std::string::npos &&
              spec_->is_external(core::canonicalize_url(*elem.target)))
            continue;
        } catch (const MalformedUrl&) {
          continue;
        }
        pattern = *elem.target;
      } else if (elem.transition) {
        pattern = elem.transition->path;
      }
      if (!pattern) continue;
      core::UrlTemplate tmpl(*pattern);
      if (tmpl.matches(final_obs.url)) return 1;
    }
  }
  return 0;
}

}  // namespace gobrowse::reward
