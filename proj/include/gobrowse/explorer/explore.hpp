#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gobrowse/agent/policy.hpp"
#include "gobrowse/core/types.hpp"
#include "gobrowse/datastore/dataset.hpp"
#include "gobrowse/reward/reward.hpp"
#include "gobrowse/simenv/environment.hpp"
#include "gobrowse/simenv/site_spec.hpp"

namespace gobrowse::explorer {

struct FrontierEmpty : Error {
  using Error::Error;
};

struct Edge {
  core::CanonicalUrl from;
  core::CanonicalUrl to;
  std::string trajectory_id;
  int weight = 1;  // step count of the trajectory behind this edge
};

// Nodes are query-stripped page URLs; edges are the trajectories that first
// reached them. The node set only grows during a run.
class SiteGraph {
 public:
  explicit SiteGraph(core::CanonicalUrl root);

  const core::CanonicalUrl& root() const { return root_; }
  const std::set<core::CanonicalUrl>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool contains(const core::CanonicalUrl& url) const { return nodes_.count(url) > 0; }
  void add_node(const core::CanonicalUrl& url);
  // Both endpoints must already be nodes.
  void add_edge(const core::CanonicalUrl& from, const core::CanonicalUrl& to,
                const std::string& trajectory_id, int weight);

  datastore::GraphSnapshot snapshot(const std::string& site) const;
  static SiteGraph from_snapshot(const datastore::GraphSnapshot& snapshot);

 private:
  core::CanonicalUrl root_;
  std::set<core::CanonicalUrl> nodes_;
  std::vector<Edge> edges_;
};

// FIFO queue of pages awaiting exploration. A URL is accepted at most once
// per run, even after it has been popped.
class Frontier {
 public:
  // False when the URL was already enqueued at some point.
  bool push(const core::CanonicalUrl& url);
  // Oldest entry. Throws FrontierEmpty.
  core::CanonicalUrl select_and_remove();
  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }

 private:
  std::deque<core::CanonicalUrl> queue_;
  std::set<core::CanonicalUrl> seen_;
};

enum class DiscoveryMode {
  all_visited,         // every URL visited by any feasibility trajectory
  success_final_only,  // only the final URL of the successful trajectory
};

struct ExploreConfig {
  int max_pages_per_site = 20;
  int feasibility_max_tries = 3;
  int max_feasible_tasks_per_url = 30;
  int solver_horizon = 10;
  int prefixed_samples = 2;
  int unprefixed_samples = 2;
  int nav_explorer_steps = 15;
  std::vector<std::pair<std::string, int>> page_explorer_step_budgets = {
      {"page_explorer_a", 20},
      {"page_explorer_b", 10},
  };
  double collection_temperature = 0.7;
  std::uint64_t seed = 0;
  int workers = 1;
  bool deterministic = false;
  DiscoveryMode discovery_mode = DiscoveryMode::all_visited;
};

// Canonical serialized form of a config; its hash names the run in manifests.
std::string config_json(const ExploreConfig& cfg);
std::string config_digest(const ExploreConfig& cfg);

// Role bindings. page_explorers is keyed by the budget ids in
// ExploreConfig.page_explorer_step_budgets; every id used there must be bound.
struct Modules {
  agent::PolicyFactory nav_explorer;
  std::map<std::string, agent::PolicyFactory> page_explorers;
  agent::PolicyFactory feasibility_checker;
  std::vector<std::pair<std::string, agent::PolicyFactory>> solvers;
  std::shared_ptr<reward::RewardModel> reward;
};

struct Site {
  std::shared_ptr<const simenv::SiteSpec> spec;
  // Defaults to a fresh SimWebEnvironment over spec when left empty.
  std::function<std::unique_ptr<simenv::Environment>()> make_env;
};

Site make_site(std::shared_ptr<const simenv::SiteSpec> spec);

struct ProposalResult {
  std::vector<core::Task> tasks;
  core::Trajectory rollout;
};

// Splits an optional "<kind>: " prefix off proposed goal text; unprefixed or
// unrecognized text is information-seeking.
std::pair<core::TaskKind, std::string> split_kind_tag(const std::string& raw);

// Tasks collected from the episode's add_tasks_to_dataset actions (errored
// steps skipped), deduplicated by normalized goal. navigation_kind stamps
// every task site_navigation; otherwise an optional "<kind>: " prefix on the
// goal text selects the kind.
std::vector<core::Task> harvest_tasks(const core::Trajectory& rollout,
                                      const core::CanonicalUrl& source_url,
                                      const std::string& proposer, bool navigation_kind);

// Empty environment_error trajectory standing in for an episode that never
// produced steps.
core::Trajectory failed_rollout_stub(const core::CanonicalUrl& start, const std::string& sampler);

// One proposer episode from node_url. Tasks are harvested from every
// add_tasks_to_dataset action in the episode and deduplicated by normalized
// goal text. nav_explore stamps kind = site_navigation; page_explore accepts
// an optional "<kind>: " prefix on each proposed goal (information_seeking
// otherwise). A failed episode yields no tasks and an environment_error
// rollout.
ProposalResult nav_explore(simenv::Environment& env, const core::CanonicalUrl& node_url,
                           agent::AgentPolicy& policy, int max_steps);

struct PageExploreResult {
  std::vector<core::Task> tasks;
  std::vector<core::Trajectory> rollouts;  // one per proposer policy
};

// Runs each (policy, step budget) proposer in its own episode and unions the
// task lists, deduplicated by normalized goal text in arrival order.
PageExploreResult page_explore(const Site& site, const core::CanonicalUrl& node_url,
                               const std::vector<std::pair<agent::AgentPolicy*, int>>& proposers);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<core::Trajectory> trajectories;  // every sampled attempt, scored
  std::set<core::CanonicalUrl> discovered;     // visited pages not yet in the graph
};

// Samples checker rollouts for the task from task.source_url, up to
// cfg.feasibility_max_tries, stopping on the first reward-1 trajectory.
// Rollout failures become failed environment_error trajectories. Discovered
// pages are query-stripped, same-origin with the graph root, and filtered by
// cfg.discovery_mode.
FeasibilityResult check_feasibility(const core::Task& task, const SiteGraph& graph,
                                    const Site& site, const agent::PolicyFactory& checker,
                                    reward::RewardModel& reward_model, const ExploreConfig& cfg);

// For every configured solver: prefixed_samples rollouts from
// task.source_url and unprefixed_samples from the graph root, each scored.
// All trajectories are returned, successes and failures alike.
std::vector<core::Trajectory> sample_solver_trajectories(const core::Task& task,
                                                         const ExploreConfig& cfg,
                                                         const Modules& modules, const Site& site,
                                                         const core::CanonicalUrl& root);

struct GoBrowseResult {
  std::vector<SiteGraph> graphs;  // one per site, in input order
  std::vector<datastore::SiteSummary> summaries;
  std::string config_digest;
};

// The full outer loop per site: seed the frontier with the root, pop pages
// FIFO until the frontier empties or max_pages_per_site pages are explored;
// per page run the proposers, feasibility-check proposals (stopping once
// max_feasible_tasks_per_url feasible tasks are found for that page), add
// newly visited pages to graph and frontier with trajectory edges, and sample
// solver trajectories for each feasible task. Everything is persisted to the
// dataset as it happens; a graph snapshot per site and one run manifest are
// appended at the end. Per-page failures are logged and skipped.
GoBrowseResult run_go_browse(const std::vector<Site>& sites, const Modules& modules,
                             const ExploreConfig& cfg, datastore::Dataset& dataset);

}  // namespace gobrowse::explorer
