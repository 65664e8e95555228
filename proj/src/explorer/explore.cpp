#include "gobrowse/explorer/explore.hpp"

#include <algorithm>
#include <iostream>

#include "gobrowse/agent/prompts.hpp"
#include "gobrowse/agent/rollout.hpp"
#include "gobrowse/core/hash.hpp"
#include "gobrowse/explorer/parallel.hpp"
#include "nlohmann/json.hpp"

namespace gobrowse::explorer {

namespace {

void log_warning(const std::string& message) { std::cerr << "[explorer] " << message << "\n"; }

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

std::pair<core::TaskKind, std::string> split_kind_tag(const std::string& raw) {
  auto pos = raw.find(": ");
  if (pos != std::string::npos) {
    if (auto kind = core::task_kind_from_string(raw.substr(0, pos)))
      return {*kind, raw.substr(pos + 2)};
  }
  return {core::TaskKind::information_seeking, raw};
}

std::vector<core::Task> harvest_tasks(const core::Trajectory& rollout,
                                      const core::CanonicalUrl& node_url,
                                      const std::string& proposer, bool navigation_kind) {
  std::vector<core::Task> tasks;
  std::set<std::string> seen;
  for (const auto& step : rollout.steps) {
    const auto* add = std::get_if<simenv::AddTasksToDatasetAction>(&step.action);
    if (!add || step.action_error) continue;
    for (const auto& raw : add->tasks) {
      core::Task task;
      task.source_url = node_url;
      task.proposer = proposer;
      if (navigation_kind) {
        task.kind = core::TaskKind::site_navigation;
        task.goal = trim(raw);
      } else {
        auto [kind, goal] = split_kind_tag(trim(raw));
        task.kind = kind;
        task.goal = goal;
      }
      if (task.goal.empty()) continue;
      if (!seen.insert(core::normalize_goal(task.goal)).second) continue;
      tasks.push_back(std::move(task));
    }
  }
  return tasks;
}

core::Trajectory failed_rollout_stub(const core::CanonicalUrl& start, const std::string& sampler) {
  core::Trajectory stub;
  stub.start_url = start;
  stub.sampler = sampler;
  stub.terminated_by = core::TerminationReason::environment_error;
  return stub;
}

namespace {

std::vector<core::CanonicalUrl> visited_pages(const core::Trajectory& trajectory) {
  std::vector<core::CanonicalUrl> pages;
  pages.push_back(core::without_query(trajectory.start_url));
  for (const auto& step : trajectory.steps) pages.push_back(core::without_query(step.url_after));
  return pages;
}

}  // namespace

SiteGraph::SiteGraph(core::CanonicalUrl root) : root_(std::move(root)) { nodes_.insert(root_); }

void SiteGraph::add_node(const core::CanonicalUrl& url) { nodes_.insert(url); }

void SiteGraph::add_edge(const core::CanonicalUrl& from, const core::CanonicalUrl& to,
                         const std::string& trajectory_id, int weight) {
  if (!contains(from) || !contains(to))
    throw Error("graph edge endpoint is not a node: " + from.render() + " -> " + to.render());
  edges_.push_back(Edge{from, to, trajectory_id, weight});
}

datastore::GraphSnapshot SiteGraph::snapshot(const std::string& site) const {
  datastore::GraphSnapshot snap;
  snap.site = site;
  snap.root = root_.render();
  for (const auto& node : nodes_) snap.nodes.push_back(node.render());
  for (const auto& edge : edges_)
    snap.edges.push_back(
        {edge.from.render(), edge.to.render(), edge.trajectory_id, edge.weight});
  return snap;
}

SiteGraph SiteGraph::from_snapshot(const datastore::GraphSnapshot& snapshot) {
  SiteGraph graph(core::canonicalize_url(snapshot.root));
  for (const auto& node : snapshot.nodes) graph.add_node(core::canonicalize_url(node));
  for (const auto& edge : snapshot.edges)
    graph.add_edge(core::canonicalize_url(edge.from), core::canonicalize_url(edge.to),
                   edge.trajectory_id, edge.weight);
  return graph;
}

bool Frontier::push(const core::CanonicalUrl& url) {
  if (!seen_.insert(url).second) return false;
  queue_.push_back(url);
  return true;
}

core::CanonicalUrl Frontier::select_and_remove() {
  if (queue_.empty()) throw FrontierEmpty("frontier is empty");
  auto url = queue_.front();
  queue_.pop_front();
  return url;
}

std::string config_json(const ExploreConfig& cfg) {
  nlohmann::ordered_json j;
  j["max_pages_per_site"] = cfg.max_pages_per_site;
  j["feasibility_max_tries"] = cfg.feasibility_max_tries;
  j["max_feasible_tasks_per_url"] = cfg.max_feasible_tasks_per_url;
  j["solver_horizon"] = cfg.solver_horizon;
  j["prefixed_samples"] = cfg.prefixed_samples;
  j["unprefixed_samples"] = cfg.unprefixed_samples;
  j["nav_explorer_steps"] = cfg.nav_explorer_steps;
  auto budgets = nlohmann::ordered_json::array();
  for (const auto& [id, steps] : cfg.page_explorer_step_budgets)
    budgets.push_back({{"id", id}, {"steps", steps}});
  j["page_explorer_step_budgets"] = std::move(budgets);
  j["collection_temperature"] = cfg.collection_temperature;
  j["seed"] = cfg.seed;
  // workers and deterministic are execution knobs: they never change what
  // gets collected, so they stay out of the digest.
  j["discovery_mode"] =
      cfg.discovery_mode == DiscoveryMode::all_visited ? "all_visited" : "success_final_only";
  return j.dump();
}

std::string config_digest(const ExploreConfig& cfg) {
  return core::hex64(core::fnv1a64(config_json(cfg)));
}

Site make_site(std::shared_ptr<const simenv::SiteSpec> spec) {
  Site site;
  site.spec = spec;
  site.make_env = [spec] { return std::make_unique<simenv::SimWebEnvironment>(spec); };
  return site;
}

ProposalResult nav_explore(simenv::Environment& env, const core::CanonicalUrl& node_url,
                           agent::AgentPolicy& policy, int max_steps) {
  ProposalResult result;
  agent::RolloutConfig cfg{max_steps, agent::nav_explorer_goal(), node_url, 0};
  try {
    result.rollout = agent::rollout(policy, env, cfg);
  } catch (const Error& err) {
    log_warning("nav explorer failed on " + node_url.render() + ": " + err.what());
    result.rollout = failed_rollout_stub(node_url, policy.name());
    return result;
  }
  result.tasks = harvest_tasks(result.rollout, node_url, policy.name(), true);
  return result;
}

PageExploreResult page_explore(const Site& site, const core::CanonicalUrl& node_url,
                               const std::vector<std::pair<agent::AgentPolicy*, int>>& proposers) {
  PageExploreResult result;
  std::set<std::string> seen;
  for (const auto& [policy, max_steps] : proposers) {
    auto env = site.make_env();
    agent::RolloutConfig cfg{max_steps, agent::page_explorer_goal(), node_url, 0};
    core::Trajectory rollout;
    try {
      rollout = agent::rollout(*policy, *env, cfg);
    } catch (const Error& err) {
      log_warning("page explorer failed on " + node_url.render() + ": " + err.what());
      result.rollouts.push_back(failed_rollout_stub(node_url, policy->name()));
      continue;
    }
    result.rollouts.push_back(rollout);
    for (auto& task : harvest_tasks(rollout, node_url, policy->name(), false)) {
      if (!seen.insert(core::normalize_goal(task.goal)).second) continue;
      result.tasks.push_back(std::move(task));
    }
  }
  return result;
}

FeasibilityResult check_feasibility(const core::Task& task, const SiteGraph& graph,
                                    const Site& site, const agent::PolicyFactory& checker,
                                    reward::RewardModel& reward_model, const ExploreConfig& cfg) {
  FeasibilityResult result;
  const int tries = cfg.feasibility_max_tries;
  if (tries <= 0) return result;

  auto attempt = [&](int i) -> core::Trajectory {
    agent::PolicyContext ctx;
    ctx.task = task;
    ctx.start_url = task.source_url;
    ctx.prefixed = true;
    ctx.sample_index = i;
    ctx.seed = core::derive_seed(
        cfg.seed, {"feasibility", task.source_url.render(), task.goal, std::to_string(i)});
    ctx.role = "feasibility_checker";
    auto policy = checker(ctx);
    auto env = site.make_env();
    core::Trajectory traj = failed_rollout_stub(task.source_url, policy->name());
    traj.prefixed = true;
    traj.reward = 0;
    simenv::Observation final_obs;
    try {
      agent::RolloutConfig rcfg{cfg.solver_horizon, task.goal, task.source_url, ctx.seed};
      traj = agent::rollout(*policy, *env, rcfg, &final_obs);
      traj.prefixed = true;
      traj.reward = reward_model.evaluate(task.goal, traj, final_obs);
    } catch (const Error& err) {
      log_warning("feasibility attempt failed for '" + task.goal + "': " + err.what());
      traj.prefixed = true;
      traj.reward = 0;
    }
    return traj;
  };

  // Attempts are seeded independently, so evaluating them eagerly in parallel
  // and truncating at the first success matches the sequential
  // stop-on-success semantics trajectory for trajectory.
  std::vector<core::Trajectory> attempts;
  if (cfg.workers > 1 && !cfg.deterministic && tries > 1) {
    attempts = ordered_parallel(tries, cfg.workers, attempt);
  } else {
    for (int i = 0; i < tries; ++i) {
      attempts.push_back(attempt(i));
      if (attempts.back().succeeded()) break;
    }
  }
  for (auto& traj : attempts) {
    const bool success = traj.succeeded();
    result.trajectories.push_back(std::move(traj));
    if (success) {
      result.feasible = true;
      break;
    }
  }

  for (const auto& traj : result.trajectories) {
    if (cfg.discovery_mode == DiscoveryMode::success_final_only) {
      if (!traj.succeeded()) continue;
      auto page = core::without_query(traj.final_url());
      if (page.same_origin(graph.root()) && !graph.contains(page)) result.discovered.insert(page);
      continue;
    }
    for (const auto& page : visited_pages(traj))
      if (page.same_origin(graph.root()) && !graph.contains(page)) result.discovered.insert(page);
  }
  return result;
}

std::vector<core::Trajectory> sample_solver_trajectories(const core::Task& task,
                                                         const ExploreConfig& cfg,
                                                         const Modules& modules, const Site& site,
                                                         const core::CanonicalUrl& root) {
  struct Cell {
    const std::string* solver;
    const agent::PolicyFactory* factory;
    bool prefixed;
    int index;
  };
  std::vector<Cell> cells;
  for (const auto& [name, factory] : modules.solvers) {
    for (int j = 0; j < cfg.prefixed_samples; ++j) cells.push_back({&name, &factory, true, j});
    for (int j = 0; j < cfg.unprefixed_samples; ++j) cells.push_back({&name, &factory, false, j});
  }
  if (cells.empty()) return {};

  auto sample = [&](int idx) -> core::Trajectory {
    const auto& cell = cells[idx];
    const auto start = cell.prefixed ? task.source_url : root;
    agent::PolicyContext ctx;
    ctx.task = task;
    ctx.start_url = start;
    ctx.prefixed = cell.prefixed;
    ctx.sample_index = cell.index;
    ctx.seed = core::derive_seed(cfg.seed, {"solver", *cell.solver, task.source_url.render(),
                                            task.goal, cell.prefixed ? "prefixed" : "unprefixed",
                                            std::to_string(cell.index)});
    ctx.role = "solver";
    auto policy = (*cell.factory)(ctx);
    auto env = site.make_env();
    core::Trajectory traj = failed_rollout_stub(start, policy->name());
    traj.prefixed = cell.prefixed;
    traj.reward = 0;
    simenv::Observation final_obs;
    try {
      agent::RolloutConfig rcfg{cfg.solver_horizon, task.goal, start, ctx.seed};
      traj = agent::rollout(*policy, *env, rcfg, &final_obs);
      traj.prefixed = cell.prefixed;
      traj.reward = modules.reward->evaluate(task.goal, traj, final_obs);
    } catch (const Error& err) {
      log_warning("solver sample failed for '" + task.goal + "': " + err.what());
      traj.prefixed = cell.prefixed;
      traj.reward = 0;
    }
    return traj;
  };

  const int n = static_cast<int>(cells.size());
  if (cfg.workers > 1 && !cfg.deterministic && n > 1)
    return ordered_parallel(n, cfg.workers, sample);
  std::vector<core::Trajectory> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sample(i));
  return out;
}

GoBrowseResult run_go_browse(const std::vector<Site>& sites, const Modules& modules,
                             const ExploreConfig& cfg, datastore::Dataset& dataset) {
  if (!modules.nav_explorer || !modules.feasibility_checker || !modules.reward)
    throw Error("explorer modules are not fully wired");
  ExploreConfig run_cfg = cfg;
  if (run_cfg.deterministic) run_cfg.workers = 1;

  GoBrowseResult result;
  result.config_digest = config_digest(cfg);

  for (const auto& input_site : sites) {
    if (!input_site.spec) throw Error("site has no spec");
    Site site = input_site;
    if (!site.make_env) site = make_site(site.spec);

    const auto root = core::without_query(site.spec->root_url);
    SiteGraph graph(root);
    Frontier frontier;
    frontier.push(root);
    datastore::SiteSummary summary;
    summary.site = root.render();
    std::set<std::string> site_goal_keys;
    int explored = 0;

    while (!frontier.empty() && explored < run_cfg.max_pages_per_site) {
      const auto node = frontier.select_and_remove();
      ++explored;
      try {
        // Proposals.
        agent::PolicyContext nav_ctx;
        nav_ctx.start_url = node;
        nav_ctx.role = "nav_explorer";
        nav_ctx.seed = core::derive_seed(run_cfg.seed, {"nav_explore", node.render()});
        auto nav_policy = modules.nav_explorer(nav_ctx);
        auto env = site.make_env();
        auto nav = nav_explore(*env, node, *nav_policy, run_cfg.nav_explorer_steps);
        dataset.append_explorer_rollout(nav.rollout, "nav_explorer");

        std::vector<std::unique_ptr<agent::AgentPolicy>> page_policies;
        std::vector<std::pair<agent::AgentPolicy*, int>> proposers;
        for (const auto& [id, steps] : run_cfg.page_explorer_step_budgets) {
          auto it = modules.page_explorers.find(id);
          if (it == modules.page_explorers.end())
            throw Error("no page explorer bound for budget id '" + id + "'");
          agent::PolicyContext ctx;
          ctx.start_url = node;
          ctx.role = "page_explorer";
          ctx.seed = core::derive_seed(run_cfg.seed, {"page_explore", id, node.render()});
          page_policies.push_back(it->second(ctx));
          proposers.emplace_back(page_policies.back().get(), steps);
        }
        auto page = page_explore(site, node, proposers);
        for (const auto& rollout : page.rollouts)
          dataset.append_explorer_rollout(rollout, "page_explorer");

        // Navigation tasks first (they feed the frontier), then page tasks,
        // deduplicated across the whole site.
        std::vector<core::Task> proposals;
        for (auto& task : nav.tasks)
          if (site_goal_keys.insert(core::normalize_goal(task.goal)).second)
            proposals.push_back(std::move(task));
        for (auto& task : page.tasks)
          if (site_goal_keys.insert(core::normalize_goal(task.goal)).second)
            proposals.push_back(std::move(task));
        summary.proposed_tasks += static_cast<int>(proposals.size());

        int feasible_here = 0;
        for (auto& task : proposals) {
          if (feasible_here >= run_cfg.max_feasible_tasks_per_url) break;
          auto fr = check_feasibility(task, graph, site, modules.feasibility_checker,
                                      *modules.reward, run_cfg);
          const auto task_id = dataset.append_task(task, fr.feasible);
          task.id = task_id;

          std::vector<std::string> trajectory_ids;
          for (auto& traj : fr.trajectories) {
            traj.task_id = task_id;
            trajectory_ids.push_back(dataset.append_trajectory(traj));
            ++summary.trajectories;
            if (traj.succeeded()) ++summary.success_trajectories;
          }

          for (std::size_t k = 0; k < fr.trajectories.size(); ++k) {
            const auto& traj = fr.trajectories[k];
            std::vector<core::CanonicalUrl> pages;
            if (run_cfg.discovery_mode == DiscoveryMode::success_final_only) {
              if (!traj.succeeded()) continue;
              pages.push_back(core::without_query(traj.final_url()));
            } else {
              pages = visited_pages(traj);
            }
            for (const auto& candidate : pages) {
              if (!candidate.same_origin(graph.root()) || graph.contains(candidate)) continue;
              graph.add_node(candidate);
              graph.add_edge(node, candidate, trajectory_ids[k],
                             static_cast<int>(traj.steps.size()));
              frontier.push(candidate);
            }
          }

          if (fr.feasible) {
            ++feasible_here;
            ++summary.feasible_tasks;
            auto solver_trajs =
                sample_solver_trajectories(task, run_cfg, modules, site, graph.root());
            for (auto& traj : solver_trajs) {
              traj.task_id = task_id;
              dataset.append_trajectory(traj);
              ++summary.trajectories;
              if (traj.succeeded()) ++summary.success_trajectories;
            }
          } else {
            ++summary.infeasible_tasks;
          }
        }
      } catch (const Error& err) {
        log_warning("skipping page " + node.render() + ": " + err.what());
      }
    }

    summary.explored_pages = explored;
    dataset.append_graph_snapshot(graph.snapshot(summary.site));
    result.graphs.push_back(std::move(graph));
    result.summaries.push_back(std::move(summary));
  }

  datastore::RunManifest manifest;
  manifest.config_digest = result.config_digest;
  manifest.seed = cfg.seed;
  manifest.deterministic = cfg.deterministic;
  manifest.sites = result.summaries;
  dataset.append_run_manifest(manifest);
  dataset.write_sidecar(result.config_digest);
  return result;
}

}  // namespace gobrowse::explorer
