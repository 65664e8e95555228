#include "gobrowse/agent/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "gobrowse/core/errors.hpp"

namespace gobrowse::agent {

namespace {

struct ClickEdge {
  core::CanonicalUrl to;
  std::string elem;
};

std::vector<ClickEdge> click_edges(const simenv::SiteSpec& spec, const core::CanonicalUrl& page) {
  std::vector<ClickEdge> edges;
  auto resolved = spec.resolve(page);
  if (!resolved) return edges;
  for (const auto& elem : resolved->entry->page.elements) {
    if (elem.target) {
      auto concrete = simenv::substitute_bindings(*elem.target, resolved->bindings);
      if (concrete.find('{') != std::string::npos) continue;
      core::CanonicalUrl target;
      try {
        target = spec.absolute(concrete);
      } catch (const MalformedUrl&) {
        continue;
      }
      if (spec.is_external(target)) continue;
      edges.push_back({core::without_query(target), elem.id});
    } else if (elem.transition) {
      edges.push_back({core::without_query(spec.absolute(elem.transition->path)), elem.id});
    }
  }
  return edges;
}

}  // namespace

std::optional<std::vector<simenv::Action>> find_click_path(const simenv::SiteSpec& spec,
                                                           const core::CanonicalUrl& from,
                                                           const core::CanonicalUrl& to) {
  auto src = core::without_query(from);
  auto src_key = src.render();
  auto dst_key = core::without_query(to).render();
  if (src_key == dst_key) return std::vector<simenv::Action>{};

  std::map<std::string, std::pair<std::string, std::string>> parent;  // url -> (prev url, elem)
  std::map<std::string, core::CanonicalUrl> by_key;
  std::deque<std::string> queue;
  by_key[src_key] = src;
  parent[src_key] = {"", ""};
  queue.push_back(src_key);
  while (!queue.empty()) {
    auto key = queue.front();
    queue.pop_front();
    for (const auto& edge : click_edges(spec, by_key[key])) {
      auto edge_key = edge.to.render();
      if (parent.count(edge_key)) continue;
      parent[edge_key] = {key, edge.elem};
      by_key[edge_key] = edge.to;
      if (edge_key == dst_key) {
        std::vector<simenv::Action> path;
        for (auto cur = edge_key; cur != src_key; cur = parent[cur].first)
          path.push_back(simenv::ClickAction{parent[cur].second});
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(edge_key);
    }
  }
  return std::nullopt;
}

std::vector<simenv::Action> oracle_script(const simenv::SiteSpec& spec, const std::string& goal,
                                          const core::CanonicalUrl& start) {
  const std::vector<simenv::Action> give_up{
      simenv::ReportInfeasibleAction{"no oracle route to this goal"}};

  if (const auto* gt = spec.find_ground_truth(goal)) {
    if (gt->source_path && !gt->local_path.empty()) {
      auto source = spec.absolute(*gt->source_path);
      if (auto path = find_click_path(spec, start, source)) {
        auto script = *path;
        script.insert(script.end(), gt->local_path.begin(), gt->local_path.end());
        return script;
      }
    }
    if (core::without_query(start) == core::without_query(spec.root_url) &&
        !gt->oracle_path.empty())
      return gt->oracle_path;
    return give_up;
  }

  if (auto label = simenv::parse_nav_goal(goal)) {
    // Breadth-first over concrete pages, stopped at the nearest one carrying
    // the labeled element. Templated pages are reachable here through their
    // concrete instances, which a scan of the page declarations cannot see.
    auto src = core::without_query(start);
    auto src_key = src.render();
    std::map<std::string, std::pair<std::string, std::string>> parent;
    std::map<std::string, core::CanonicalUrl> by_key;
    std::deque<std::string> queue;
    by_key[src_key] = src;
    parent[src_key] = {"", ""};
    queue.push_back(src_key);
    while (!queue.empty()) {
      auto key = queue.front();
      queue.pop_front();
      const auto page = by_key[key];
      if (auto resolved = spec.resolve(page)) {
        for (const auto& elem : resolved->entry->page.elements) {
          if (elem.label != *label) continue;
          bool clickable = false;
          if (elem.target) {
            auto concrete = simenv::substitute_bindings(*elem.target, resolved->bindings);
            if (concrete.find('{') != std::string::npos) continue;
            try {
              clickable = !spec.is_external(spec.absolute(concrete));
            } catch (const MalformedUrl&) {
              clickable = false;
            }
          } else if (elem.transition) {
            clickable = true;
          }
          if (!clickable) continue;
          std::vector<simenv::Action> script;
          for (auto cur = key; cur != src_key; cur = parent[cur].first)
            script.push_back(simenv::ClickAction{parent[cur].second});
          std::reverse(script.begin(), script.end());
          script.push_back(simenv::ClickAction{elem.id});
          script.push_back(simenv::SendMsgToUserAction{"I have finished navigating to the " +
                                                       *label + " page."});
          return script;
        }
      }
      for (const auto& edge : click_edges(spec, page)) {
        auto edge_key = edge.to.render();
        if (parent.count(edge_key)) continue;
        parent[edge_key] = {key, edge.elem};
        by_key[edge_key] = edge.to;
        queue.push_back(edge_key);
      }
    }
  }

  return give_up;
}

PolicyFactory oracle_solver_factory(std::shared_ptr<const simenv::SiteSpec> spec, std::string name,
                                    double failure_probability) {
  return [spec = std::move(spec), name = std::move(name),
          failure_probability](const PolicyContext& ctx) {
    auto script = oracle_script(*spec, ctx.task.goal, ctx.start_url);
    return std::make_unique<ScriptedAgent>(std::move(script), name, failure_probability, ctx.seed);
  };
}

PolicyFactory oracle_nav_proposer_factory(std::shared_ptr<const simenv::SiteSpec> spec) {
  return [spec = std::move(spec)](const PolicyContext& ctx) {
    std::vector<std::string> goals;
    std::set<std::string> seen;
    if (auto resolved = spec->resolve(ctx.start_url)) {
      for (const auto& elem : resolved->entry->page.elements) {
        bool internal = false;
        if (elem.target) {
          auto concrete = simenv::substitute_bindings(*elem.target, resolved->bindings);
          if (concrete.find('{') == std::string::npos) {
            try {
              internal = !spec->is_external(spec->absolute(concrete));
            } catch (const MalformedUrl&) {
              internal = false;
            }
          }
        } else if (elem.transition) {
          internal = true;
        }
        if (!internal || elem.label.empty()) continue;
        auto goal = simenv::make_nav_goal(elem.label);
        if (seen.insert(core::normalize_goal(goal)).second) goals.push_back(std::move(goal));
      }
    }
    std::vector<simenv::Action> script;
    if (!goals.empty()) script.push_back(simenv::AddTasksToDatasetAction{std::move(goals)});
    script.push_back(simenv::SendMsgToUserAction{"I have finished exploring this page."});
    return std::make_unique<ScriptedAgent>(std::move(script), "oracle-nav");
  };
}

PolicyFactory oracle_page_proposer_factory(std::shared_ptr<const simenv::SiteSpec> spec) {
  return [spec = std::move(spec)](const PolicyContext& ctx) {
    auto node = core::without_query(ctx.start_url);
    std::vector<std::string> goals;
    for (const auto& task : spec->ground_truth_tasks) {
      if (!task.source_path) continue;
      if (core::without_query(spec->absolute(*task.source_path)) == node)
        goals.push_back(task.goal);
    }
    std::vector<simenv::Action> script;
    if (!goals.empty()) script.push_back(simenv::AddTasksToDatasetAction{std::move(goals)});
    script.push_back(simenv::SendMsgToUserAction{"I have finished exploring this page."});
    return std::make_unique<ScriptedAgent>(std::move(script), "oracle-page");
  };
}

}  // namespace gobrowse::agent
