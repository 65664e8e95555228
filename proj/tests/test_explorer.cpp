#include <algorithm>

#include "doctest.h"

#include "gobrowse/agent/oracle.hpp"
#include "gobrowse/agent/policy.hpp"
#include "gobrowse/explorer/explore.hpp"
#include "gobrowse/explorer/parallel.hpp"
#include "gobrowse/reward/reward.hpp"
#include "gobrowse/simenv/environment.hpp"
#include "support.hpp"

using namespace gobrowse;
using testsupport::load_fixture;

namespace {

core::CanonicalUrl url(const std::string& raw) { return core::canonicalize_url(raw); }

// Modules with every role played by the spec oracles. All page budgets must
// be rebound because only page_explorer_a is wired here.
explorer::Modules oracle_modules(std::shared_ptr<const simenv::SiteSpec> spec,
                                 double solver_failure = 0.0, double checker_failure = 0.0) {
  explorer::Modules m;
  m.nav_explorer = agent::oracle_nav_proposer_factory(spec);
  m.page_explorers["page_explorer_a"] = agent::oracle_page_proposer_factory(spec);
  m.feasibility_checker = agent::oracle_solver_factory(spec, "oracle", checker_failure);
  m.solvers = {{"oracle", agent::oracle_solver_factory(spec, "oracle", solver_failure)}};
  m.reward = std::make_shared<reward::GroundTruthReward>(spec);
  return m;
}

explorer::ExploreConfig oracle_config() {
  explorer::ExploreConfig cfg;
  cfg.page_explorer_step_budgets = {{"page_explorer_a", 20}};
  cfg.seed = 3;
  return cfg;
}

core::Task chain_task(int level) {
  core::Task task;
  task.goal = "What is the code word at level " + std::to_string(level) + "?";
  task.kind = core::TaskKind::information_seeking;
  task.source_url = url("http://chain.example/");
  task.proposer = "test";
  return task;
}

}  // namespace

TEST_CASE("frontier is FIFO and admits each url once per run") {
  explorer::Frontier frontier;
  CHECK(frontier.push(url("http://a.example/x")));
  CHECK(frontier.push(url("http://a.example/y")));
  CHECK_FALSE(frontier.push(url("http://a.example/x")));
  CHECK(frontier.size() == 2);
  CHECK(frontier.select_and_remove() == url("http://a.example/x"));
  CHECK_FALSE(frontier.push(url("http://a.example/x")));
  CHECK(frontier.select_and_remove() == url("http://a.example/y"));
  CHECK(frontier.empty());
  CHECK_THROWS_AS(frontier.select_and_remove(), explorer::FrontierEmpty);
}

TEST_CASE("graph edges require known endpoints") {
  explorer::SiteGraph graph(url("http://a.example/"));
  CHECK(graph.contains(url("http://a.example/")));
  graph.add_node(url("http://a.example/b"));
  graph.add_edge(url("http://a.example/"), url("http://a.example/b"), "traj-000001", 2);
  CHECK_THROWS_AS(
      graph.add_edge(url("http://a.example/"), url("http://a.example/zzz"), "traj-000002", 1),
      Error);
  CHECK(graph.nodes().size() == 2);
  CHECK(graph.edges().size() == 1);
}

TEST_CASE("graph snapshots round-trip") {
  explorer::SiteGraph graph(url("http://a.example/"));
  graph.add_node(url("http://a.example/c"));
  graph.add_node(url("http://a.example/b"));
  graph.add_edge(url("http://a.example/"), url("http://a.example/c"), "traj-000001", 4);
  graph.add_edge(url("http://a.example/c"), url("http://a.example/b"), "traj-000002", 1);

  auto snap = graph.snapshot("http://a.example");
  CHECK(snap.root == "http://a.example");
  CHECK(snap.nodes ==
        std::vector<std::string>{"http://a.example", "http://a.example/b", "http://a.example/c"});

  auto back = explorer::SiteGraph::from_snapshot(snap);
  CHECK(back.root() == graph.root());
  CHECK(back.nodes() == graph.nodes());
  REQUIRE(back.edges().size() == 2);
  CHECK(back.edges()[0].to == url("http://a.example/c"));
  CHECK(back.edges()[0].trajectory_id == "traj-000001");
  CHECK(back.edges()[0].weight == 4);
}

TEST_CASE("nav_explore harvests navigation tasks from the episode") {
  auto spec = load_fixture("shop-12.json");
  simenv::SimWebEnvironment env(spec);
  agent::ScriptedAgent emitter(
      {simenv::AddTasksToDatasetAction{{"Navigate to the Catalog page.",
                                        "Navigate to the Catalog page.", ""}},
       simenv::AddTasksToDatasetAction{{"Navigate to the Deals page."}},
       simenv::SendMsgToUserAction{"done"}},
      "emitter");
  auto result = explorer::nav_explore(env, spec->root_url, emitter, 15);
  REQUIRE(result.tasks.size() == 2);
  CHECK(result.tasks[0].goal == "Navigate to the Catalog page.");
  CHECK(result.tasks[0].kind == core::TaskKind::site_navigation);
  CHECK(result.tasks[0].source_url == spec->root_url);
  CHECK(result.tasks[0].proposer == "emitter");
  CHECK(result.tasks[1].goal == "Navigate to the Deals page.");
  CHECK(result.rollout.sampler == "emitter");
  CHECK(result.rollout.steps.size() == 3);

  agent::ScriptedAgent quiet({simenv::SendMsgToUserAction{"nothing"}}, "quiet");
  auto none = explorer::nav_explore(env, spec->root_url, quiet, 15);
  CHECK(none.tasks.empty());
}

TEST_CASE("page_explore unions proposers and reads kind tags") {
  auto spec = load_fixture("shop-12.json");
  auto site = explorer::make_site(spec);
  agent::ScriptedAgent a(
      {simenv::AddTasksToDatasetAction{{"What is the price of the camera?",
                                        "site_navigation: Navigate to the Deals page."}},
       simenv::SendMsgToUserAction{"done"}},
      "proposer-a");
  agent::ScriptedAgent b(
      {simenv::AddTasksToDatasetAction{{"what is  the price of the CAMERA?",
                                        "content_modification: Set the quantity to 3."}},
       simenv::SendMsgToUserAction{"done"}},
      "proposer-b");
  auto result = explorer::page_explore(site, spec->root_url, {{&a, 20}, {&b, 10}});
  REQUIRE(result.rollouts.size() == 2);
  REQUIRE(result.tasks.size() == 3);
  CHECK(result.tasks[0].goal == "What is the price of the camera?");
  CHECK(result.tasks[0].kind == core::TaskKind::information_seeking);
  CHECK(result.tasks[0].proposer == "proposer-a");
  CHECK(result.tasks[1].goal == "Navigate to the Deals page.");
  CHECK(result.tasks[1].kind == core::TaskKind::site_navigation);
  CHECK(result.tasks[2].goal == "Set the quantity to 3.");
  CHECK(result.tasks[2].kind == core::TaskKind::content_modification);
  CHECK(result.tasks[2].proposer == "proposer-b");
}

TEST_CASE("feasibility stops on the first success") {
  auto spec = load_fixture("deep-chain-6.json");
  auto site = explorer::make_site(spec);
  explorer::SiteGraph graph(url("http://chain.example/"));
  auto reward = reward::GroundTruthReward(spec);
  auto cfg = oracle_config();

  auto result = explorer::check_feasibility(chain_task(2), graph, site,
                                            agent::oracle_solver_factory(spec), reward, cfg);
  CHECK(result.feasible);
  REQUIRE(result.trajectories.size() == 1);
  CHECK(result.trajectories[0].reward == 1);
  CHECK(result.trajectories[0].prefixed);
  CHECK(result.trajectories[0].task_id.empty());
}

TEST_CASE("an always-failing checker burns every try") {
  auto spec = load_fixture("deep-chain-6.json");
  auto site = explorer::make_site(spec);
  explorer::SiteGraph graph(url("http://chain.example/"));
  auto reward = reward::GroundTruthReward(spec);
  auto cfg = oracle_config();

  auto result = explorer::check_feasibility(
      chain_task(2), graph, site, agent::oracle_solver_factory(spec, "oracle", 1.0), reward, cfg);
  CHECK_FALSE(result.feasible);
  REQUIRE(result.trajectories.size() == 3);
  for (const auto& traj : result.trajectories) {
    CHECK(traj.reward == 0);
    CHECK(traj.steps.size() == 1);
  }
}

TEST_CASE("a retry that succeeds keeps the failed attempts before it") {
  auto spec = load_fixture("deep-chain-6.json");
  auto site = explorer::make_site(spec);
  explorer::SiteGraph graph(url("http://chain.example/"));
  auto reward = reward::GroundTruthReward(spec);
  auto cfg = oracle_config();

  agent::PolicyFactory flaky = [&spec](const agent::PolicyContext& ctx) {
    if (ctx.sample_index == 0)
      return std::make_unique<agent::ScriptedAgent>(
          std::vector<simenv::Action>{simenv::ReportInfeasibleAction{"cannot"}}, "flaky");
    return std::make_unique<agent::ScriptedAgent>(
        agent::oracle_script(*spec, ctx.task.goal, ctx.start_url), "flaky");
  };
  auto result =
      explorer::check_feasibility(chain_task(2), graph, site, flaky, reward, cfg);
  CHECK(result.feasible);
  REQUIRE(result.trajectories.size() == 2);
  CHECK(result.trajectories[0].reward == 0);
  CHECK(result.trajectories[1].reward == 1);
}

TEST_CASE("discovery reports visited pages missing from the graph") {
  auto spec = load_fixture("deep-chain-6.json");
  auto site = explorer::make_site(spec);
  explorer::SiteGraph graph(url("http://chain.example/"));
  auto reward = reward::GroundTruthReward(spec);
  auto cfg = oracle_config();

  auto all = explorer::check_feasibility(chain_task(2), graph, site,
                                         agent::oracle_solver_factory(spec), reward, cfg);
  CHECK(all.discovered ==
        std::set<core::CanonicalUrl>{url("http://chain.example/d1"),
                                     url("http://chain.example/d1/d2")});

  cfg.discovery_mode = explorer::DiscoveryMode::success_final_only;
  auto final_only = explorer::check_feasibility(chain_task(2), graph, site,
                                               agent::oracle_solver_factory(spec), reward, cfg);
  CHECK(final_only.discovered ==
        std::set<core::CanonicalUrl>{url("http://chain.example/d1/d2")});

  graph.add_node(url("http://chain.example/d1"));
  cfg.discovery_mode = explorer::DiscoveryMode::all_visited;
  auto rest = explorer::check_feasibility(chain_task(2), graph, site,
                                          agent::oracle_solver_factory(spec), reward, cfg);
  CHECK(rest.discovered == std::set<core::CanonicalUrl>{url("http://chain.example/d1/d2")});
}

TEST_CASE("solver sampling covers the prefixed and unprefixed grid") {
  auto spec = load_fixture("deep-chain-6.json");
  auto site = explorer::make_site(spec);
  auto cfg = oracle_config();
  auto modules = oracle_modules(spec);

  auto task = chain_task(2);
  task.source_url = url("http://chain.example/d1/d2");
  auto trajectories = explorer::sample_solver_trajectories(task, cfg, modules, site,
                                                           url("http://chain.example/"));
  REQUIRE(trajectories.size() == 4);
  CHECK(trajectories[0].prefixed);
  CHECK(trajectories[1].prefixed);
  CHECK_FALSE(trajectories[2].prefixed);
  CHECK_FALSE(trajectories[3].prefixed);
  for (const auto& traj : trajectories) {
    CHECK(traj.sampler == "oracle");
    CHECK(traj.reward == 1);
    CHECK(static_cast<int>(traj.steps.size()) <= cfg.solver_horizon);
  }
  CHECK(trajectories[0].start_url == task.source_url);
  CHECK(trajectories[0].steps.size() == 1);
  CHECK(trajectories[2].start_url == url("http://chain.example/"));
  CHECK(trajectories[2].steps.size() == 3);
}

TEST_CASE("ordered_parallel preserves order and rethrows the first failure") {
  auto squares = explorer::ordered_parallel(64, 8, [](int i) { return i * i; });
  REQUIRE(squares.size() == 64);
  for (int i = 0; i < 64; ++i) CHECK(squares[i] == i * i);

  CHECK_THROWS_WITH(explorer::ordered_parallel(16, 4,
                                               [](int i) {
                                                 if (i == 5) throw Error("boom 5");
                                                 if (i == 11) throw Error("boom 11");
                                                 return i;
                                               }),
                    "boom 5");
}

TEST_CASE("the oracle walk of the shop covers exactly the reachable closure") {
  auto spec = load_fixture("shop-12.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  auto cfg = oracle_config();
  auto result = explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec), cfg,
                                        dataset);

  REQUIRE(result.graphs.size() == 1);
  auto reachable = spec->reachable_urls();
  std::set<core::CanonicalUrl> expected(reachable.begin(), reachable.end());
  CHECK(expected.size() == 12);
  CHECK(result.graphs[0].nodes() == expected);

  REQUIRE(result.summaries.size() == 1);
  const auto& summary = result.summaries[0];
  CHECK(summary.site == "http://shop.example");
  CHECK(summary.explored_pages == 12);
  CHECK(summary.proposed_tasks == summary.feasible_tasks + summary.infeasible_tasks);
  CHECK(summary.infeasible_tasks == 0);
  CHECK(summary.trajectories ==
        summary.feasible_tasks + 4 * summary.feasible_tasks);
  CHECK(summary.success_trajectories == summary.trajectories);

  for (const auto& edge : result.graphs[0].edges()) {
    CHECK(result.graphs[0].contains(edge.from));
    CHECK(result.graphs[0].contains(edge.to));
    CHECK(edge.trajectory_id.rfind("traj-", 0) == 0);
  }

  auto records = datastore::read_dataset(dataset.path());
  datastore::validate_referential_integrity(records);
  auto stats = datastore::compute_stats(records);
  CHECK(stats.total_trajectories == summary.trajectories);
  CHECK(stats.success_trajectories == summary.success_trajectories);

  int explorer_rollouts = 0;
  for (const auto& record : records)
    if (std::holds_alternative<datastore::ExplorerRolloutRecord>(record)) ++explorer_rollouts;
  CHECK(explorer_rollouts == 2 * summary.explored_pages);
}

TEST_CASE("the page budget caps exploration") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  auto cfg = oracle_config();
  cfg.max_pages_per_site = 3;
  auto result = explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec), cfg,
                                        dataset);
  CHECK(result.summaries[0].explored_pages == 3);
  CHECK(result.graphs[0].nodes().size() == 4);
  CHECK(result.graphs[0].contains(url("http://chain.example/d1/d2/d3")));
  CHECK_FALSE(result.graphs[0].contains(url("http://chain.example/d1/d2/d3/d4")));
}

TEST_CASE("deterministic runs repeat byte for byte") {
  auto spec = load_fixture("deep-chain-6.json");
  auto run = [&](const std::string& dirfile, testsupport::TempDir& dir) {
    datastore::Dataset dataset(dir.file(dirfile));
    auto cfg = oracle_config();
    cfg.seed = 7;
    cfg.deterministic = true;
    cfg.workers = 4;  // forced back to one by deterministic mode
    explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec, 0.3, 0.3), cfg,
                            dataset);
    dataset.write_sidecar(explorer::config_digest(cfg));
    return testsupport::read_file(dir.file(dirfile));
  };
  testsupport::TempDir d1, d2;
  auto first = run("run.jsonl", d1);
  auto second = run("run.jsonl", d2);
  CHECK(first == second);
  CHECK(!first.empty());
  CHECK(testsupport::read_file(d1.file("run.jsonl.manifest.json")) ==
        testsupport::read_file(d2.file("run.jsonl.manifest.json")));
}

TEST_CASE("parallel workers replay the serial run exactly") {
  auto spec = load_fixture("shop-12.json");
  auto run = [&](int workers, testsupport::TempDir& dir) {
    datastore::Dataset dataset(dir.file("run.jsonl"));
    auto cfg = oracle_config();
    cfg.seed = 11;
    cfg.workers = workers;
    explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec, 0.25, 0.25), cfg,
                            dataset);
    return testsupport::read_file(dir.file("run.jsonl"));
  };
  testsupport::TempDir d1, d2;
  auto serial = run(1, d1);
  auto parallel = run(4, d2);
  CHECK(serial == parallel);
  CHECK(!serial.empty());
}

TEST_CASE("a changed seed changes a failure-prone run") {
  auto spec = load_fixture("deep-chain-6.json");
  auto run = [&](std::uint64_t seed, testsupport::TempDir& dir) {
    datastore::Dataset dataset(dir.file("run.jsonl"));
    auto cfg = oracle_config();
    cfg.seed = seed;
    explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec, 0.4, 0.4), cfg,
                            dataset);
    return testsupport::read_file(dir.file("run.jsonl"));
  };
  testsupport::TempDir d1, d2;
  CHECK(run(5, d1) != run(6, d2));
}

TEST_CASE("an unbound page budget id fails loudly") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  auto cfg = oracle_config();
  cfg.page_explorer_step_budgets = {{"page_explorer_z", 20}};
  auto result = explorer::run_go_browse({explorer::make_site(spec)}, oracle_modules(spec), cfg,
                                        dataset);
  // The per-page failure is logged and skipped, so the run drains the
  // frontier without ever proposing anything.
  CHECK(result.summaries[0].proposed_tasks == 0);
  CHECK(result.graphs[0].nodes().size() == 1);
}

TEST_CASE("config digests track every knob") {
  explorer::ExploreConfig a;
  explorer::ExploreConfig b;
  CHECK(explorer::config_digest(a) == explorer::config_digest(b));
  b.max_feasible_tasks_per_url = 29;
  CHECK(explorer::config_digest(a) != explorer::config_digest(b));
  b = a;
  b.discovery_mode = explorer::DiscoveryMode::success_final_only;
  CHECK(explorer::config_digest(a) != explorer::config_digest(b));
  b = a;
  b.page_explorer_step_budgets = {{"page_explorer_a", 20}};
  CHECK(explorer::config_digest(a) != explorer::config_digest(b));
}
