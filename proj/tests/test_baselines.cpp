#include <map>

#include "doctest.h"

#include "gobrowse/agent/oracle.hpp"
#include "gobrowse/agent/rollout.hpp"
#include "gobrowse/baselines/baselines.hpp"
#include "gobrowse/simenv/environment.hpp"
#include "support.hpp"

using namespace gobrowse;
using testsupport::load_fixture;

namespace {

core::Trajectory shop_walk() {
  auto spec = load_fixture("shop-12.json");
  simenv::SimWebEnvironment env(spec);
  agent::ScriptedAgent policy({simenv::ClickAction{"nav_catalog"},
                               simenv::ClickAction{"cat_electronics"},
                               simenv::SendMsgToUserAction{"done"}},
                              "walker");
  agent::RolloutConfig cfg{10, "look around", spec->root_url, 0};
  return agent::rollout(policy, env, cfg);
}

struct FixedLabeler final : baselines::Labeler {
  std::vector<baselines::Label> labels;
  std::vector<baselines::Label> label(const core::Trajectory&) override { return labels; }
};

agent::PolicyFactory scripted_factory(std::vector<simenv::Action> script,
                                      std::string name = "scripted") {
  return [script = std::move(script), name = std::move(name)](const agent::PolicyContext&) {
    return std::make_unique<agent::ScriptedAgent>(script, name);
  };
}

agent::PolicyFactory proposer_factory(std::vector<std::string> goals) {
  std::vector<simenv::Action> script;
  script.push_back(simenv::AddTasksToDatasetAction{std::move(goals)});
  script.push_back(simenv::SendMsgToUserAction{"I have finished exploring this page."});
  return scripted_factory(std::move(script), "proposer");
}

}  // namespace

TEST_CASE("scripted labeler fires once per visited page") {
  auto walk = shop_walk();
  baselines::ScriptedLabeler labeler({
      {"http://shop.example/catalog", "Navigate to the Catalog page."},
      {"http://shop.example/catalog/electronics", "Browse the electronics section."},
  });
  auto labels = labeler.label(walk);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].goal == "Navigate to the Catalog page.");
  CHECK(labels[0].end_step == 0);
  CHECK(labels[1].goal == "Browse the electronics section.");
  CHECK(labels[1].end_step == 1);

  baselines::ScriptedLabeler other(
      std::map<std::string, std::string>{{"http://shop.example/deals", "Check the deals."}});
  CHECK(other.label(walk).empty());
}

TEST_CASE("the labeler prompt renders the session and the reply contract") {
  auto walk = shop_walk();
  walk.steps[1].action_error = "nothing happened";
  auto prompt = baselines::build_labeler_prompt(walk, 8);
  CHECK(prompt.find("Start URL: http://shop.example\n") != std::string::npos);
  CHECK(prompt.find("Step 0: click('nav_catalog') -> http://shop.example/catalog\n") !=
        std::string::npos);
  CHECK(prompt.find("Step 1: click('cat_electronics') -> "
                    "http://shop.example/catalog/electronics (failed: nothing happened)\n") !=
        std::string::npos);
  CHECK(prompt.find("Step 2: send_msg_to_user('done')") != std::string::npos);
  CHECK(prompt.find("{\"tasks\": [{\"task\": \"<instruction>\", \"end_step\": <step index>}]}") !=
        std::string::npos);
  CHECK(prompt.find("List at most 8 tasks.") != std::string::npos);
}

TEST_CASE("llm labeler parses the reply and drops bad entries") {
  auto walk = shop_walk();
  auto provider = std::make_shared<testsupport::FakeProvider>(
      "Sure, here are the labels.\n"
      "{\"tasks\": [{\"task\": \"Open the catalog.\", \"end_step\": 0},"
      " {\"task\": \"\", \"end_step\": 1},"
      " {\"task\": \"Out of range.\", \"end_step\": 9},"
      " {\"task\": \"Negative.\", \"end_step\": -2},"
      " {\"task\": \"Browse electronics.\", \"end_step\": 1}]}");
  baselines::LlmLabelerConfig cfg;
  cfg.model_id = "labeler-model";
  cfg.temperature = 0.2;
  baselines::LlmLabeler labeler(provider, cfg);
  auto labels = labeler.label(walk);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].goal == "Open the catalog.");
  CHECK(labels[0].end_step == 0);
  CHECK(labels[1].goal == "Browse electronics.");
  CHECK(labels[1].end_step == 1);

  REQUIRE(provider->calls.size() == 1);
  const auto& request = provider->calls[0];
  REQUIRE(request.messages.size() == 1);
  CHECK(request.messages[0].role == llm::Role::user);
  CHECK(request.model_id == "labeler-model");
  CHECK(request.temperature == 0.2);

  baselines::LlmLabeler garbage(std::make_shared<testsupport::FakeProvider>("no json here"));
  CHECK(garbage.label(walk).empty());

  auto counting = std::make_shared<testsupport::FakeProvider>("{\"tasks\": []}");
  baselines::LlmLabeler idle(counting);
  core::Trajectory empty;
  empty.start_url = core::canonicalize_url("http://shop.example/");
  CHECK(idle.label(empty).empty());
  CHECK(counting->calls.empty());
}

TEST_CASE("llm labeler caps the number of labels") {
  auto walk = shop_walk();
  std::string reply = "{\"tasks\": [";
  for (int i = 0; i < 6; ++i) {
    if (i) reply += ", ";
    reply += "{\"task\": \"Task " + std::to_string(i) + ".\", \"end_step\": 0}";
  }
  reply += "]}";
  baselines::LlmLabelerConfig cfg;
  cfg.max_labels = 4;
  baselines::LlmLabeler labeler(std::make_shared<testsupport::FakeProvider>(reply), cfg);
  CHECK(labeler.label(walk).size() == 4);
}

TEST_CASE("zero episodes produce an empty dataset") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  FixedLabeler labeler;
  baselines::InteractionFirstConfig cfg;
  cfg.n_episodes = 0;
  auto result = baselines::run_interaction_first(explorer::make_site(spec), scripted_factory({}),
                                                 labeler, cfg, dataset);
  CHECK(result.episodes == 0);
  CHECK(result.labels == 0);
  CHECK(dataset.record_count() == 0);
}

TEST_CASE("a labeled walk persists one pair per label") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  baselines::ScriptedLabeler labeler({
      {"http://chain.example/d1", "Visit level 1."},
      {"http://chain.example/d1/d2", "Visit level 2."},
  });
  baselines::InteractionFirstConfig cfg;
  cfg.n_episodes = 1;
  auto result = baselines::run_interaction_first(
      explorer::make_site(spec),
      scripted_factory({simenv::ClickAction{"lvl1"}, simenv::ClickAction{"lvl2"},
                        simenv::SendMsgToUserAction{"done"}},
                       "walker"),
      labeler, cfg, dataset);
  CHECK(result.episodes == 1);
  CHECK(result.labels == 2);

  auto records = datastore::read_dataset(dataset.path());
  datastore::validate_referential_integrity(records);
  int rollouts = 0, tasks = 0, trajectories = 0;
  for (const auto& record : records) {
    if (std::holds_alternative<datastore::ExplorerRolloutRecord>(record)) {
      ++rollouts;
      CHECK(std::get<datastore::ExplorerRolloutRecord>(record).role == "interaction_explorer");
    }
    if (const auto* task = std::get_if<datastore::TaskRecord>(&record)) {
      ++tasks;
      CHECK(task->task.proposer == "labeler");
      CHECK(task->feasible);
    }
    if (const auto* traj = std::get_if<datastore::TrajectoryRecord>(&record)) {
      ++trajectories;
      CHECK(traj->trajectory.reward == 1);
      CHECK(traj->trajectory.sampler == "walker");
      CHECK_FALSE(traj->trajectory.prefixed);
    }
  }
  CHECK(rollouts == 1);
  CHECK(tasks == 2);
  CHECK(trajectories == 2);

  const auto& first = std::get<datastore::TrajectoryRecord>(records[2]).trajectory;
  CHECK(first.steps.size() == 1);
  CHECK(first.terminated_by == core::TerminationReason::horizon);
  const auto& second = std::get<datastore::TrajectoryRecord>(records[4]).trajectory;
  CHECK(second.steps.size() == 2);
  CHECK(second.terminated_by == core::TerminationReason::horizon);
}

TEST_CASE("five identical episodes duplicate every label five times") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  baselines::ScriptedLabeler labeler({
      {"http://chain.example/d1", "Visit level 1."},
      {"http://chain.example/d1/d2", "Visit level 2."},
  });
  baselines::InteractionFirstConfig cfg;
  cfg.n_episodes = 5;
  auto result = baselines::run_interaction_first(
      explorer::make_site(spec),
      scripted_factory({simenv::ClickAction{"lvl1"}, simenv::ClickAction{"lvl2"},
                        simenv::SendMsgToUserAction{"done"}}),
      labeler, cfg, dataset);
  CHECK(result.labels == 10);

  std::map<std::string, int> goal_counts;
  for (const auto& record : datastore::read_dataset(dataset.path()))
    if (const auto* task = std::get_if<datastore::TaskRecord>(&record))
      ++goal_counts[task->task.goal];
  REQUIRE(goal_counts.size() == 2);
  CHECK(goal_counts.at("Visit level 1.") == 5);
  CHECK(goal_counts.at("Visit level 2.") == 5);
}

TEST_CASE("checkable labels are re-scored against ground truth") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  FixedLabeler labeler;
  labeler.labels = {
      {"What is the code word at level 1?", 1},   // message sent at step 1
      {"What is the code word at level 2?", 0},   // never answered
      {"Navigate to the Level 1 page.", 0},       // prefix ends on /d1
      {"Navigate to the Level 2 page.", 0},       // prefix ends on /d1, not /d1/d2
      {"Wander around the site.", 0},             // unverifiable; claim stands
  };
  baselines::InteractionFirstConfig cfg;
  auto result = baselines::run_interaction_first(
      explorer::make_site(spec),
      scripted_factory({simenv::ClickAction{"lvl1"},
                        simenv::SendMsgToUserAction{"I found ember-1."}}),
      labeler, cfg, dataset);
  CHECK(result.labels == 5);

  std::map<std::string, int> reward_by_goal;
  std::map<std::string, bool> feasible_by_goal;
  std::map<std::string, std::string> goal_by_id;
  for (const auto& record : datastore::read_dataset(dataset.path())) {
    if (const auto* task = std::get_if<datastore::TaskRecord>(&record)) {
      goal_by_id[task->id] = task->task.goal;
      feasible_by_goal[task->task.goal] = task->feasible;
    }
    if (const auto* traj = std::get_if<datastore::TrajectoryRecord>(&record))
      reward_by_goal[goal_by_id.at(traj->trajectory.task_id)] = *traj->trajectory.reward;
  }
  CHECK(reward_by_goal.at("What is the code word at level 1?") == 1);
  CHECK(reward_by_goal.at("What is the code word at level 2?") == 0);
  CHECK(reward_by_goal.at("Navigate to the Level 1 page.") == 1);
  CHECK(reward_by_goal.at("Navigate to the Level 2 page.") == 0);
  CHECK(reward_by_goal.at("Wander around the site.") == 1);
  CHECK_FALSE(feasible_by_goal.at("What is the code word at level 2?"));
  CHECK(feasible_by_goal.at("Wander around the site."));
}

TEST_CASE("prefix replay rebuilds form state for state checkers") {
  auto spec = load_fixture("shop-12.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  FixedLabeler labeler;
  labeler.labels = {{"Update the profile display name to Casey.", 2}};
  baselines::InteractionFirstConfig cfg;
  auto result = baselines::run_interaction_first(
      explorer::make_site(spec),
      scripted_factory({simenv::ClickAction{"nav_account"}, simenv::ClickAction{"acct_profile"},
                        simenv::FillAction{"display_name", "Casey"},
                        simenv::SendMsgToUserAction{"done"}}),
      labeler, cfg, dataset);
  CHECK(result.labels == 1);
  for (const auto& record : datastore::read_dataset(dataset.path()))
    if (const auto* traj = std::get_if<datastore::TrajectoryRecord>(&record)) {
      CHECK(*traj->trajectory.reward == 1);
      CHECK(traj->trajectory.final_fields.at("display_name") == "Casey");
      CHECK(traj->trajectory.steps.size() == 3);
    }
}

TEST_CASE("malformed labels are dropped at the boundary") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  FixedLabeler labeler;
  labeler.labels = {{"", 0}, {"Past the end.", 7}, {"Before the start.", -1}, {"Fine.", 0}};
  baselines::InteractionFirstConfig cfg;
  auto result = baselines::run_interaction_first(
      explorer::make_site(spec),
      scripted_factory({simenv::ClickAction{"lvl1"}, simenv::SendMsgToUserAction{"done"}}),
      labeler, cfg, dataset);
  CHECK(result.labels == 1);
}

TEST_CASE("a silent proposer yields an empty instruction-first dataset") {
  auto spec = load_fixture("shop-12.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  reward::GroundTruthReward reward(spec);
  baselines::InstructionFirstConfig cfg;
  auto result = baselines::run_instruction_first(
      explorer::make_site(spec), proposer_factory({}),
      agent::oracle_solver_factory(spec), reward, cfg, dataset);
  CHECK(result.proposed == 0);
  CHECK(result.kept == 0);

  auto records = datastore::read_dataset(dataset.path());
  REQUIRE(records.size() == 1);
  CHECK(std::get<datastore::ExplorerRolloutRecord>(records[0]).role == "page_explorer");
}

TEST_CASE("instruction-first keeps exactly the solved proposals") {
  auto spec = load_fixture("shop-12.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  reward::GroundTruthReward reward(spec);
  baselines::InstructionFirstConfig cfg;
  auto result = baselines::run_instruction_first(
      explorer::make_site(spec),
      proposer_factory({"site_navigation: Navigate to the Catalog page.",
                        "site_navigation: Navigate to the Deals page.",
                        "Search the store for camera.", "What is the moon made of?"}),
      agent::oracle_solver_factory(spec), reward, cfg, dataset);
  CHECK(result.proposed == 4);
  CHECK(result.kept == 3);

  auto records = datastore::read_dataset(dataset.path());
  datastore::validate_referential_integrity(records);
  int tasks = 0, trajectories = 0;
  for (const auto& record : records) {
    if (const auto* task = std::get_if<datastore::TaskRecord>(&record)) {
      ++tasks;
      CHECK(task->feasible);
      CHECK(task->task.proposer == "page_explorer");
      CHECK(task->task.source_url == core::canonicalize_url("http://shop.example/"));
    }
    if (const auto* traj = std::get_if<datastore::TrajectoryRecord>(&record)) {
      ++trajectories;
      CHECK(*traj->trajectory.reward == 1);
      CHECK_FALSE(traj->trajectory.prefixed);
      CHECK(traj->trajectory.start_url == core::canonicalize_url("http://shop.example/"));
    }
  }
  CHECK(tasks == 3);
  CHECK(trajectories == 3);
}

TEST_CASE("tasks beyond the horizon are filtered out") {
  auto spec = load_fixture("deep-chain-6.json");
  testsupport::TempDir dir;
  datastore::Dataset dataset(dir.file("run.jsonl"));
  reward::GroundTruthReward reward(spec);
  baselines::InstructionFirstConfig cfg;
  cfg.horizon = 3;
  auto result = baselines::run_instruction_first(
      explorer::make_site(spec),
      proposer_factory({"What is the code word at level 1?", "What is the code word at level 5?"}),
      agent::oracle_solver_factory(spec), reward, cfg, dataset);
  CHECK(result.proposed == 2);
  CHECK(result.kept == 1);
  for (const auto& record : datastore::read_dataset(dataset.path()))
    if (const auto* task = std::get_if<datastore::TaskRecord>(&record))
      CHECK(task->task.goal == "What is the code word at level 1?");
}

TEST_CASE("parallel baseline runs match the serial bytes") {
  auto spec = load_fixture("deep-chain-6.json");
  auto run = [&](int workers, testsupport::TempDir& dir) {
    datastore::Dataset dataset(dir.file("run.jsonl"));
    baselines::ScriptedLabeler labeler(
        std::map<std::string, std::string>{{"http://chain.example/d1", "Visit level 1."}});
    baselines::InteractionFirstConfig cfg;
    cfg.n_episodes = 6;
    cfg.workers = workers;
    cfg.seed = 9;
    baselines::run_interaction_first(
        explorer::make_site(spec),
        [](const agent::PolicyContext& ctx) {
          return std::make_unique<agent::ScriptedAgent>(
              std::vector<simenv::Action>{simenv::ClickAction{"lvl1"},
                                          simenv::SendMsgToUserAction{"done"}},
              "walker", 0.3, ctx.seed);
        },
        labeler, cfg, dataset);
    return testsupport::read_file(dir.file("run.jsonl"));
  };
  testsupport::TempDir d1, d2;
  auto serial = run(1, d1);
  auto parallel = run(4, d2);
  CHECK(serial == parallel);
  CHECK(!serial.empty());
}
