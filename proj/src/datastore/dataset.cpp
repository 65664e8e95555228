#include "gobrowse/datastore/dataset.hpp"

#include <cstdio>
#include <fstream>

#include "gobrowse/agent/action_parser.hpp"
#include "gobrowse/agent/prompts.hpp"
#include "gobrowse/simenv/actions.hpp"
#include "nlohmann/json.hpp"

namespace gobrowse::datastore {

using json = nlohmann::ordered_json;

namespace {

std::string format_id(const std::string& prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", n);
  return prefix + "-" + buf;
}

json observation_to_json(const simenv::Observation& obs) {
  json j;
  j["goal"] = obs.goal;
  j["axtree"] = obs.axtree;
  j["action_history"] = obs.action_history;
  if (obs.last_action_error) j["last_action_error"] = *obs.last_action_error;
  j["url"] = obs.url.render();
  if (obs.html) j["html"] = *obs.html;
  if (obs.screenshot_ref) j["screenshot_ref"] = *obs.screenshot_ref;
  return j;
}

simenv::Observation observation_from_json(const json& j) {
  simenv::Observation obs;
  obs.goal = j.at("goal").get<std::string>();
  obs.axtree = j.at("axtree").get<std::string>();
  obs.action_history = j.at("action_history").get<std::vector<std::string>>();
  if (j.contains("last_action_error"))
    obs.last_action_error = j.at("last_action_error").get<std::string>();
  obs.url = core::canonicalize_url(j.at("url").get<std::string>());
  if (j.contains("html")) obs.html = j.at("html").get<std::string>();
  if (j.contains("screenshot_ref")) obs.screenshot_ref = j.at("screenshot_ref").get<std::string>();
  return obs;
}

json step_to_json(const core::StepRecord& step) {
  json j;
  j["index"] = step.index;
  j["observation"] = observation_to_json(step.observation);
  j["thought"] = step.thought;
  j["action"] = simenv::render_action(step.action);
  if (step.action_error) j["action_error"] = *step.action_error;
  j["url_after"] = step.url_after.render();
  return j;
}

core::StepRecord step_from_json(const json& j) {
  core::StepRecord step;
  step.index = j.at("index").get<int>();
  step.observation = observation_from_json(j.at("observation"));
  step.thought = j.at("thought").get<std::string>();
  step.action = simenv::parse_action_call(j.at("action").get<std::string>());
  if (j.contains("action_error")) step.action_error = j.at("action_error").get<std::string>();
  step.url_after = core::canonicalize_url(j.at("url_after").get<std::string>());
  return step;
}

json trajectory_to_json(const core::Trajectory& t) {
  json j;
  j["task_id"] = t.task_id;
  j["start_url"] = t.start_url.render();
  json steps = json::array();
  for (const auto& step : t.steps) steps.push_back(step_to_json(step));
  j["steps"] = std::move(steps);
  if (t.reward) j["reward"] = *t.reward;
  j["sampler"] = t.sampler;
  j["prefixed"] = t.prefixed;
  j["terminated_by"] = core::to_string(t.terminated_by);
  j["final_fields"] = t.final_fields;
  return j;
}

core::Trajectory trajectory_from_json(const json& j) {
  core::Trajectory t;
  t.task_id = j.at("task_id").get<std::string>();
  t.start_url = core::canonicalize_url(j.at("start_url").get<std::string>());
  for (const auto& step : j.at("steps")) t.steps.push_back(step_from_json(step));
  if (j.contains("reward")) t.reward = j.at("reward").get<int>();
  t.sampler = j.at("sampler").get<std::string>();
  t.prefixed = j.at("prefixed").get<bool>();
  auto reason = core::termination_reason_from_string(j.at("terminated_by").get<std::string>());
  if (!reason) throw SchemaViolation("unknown terminated_by: " + j.at("terminated_by").dump());
  t.terminated_by = *reason;
  t.final_fields = j.at("final_fields").get<std::map<std::string, std::string>>();
  return t;
}

json task_to_json(const core::Task& task) {
  json j;
  j["id"] = task.id;
  j["goal"] = task.goal;
  j["kind"] = core::to_string(task.kind);
  j["source_url"] = task.source_url.render();
  j["proposer"] = task.proposer;
  return j;
}

core::Task task_from_json(const json& j) {
  core::Task task;
  task.id = j.at("id").get<std::string>();
  task.goal = j.at("goal").get<std::string>();
  auto kind = core::task_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw SchemaViolation("unknown task kind: " + j.at("kind").dump());
  task.kind = *kind;
  task.source_url = core::canonicalize_url(j.at("source_url").get<std::string>());
  task.proposer = j.at("proposer").get<std::string>();
  return task;
}

json snapshot_to_json(const GraphSnapshot& snapshot) {
  json j;
  j["kind"] = "graph_snapshot";
  j["id"] = snapshot.id;
  j["site"] = snapshot.site;
  j["root"] = snapshot.root;
  j["nodes"] = snapshot.nodes;
  json edges = json::array();
  for (const auto& e : snapshot.edges) {
    json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    edge["trajectory_id"] = e.trajectory_id;
    edge["weight"] = e.weight;
    edges.push_back(std::move(edge));
  }
  j["edges"] = std::move(edges);
  return j;
}

json manifest_to_json(const RunManifest& manifest) {
  json j;
  j["kind"] = "run_manifest";
  j["id"] = manifest.id;
  j["config_digest"] = manifest.config_digest;
  j["seed"] = manifest.seed;
  j["deterministic"] = manifest.deterministic;
  json sites = json::array();
  for (const auto& s : manifest.sites) {
    json site;
    site["site"] = s.site;
    site["explored_pages"] = s.explored_pages;
    site["proposed_tasks"] = s.proposed_tasks;
    site["feasible_tasks"] = s.feasible_tasks;
    site["infeasible_tasks"] = s.infeasible_tasks;
    site["trajectories"] = s.trajectories;
    site["success_trajectories"] = s.success_trajectories;
    sites.push_back(std::move(site));
  }
  j["sites"] = std::move(sites);
  return j;
}

Record record_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "task") {
    TaskRecord r;
    r.id = j.at("id").get<std::string>();
    r.feasible = j.at("feasible").get<bool>();
    r.task = task_from_json(j.at("task"));
    return r;
  }
  if (kind == "trajectory") {
    TrajectoryRecord r;
    r.id = j.at("id").get<std::string>();
    r.trajectory = trajectory_from_json(j.at("trajectory"));
    return r;
  }
  if (kind == "explorer_rollout") {
    ExplorerRolloutRecord r;
    r.id = j.at("id").get<std::string>();
    r.role = j.at("role").get<std::string>();
    r.trajectory = trajectory_from_json(j.at("trajectory"));
    return r;
  }
  if (kind == "graph_snapshot") {
    GraphSnapshot r;
    r.id = j.at("id").get<std::string>();
    r.site = j.at("site").get<std::string>();
    r.root = j.at("root").get<std::string>();
    r.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
      GraphEdge edge;
      edge.from = e.at("from").get<std::string>();
      edge.to = e.at("to").get<std::string>();
      edge.trajectory_id = e.at("trajectory_id").get<std::string>();
      edge.weight = e.at("weight").get<int>();
      r.edges.push_back(std::move(edge));
    }
    return r;
  }
  if (kind == "run_manifest") {
    RunManifest r;
    r.id = j.at("id").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.deterministic = j.at("deterministic").get<bool>();
    for (const auto& s : j.at("sites")) {
      SiteSummary site;
      site.site = s.at("site").get<std::string>();
      site.explored_pages = s.at("explored_pages").get<int>();
      site.proposed_tasks = s.at("proposed_tasks").get<int>();
      site.feasible_tasks = s.at("feasible_tasks").get<int>();
      site.infeasible_tasks = s.at("infeasible_tasks").get<int>();
      site.trajectories = s.at("trajectories").get<int>();
      site.success_trajectories = s.at("success_trajectories").get<int>();
      r.sites.push_back(std::move(site));
    }
    return r;
  }
  throw SchemaViolation("unknown record kind: " + kind);
}

std::string origin_of(const core::CanonicalUrl& url) {
  core::CanonicalUrl origin = url;
  origin.path_segments.clear();
  origin.query.reset();
  origin.fragment.reset();
  return origin.render();
}

}  // namespace

Dataset::Dataset(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::trunc);
  if (!out.good()) throw Error("cannot open dataset for writing: " + path_.string());
}

// Callers hold mu_. One ostream write per record keeps lines intact under
// concurrent appends.
std::string Dataset::write_record(const std::string& id, const std::string& line) {
  std::ofstream out(path_, std::ios::app);
  out << line << "\n";
  out.flush();
  if (!out.good()) throw Error("dataset append failed: " + path_.string());
  ++records_;
  return id;
}

std::string Dataset::append_task(core::Task task, bool feasible) {
  std::lock_guard<std::mutex> lock(mu_);
  auto id = format_id("task", ++counters_["task"]);
  task.id = id;
  json j;
  j["kind"] = "task";
  j["id"] = id;
  j["feasible"] = feasible;
  j["task"] = task_to_json(task);
  write_record(id, j.dump());
  task_ids_.insert(id);
  return id;
}

std::string Dataset::append_trajectory(const core::Trajectory& trajectory) {
  std::lock_guard<std::mutex> lock(mu_);
  if (trajectory.task_id.empty() || !task_ids_.count(trajectory.task_id))
    throw SchemaViolation("trajectory references unknown task: '" + trajectory.task_id + "'");
  auto id = format_id("traj", ++counters_["traj"]);
  json j;
  j["kind"] = "trajectory";
  j["id"] = id;
  j["trajectory"] = trajectory_to_json(trajectory);
  return write_record(id, j.dump());
}

std::string Dataset::append_explorer_rollout(const core::Trajectory& trajectory,
                                             const std::string& role) {
  std::lock_guard<std::mutex> lock(mu_);
  auto id = format_id("exp", ++counters_["exp"]);
  json j;
  j["kind"] = "explorer_rollout";
  j["id"] = id;
  j["role"] = role;
  j["trajectory"] = trajectory_to_json(trajectory);
  return write_record(id, j.dump());
}

std::string Dataset::append_graph_snapshot(GraphSnapshot snapshot) {
  std::lock_guard<std::mutex> lock(mu_);
  auto id = format_id("graph", ++counters_["graph"]);
  snapshot.id = id;
  return write_record(id, snapshot_to_json(snapshot).dump());
}

std::string Dataset::append_run_manifest(RunManifest manifest) {
  std::lock_guard<std::mutex> lock(mu_);
  auto id = format_id("manifest", ++counters_["manifest"]);
  manifest.id = id;
  return write_record(id, manifest_to_json(manifest).dump());
}

std::size_t Dataset::record_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

void Dataset::write_sidecar(const std::string& config_digest) const {
  std::lock_guard<std::mutex> lock(mu_);
  json j;
  j["dataset"] = path_.filename().string();
  j["config_digest"] = config_digest;
  json counts;
  for (const auto& [prefix, n] : counters_) counts[prefix] = n;
  j["counts"] = std::move(counts);
  j["records"] = records_;
  std::ofstream out(path_.string() + ".manifest.json", std::ios::trunc);
  out << j.dump(2) << "\n";
  if (!out.good()) throw Error("cannot write sidecar manifest for " + path_.string());
}

std::vector<Record> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error("cannot open dataset: " + path.string());
  std::vector<Record> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw SchemaViolation("dataset line " + std::to_string(lineno) + " is not valid json");
    try {
      records.push_back(record_from_json(j));
    } catch (const json::exception& e) {
      throw SchemaViolation("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

void validate_referential_integrity(const std::vector<Record>& records) {
  std::set<std::string> ids;
  std::set<std::string> task_ids;
  auto claim = [&](const std::string& id) {
    if (!ids.insert(id).second) throw SchemaViolation("duplicate record id: " + id);
  };
  for (const auto& record : records) {
    if (const auto* task = std::get_if<TaskRecord>(&record)) {
      claim(task->id);
      if (task->task.id != task->id) throw SchemaViolation("task payload id mismatch: " + task->id);
      task_ids.insert(task->id);
    } else if (const auto* traj = std::get_if<TrajectoryRecord>(&record)) {
      claim(traj->id);
      if (!task_ids.count(traj->trajectory.task_id))
        throw SchemaViolation("trajectory " + traj->id + " references unknown task '" +
                              traj->trajectory.task_id + "'");
    } else if (const auto* exp = std::get_if<ExplorerRolloutRecord>(&record)) {
      claim(exp->id);
    } else if (const auto* graph = std::get_if<GraphSnapshot>(&record)) {
      claim(graph->id);
    } else if (const auto* manifest = std::get_if<RunManifest>(&record)) {
      claim(manifest->id);
    }
  }
}

DatasetStats compute_stats(const std::vector<Record>& records) {
  DatasetStats stats;
  std::set<std::string> goal_keys;
  std::map<std::string, int> success_by_sampler;
  for (const auto& record : records) {
    if (const auto* task = std::get_if<TaskRecord>(&record)) {
      goal_keys.insert(origin_of(task->task.source_url) + "\x1f" +
                       core::normalize_goal(task->task.goal));
    } else if (const auto* rec = std::get_if<TrajectoryRecord>(&record)) {
      const auto& t = rec->trajectory;
      const bool success = t.succeeded();
      const int steps = static_cast<int>(t.steps.size());
      ++stats.total_trajectories;
      stats.total_steps += steps;
      auto& site = stats.per_site[origin_of(t.start_url)];
      ++site.total;
      if (success) {
        ++stats.success_trajectories;
        stats.success_steps += steps;
        ++success_by_sampler[t.sampler];
        ++site.success;
      } else {
        ++stats.failure_trajectories;
        stats.failure_steps += steps;
        ++site.failure;
      }
    }
  }
  stats.unique_tasks = static_cast<int>(goal_keys.size());
  if (stats.success_trajectories > 0) {
    for (const auto& [sampler, n] : success_by_sampler)
      stats.sampler_success_share[sampler] = static_cast<double>(n) / stats.success_trajectories;
  }
  return stats;
}

std::size_t export_sft(const std::vector<Record>& records,
                       const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::trunc);
  if (!out.good()) throw Error("cannot open sft destination: " + destination.string());
  const auto action_doc = simenv::action_space_doc(false);
  std::size_t count = 0;
  for (const auto& record : records) {
    const auto* rec = std::get_if<TrajectoryRecord>(&record);
    if (!rec || !rec->trajectory.succeeded()) continue;
    for (const auto& step : rec->trajectory.steps) {
      json example;
      example["input"] = agent::build_prompt(step.observation, action_doc);
      example["target"] = agent::render_step_document({step.thought, step.action});
      out << example.dump() << "\n";
      ++count;
    }
  }
  out.flush();
  if (!out.good()) throw Error("sft export failed: " + destination.string());
  return count;
}

}  // namespace gobrowse::datastore
