#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gobrowse/core/errors.hpp"
#include "gobrowse/core/types.hpp"

namespace gobrowse::datastore {

struct SchemaViolation : Error {
  using Error::Error;
};

struct TaskRecord {
  std::string id;  // matches task.id
  core::Task task;
  bool feasible = false;
};

struct TrajectoryRecord {
  std::string id;
  core::Trajectory trajectory;
};

// A proposer's own interaction episode. Kept out of success/failure stats.
struct ExplorerRolloutRecord {
  std::string id;
  std::string role;  // nav_explorer | page_explorer
  core::Trajectory trajectory;
};

struct GraphEdge {
  std::string from;
  std::string to;
  std::string trajectory_id;
  int weight = 1;  // step count of the discovering trajectory

  bool operator==(const GraphEdge&) const = default;
};

struct GraphSnapshot {
  std::string id;
  std::string site;
  std::string root;
  std::vector<std::string> nodes;
  std::vector<GraphEdge> edges;
};

struct SiteSummary {
  std::string site;
  int explored_pages = 0;
  int proposed_tasks = 0;
  int feasible_tasks = 0;
  int infeasible_tasks = 0;
  int trajectories = 0;
  int success_trajectories = 0;

  bool operator==(const SiteSummary&) const = default;
};

struct RunManifest {
  std::string id;
  std::string config_digest;
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::vector<SiteSummary> sites;
};

using Record =
    std::variant<TaskRecord, TrajectoryRecord, ExplorerRolloutRecord, GraphSnapshot, RunManifest>;

// Append-only JSONL dataset. One record per line; appends are atomic per
// record under concurrent writers (single write, serialized internally).
// Trajectory records must reference a task id already appended.
class Dataset {
 public:
  // Creates or truncates the file.
  explicit Dataset(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  // Each append assigns and returns the record id. The id is also stamped
  // into the stored payload (task records additionally into task.id).
  std::string append_task(core::Task task, bool feasible);
  std::string append_trajectory(const core::Trajectory& trajectory);
  std::string append_explorer_rollout(const core::Trajectory& trajectory, const std::string& role);
  std::string append_graph_snapshot(GraphSnapshot snapshot);
  std::string append_run_manifest(RunManifest manifest);

  std::size_t record_count() const;

  // Writes "<path>.manifest.json": config digest plus per-kind counts.
  void write_sidecar(const std::string& config_digest) const;

 private:
  std::string write_record(const std::string& id, const std::string& line);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, int> counters_;
  std::set<std::string> task_ids_;
  std::size_t records_ = 0;
};

// Reads and structurally validates every record. Throws SchemaViolation on
// unparseable lines, unknown kinds, or missing fields.
std::vector<Record> read_dataset(const std::filesystem::path& path);

// Cross-record checks: unique ids, trajectories reference appended tasks.
void validate_referential_integrity(const std::vector<Record>& records);

struct DatasetStats {
  int success_trajectories = 0;
  int failure_trajectories = 0;
  int total_trajectories = 0;
  int success_steps = 0;
  int failure_steps = 0;
  int total_steps = 0;
  int unique_tasks = 0;
  // Fraction of success trajectories per sampler; empty when no successes.
  std::map<std::string, double> sampler_success_share;
  struct SiteCounts {
    int success = 0;
    int failure = 0;
    int total = 0;
  };
  std::map<std::string, SiteCounts> per_site;  // keyed by start-url origin
};

DatasetStats compute_stats(const std::vector<Record>& records);

// One JSONL training example per step of every reward-1 trajectory:
// {"input": full agent prompt for the step, "target": thought+action document}.
// Returns the example count.
std::size_t export_sft(const std::vector<Record>& records, const std::filesystem::path& destination);

}  // namespace gobrowse::datastore
