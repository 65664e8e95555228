#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gobrowse/core/types.hpp"
#include "gobrowse/core/url.hpp"
#include "gobrowse/datastore/dataset.hpp"
#include "gobrowse/explorer/explore.hpp"
#include "gobrowse/llm/client.hpp"

namespace gobrowse::analysis {

// Convenience extractors over a loaded dataset.
std::vector<core::Task> tasks_of(const std::vector<datastore::Record>& records);
std::vector<core::Trajectory> trajectories_of(const std::vector<datastore::Record>& records);

// Deepest point a trajectory reached, as url_path_depth over the URLs after
// each step. An empty trajectory reports the depth of its start URL.
int max_path_depth(const core::Trajectory& trajectory);
// Depth of the URL the trajectory ended on: the alternate reading.
int final_path_depth(const core::Trajectory& trajectory);

enum class DepthMode { max_over_steps, final_url };

struct DepthReport {
  std::string subset;  // all | only_a_success | only_b_success
  std::map<int, int> histogram;
};

DepthReport depth_histogram(const std::vector<core::Trajectory>& trajectories, std::string subset,
                            DepthMode mode = DepthMode::max_over_steps);

// Depth histograms of dataset A's task trajectories under the three subsets:
// every trajectory, trajectories of goals solved in A but not B, and
// trajectories of goals solved in B but not A. A goal counts as solved when
// the dataset holds at least one reward-1 trajectory for it. Call again with
// the arguments swapped for B's side of the comparison.
std::vector<DepthReport> depth_reports(const std::vector<datastore::Record>& a,
                                       const std::vector<datastore::Record>& b,
                                       DepthMode mode = DepthMode::max_over_steps);

// Shortest distance from the graph root to every reachable node, where an
// edge costs the step count of the trajectory behind it. Unreachable nodes
// are left out.
std::map<core::CanonicalUrl, int> node_depths(const explorer::SiteGraph& graph);

enum class GroupBy { prefixed, sampler };

struct SuccessCell {
  int success = 0;
  int total = 0;
  double rate() const { return total > 0 ? static_cast<double>(success) / total : 0.0; }
};

// Buckets are node depths floored to integers and capped: anything at or
// beyond max_bucket lands in one overflow bin. kUnknownBucket collects tasks
// whose source page the graph never reached.
constexpr int kUnknownBucket = -1;

struct SuccessByDepthConfig {
  int max_bucket = 8;
};

struct SuccessByDepthTable {
  GroupBy group_by = GroupBy::prefixed;
  int max_bucket = 8;
  std::map<int, std::map<std::string, SuccessCell>> cells;  // bucket -> group -> cell
};

std::string bucket_label(int bucket, int max_bucket);

// Success rate of task trajectories grouped by the depth of the task's source
// node. group_by picks the series: prefixed vs unprefixed, or sampler name.
SuccessByDepthTable success_rate_by_depth(const std::vector<datastore::Record>& records,
                                          const explorer::SiteGraph& graph, GroupBy group_by,
                                          const SuccessByDepthConfig& cfg = {});

struct VisitDiffConfig {
  // Count a template once per trajectory, or at every matching step.
  bool per_step = false;
};

struct VisitDiffRow {
  std::string pattern;
  int visits_a = 0;
  int visits_b = 0;
  int diff = 0;  // visits_a - visits_b
  int depth = 0;
};

// Success-trajectory visit counts per URL template, sorted by |diff|. The
// result holds up to top_k rows visited more by A (ties and zero diffs ride
// this side) followed by up to top_k rows visited more by B.
std::vector<VisitDiffRow> visit_diff(const std::vector<datastore::Record>& a,
                                     const std::vector<datastore::Record>& b,
                                     const std::vector<core::UrlTemplate>& templates, int top_k,
                                     const VisitDiffConfig& cfg = {});

class TaskClassifier {
 public:
  virtual ~TaskClassifier() = default;
  virtual std::string id() const = 0;
  // One category per task, parallel to the input.
  virtual std::vector<std::string> classify(const std::vector<core::Task>& tasks) = 0;
};

// First rule whose keyword occurs in the goal (case-insensitive) names the
// category; tasks matching nothing fall into "unclassified".
class KeywordClassifier final : public TaskClassifier {
 public:
  using Rule = std::pair<std::string, std::string>;  // keyword -> category
  explicit KeywordClassifier(std::vector<Rule> rules);
  static KeywordClassifier standard();

  std::string id() const override { return "keyword"; }
  std::vector<std::string> classify(const std::vector<core::Task>& tasks) override;

 private:
  std::vector<Rule> rules_;
};

struct LlmClassifierConfig {
  std::string model_id = "default";
  double temperature = 0.0;
  int max_tokens = 512;
  int sample_size = 20;  // goals shown when inducing the category list
  int max_categories = 8;
};

// Two phases: induce a category list from a sample of the goals, then label
// every task with one of the induced names. Provider failures and replies
// outside the induced list fall back to "unclassified".
class LlmClassifier final : public TaskClassifier {
 public:
  explicit LlmClassifier(std::shared_ptr<llm::ChatProvider> provider,
                         LlmClassifierConfig cfg = {});

  std::string id() const override { return "llm:" + cfg_.model_id; }
  std::vector<std::string> classify(const std::vector<core::Task>& tasks) override;

 private:
  std::shared_ptr<llm::ChatProvider> provider_;
  LlmClassifierConfig cfg_;
};

struct TaskCategoryDistribution {
  std::string classifier_id;
  // site origin -> category -> task count
  std::map<std::string, std::map<std::string, int>> per_site;
};

TaskCategoryDistribution categorize_tasks(const std::vector<core::Task>& tasks,
                                          TaskClassifier& classifier);

// Tab-separated tables with a header row.
std::string render_node_depths(const std::map<core::CanonicalUrl, int>& depths);
std::string render_depth_reports(const std::vector<DepthReport>& reports);
std::string render_success_by_depth(const SuccessByDepthTable& table);
std::string render_visit_diff(const std::vector<VisitDiffRow>& rows);
std::string render_categories(const TaskCategoryDistribution& distribution);

// Plot-ready long format: metric, group, key, value.
struct LongRow {
  std::string metric;
  std::string group;
  std::string key;
  double value = 0.0;
};

std::vector<LongRow> long_rows(const std::map<core::CanonicalUrl, int>& depths);
std::vector<LongRow> long_rows(const std::vector<DepthReport>& reports);
std::vector<LongRow> long_rows(const SuccessByDepthTable& table);
std::vector<LongRow> long_rows(const std::vector<VisitDiffRow>& rows);
std::vector<LongRow> long_rows(const TaskCategoryDistribution& distribution);
std::string render_long(const std::vector<LongRow>& rows);

}  // namespace gobrowse::analysis
