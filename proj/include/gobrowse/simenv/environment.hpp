#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "gobrowse/core/errors.hpp"
#include "gobrowse/simenv/observation.hpp"
#include "gobrowse/simenv/site_spec.hpp"

namespace gobrowse::simenv {

struct UnknownUrl : Error {
  using Error::Error;
};
struct EnvironmentError : Error {
  using Error::Error;
};

struct StepResult {
  Observation observation;
  bool terminated = false;
};

class Environment {
 public:
  virtual ~Environment() = default;

  // Starts a fresh episode at url. Throws UnknownUrl when the page does not
  // exist.
  virtual Observation reset(const core::CanonicalUrl& url, const std::string& goal) = 0;

  virtual StepResult step(const Action& action) = 0;

  // Records an action that never executed (unparseable model output, policy
  // failure). It enters the history with the given error and the page stays
  // put, so the episode can continue.
  virtual Observation note_unexecuted(const Action& action, const std::string& error) = 0;

  virtual core::CanonicalUrl current_url() const = 0;

  // Mutable per-episode state (form fields) for state-predicate checkers.
  virtual std::map<std::string, std::string> state_snapshot() const { return {}; }
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

// Deterministic single-tab browser over a declarative SiteSpec. Closed world:
// navigation outside the spec (external links, unknown URLs) fails with an
// error observation instead of leaving the site.
class SimWebEnvironment final : public Environment {
 public:
  explicit SimWebEnvironment(std::shared_ptr<const SiteSpec> spec);

  Observation reset(const core::CanonicalUrl& url, const std::string& goal) override;
  StepResult step(const Action& action) override;
  Observation note_unexecuted(const Action& action, const std::string& error) override;
  core::CanonicalUrl current_url() const override;
  std::map<std::string, std::string> state_snapshot() const override;

  const SiteSpec& spec() const { return *spec_; }

  // The accessibility-tree text for the current page.
  std::string render_axtree() const;

  static EnvFactory factory(std::shared_ptr<const SiteSpec> spec);

 private:
  struct Frame {
    core::CanonicalUrl url;
  };

  Observation observe() const;
  void navigate(const core::CanonicalUrl& target);
  void fail(const std::string& message) { pending_error_ = message; }
  const ElementSpec* find_element(const std::string& id) const;
  void exec(const Action& action, bool& terminated);

  std::shared_ptr<const SiteSpec> spec_;
  bool episode_active_ = false;
  std::string goal_;
  core::CanonicalUrl current_;
  SiteSpec::ResolvedPage page_;
  std::deque<Frame> back_;
  std::deque<Frame> forward_;
  std::map<std::string, std::string> fields_;
  std::vector<std::string> history_;
  std::optional<std::string> pending_error_;
};

}  // namespace gobrowse::simenv
