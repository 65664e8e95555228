#include "gobrowse/simenv/environment.hpp"

#include <sstream>

namespace gobrowse::simenv {

SimWebEnvironment::SimWebEnvironment(std::shared_ptr<const SiteSpec> spec)
    : spec_(std::move(spec)) {
  if (!spec_) throw EnvironmentError("site spec is required");
}

EnvFactory SimWebEnvironment::factory(std::shared_ptr<const SiteSpec> spec) {
  return [spec]() { return std::make_unique<SimWebEnvironment>(spec); };
}

Observation SimWebEnvironment::reset(const core::CanonicalUrl& url, const std::string& goal) {
  auto resolved = spec_->resolve(url);
  if (!resolved) throw UnknownUrl("no page at " + url.render());
  episode_active_ = true;
  goal_ = goal;
  current_ = url;
  page_ = *resolved;
  back_.clear();
  forward_.clear();
  fields_.clear();
  history_.clear();
  pending_error_.reset();
  return observe();
}

core::CanonicalUrl SimWebEnvironment::current_url() const { return current_; }

std::map<std::string, std::string> SimWebEnvironment::state_snapshot() const { return fields_; }

const ElementSpec* SimWebEnvironment::find_element(const std::string& id) const {
  for (const auto& elem : page_.entry->page.elements)
    if (elem.id == id) return &elem;
  return nullptr;
}

std::string SimWebEnvironment::render_axtree() const {
  std::ostringstream out;
  const auto& page = page_.entry->page;
  out << "Page: " << substitute_bindings(page.title, page_.bindings) << '\n';
  if (!page.text_content.empty())
    out << substitute_bindings(page.text_content, page_.bindings) << '\n';
  for (const auto& elem : page.elements)
    out << '[' << elem.id << "] " << to_string(elem.role) << " \""
        << substitute_bindings(elem.label, page_.bindings) << "\"\n";
  auto rendered = out.str();
  if (!rendered.empty()) rendered.pop_back();
  return rendered;
}

Observation SimWebEnvironment::observe() const {
  Observation obs;
  obs.goal = goal_;
  obs.axtree = render_axtree();
  obs.action_history = history_;
  obs.last_action_error = pending_error_;
  obs.url = current_;
  return obs;
}

void SimWebEnvironment::navigate(const core::CanonicalUrl& target) {
  auto resolved = spec_->resolve(target);
  if (!resolved) {
    fail("unknown url: " + target.render());
    return;
  }
  back_.push_back({current_});
  forward_.clear();
  current_ = target;
  page_ = *resolved;
}

void SimWebEnvironment::exec(const Action& action, bool& terminated) {
  if (std::holds_alternative<NoopAction>(action) || std::holds_alternative<ScrollAction>(action) ||
      std::holds_alternative<KeyboardPressAction>(action) ||
      std::holds_alternative<HoverAction>(action) ||
      std::holds_alternative<AddTasksToDatasetAction>(action))
    return;
  if (std::holds_alternative<NewTabAction>(action) ||
      std::holds_alternative<TabCloseAction>(action) ||
      std::holds_alternative<TabFocusAction>(action)) {
    fail("tabs unsupported in simulation");
    return;
  }
  if (std::holds_alternative<SendMsgToUserAction>(action) ||
      std::holds_alternative<ReportInfeasibleAction>(action)) {
    terminated = true;
    return;
  }
  if (const auto* go = std::get_if<GotoAction>(&action)) {
    core::CanonicalUrl target;
    try {
      target = spec_->absolute(go->url);
    } catch (const MalformedUrl& e) {
      fail(std::string("malformed url: ") + e.what());
      return;
    }
    if (spec_->is_external(target)) {
      fail("external navigation unsupported: " + target.render());
      return;
    }
    navigate(target);
    return;
  }
  if (std::holds_alternative<GoBackAction>(action)) {
    if (back_.empty()) {
      fail("no previous page in history");
      return;
    }
    forward_.push_back({current_});
    current_ = back_.back().url;
    back_.pop_back();
    page_ = *spec_->resolve(current_);
    return;
  }
  if (std::holds_alternative<GoForwardAction>(action)) {
    if (forward_.empty()) {
      fail("no next page in history");
      return;
    }
    back_.push_back({current_});
    current_ = forward_.back().url;
    forward_.pop_back();
    page_ = *spec_->resolve(current_);
    return;
  }
  if (const auto* click = std::get_if<ClickAction>(&action)) {
    const auto* elem = find_element(click->elem);
    if (!elem) {
      fail("no element with id '" + click->elem + "' on this page");
      return;
    }
    if (elem->role == ElementRole::static_text) {
      fail("element '" + click->elem + "' is not interactable");
      return;
    }
    if (elem->target) {
      auto concrete = substitute_bindings(*elem->target, page_.bindings);
      core::CanonicalUrl target;
      try {
        target = spec_->absolute(concrete);
      } catch (const MalformedUrl& e) {
        fail(std::string("malformed url: ") + e.what());
        return;
      }
      if (spec_->is_external(target)) {
        fail("external navigation unsupported: " + target.render());
        return;
      }
      navigate(target);
      return;
    }
    if (elem->transition) {
      auto target = spec_->absolute(elem->transition->path);
      std::vector<std::pair<std::string, std::string>> query;
      for (const auto& [param, field] : elem->transition->query_params) {
        auto it = fields_.find(field);
        query.emplace_back(param, it == fields_.end() ? "" : it->second);
      }
      if (!query.empty()) target.query = std::move(query);
      navigate(target);
      return;
    }
    return;  // focus click on a plain button/textbox/select
  }
  if (const auto* fill = std::get_if<FillAction>(&action)) {
    const auto* elem = find_element(fill->elem);
    if (!elem) {
      fail("no element with id '" + fill->elem + "' on this page");
      return;
    }
    if (elem->role != ElementRole::textbox) {
      fail("element '" + fill->elem + "' is not a textbox");
      return;
    }
    fields_[elem->id] = fill->value;
    return;
  }
  if (const auto* select = std::get_if<SelectOptionAction>(&action)) {
    const auto* elem = find_element(select->elem);
    if (!elem) {
      fail("no element with id '" + select->elem + "' on this page");
      return;
    }
    if (elem->role != ElementRole::select) {
      fail("element '" + select->elem + "' is not a select");
      return;
    }
    for (const auto& option : select->options) {
      bool known = false;
      for (const auto& available : elem->options)
        if (available == option) known = true;
      if (!known) {
        fail("option '" + option + "' not available for element '" + select->elem + "'");
        return;
      }
    }
    std::string joined;
    for (const auto& option : select->options) {
      if (!joined.empty()) joined += ',';
      joined += option;
    }
    fields_[elem->id] = joined;
    return;
  }
}

StepResult SimWebEnvironment::step(const Action& action) {
  if (!episode_active_) throw EnvironmentError("step without an active episode");
  pending_error_.reset();
  bool terminated = false;
  exec(action, terminated);
  history_.push_back(render_action(action));
  return {observe(), terminated};
}

Observation SimWebEnvironment::note_unexecuted(const Action& action, const std::string& error) {
  if (!episode_active_) throw EnvironmentError("step without an active episode");
  pending_error_ = error;
  history_.push_back(render_action(action));
  return observe();
}

}  // namespace gobrowse::simenv
