#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gobrowse/core/errors.hpp"

namespace gobrowse::simenv {

struct ActionParseError : Error {
  using Error::Error;
};

struct NoopAction {
  int wait_ms = 0;
  bool operator==(const NoopAction&) const = default;
};
struct ClickAction {
  std::string elem;
  bool operator==(const ClickAction&) const = default;
};
struct HoverAction {
  std::string elem;
  bool operator==(const HoverAction&) const = default;
};
struct FillAction {
  std::string elem;
  std::string value;
  bool operator==(const FillAction&) const = default;
};
struct KeyboardPressAction {
  std::string key_comb;
  bool operator==(const KeyboardPressAction&) const = default;
};
struct ScrollAction {
  double x = 0;
  double y = 0;
  bool operator==(const ScrollAction&) const = default;
};
struct SelectOptionAction {
  std::string elem;
  std::vector<std::string> options;
  bool operator==(const SelectOptionAction&) const = default;
};
struct GotoAction {
  std::string url;
  bool operator==(const GotoAction&) const = default;
};
struct GoBackAction {
  bool operator==(const GoBackAction&) const = default;
};
struct GoForwardAction {
  bool operator==(const GoForwardAction&) const = default;
};
struct NewTabAction {
  bool operator==(const NewTabAction&) const = default;
};
struct TabCloseAction {
  bool operator==(const TabCloseAction&) const = default;
};
struct TabFocusAction {
  int index = 0;
  bool operator==(const TabFocusAction&) const = default;
};
struct SendMsgToUserAction {
  std::string text;
  bool operator==(const SendMsgToUserAction&) const = default;
};
struct ReportInfeasibleAction {
  std::string reason;
  bool operator==(const ReportInfeasibleAction&) const = default;
};
// Explorer extension: proposer agents push task goals into the dataset.
struct AddTasksToDatasetAction {
  std::vector<std::string> tasks;
  bool operator==(const AddTasksToDatasetAction&) const = default;
};

using Action =
    std::variant<NoopAction, ClickAction, HoverAction, FillAction, KeyboardPressAction,
                 ScrollAction, SelectOptionAction, GotoAction, GoBackAction, GoForwardAction,
                 NewTabAction, TabCloseAction, TabFocusAction, SendMsgToUserAction,
                 ReportInfeasibleAction, AddTasksToDatasetAction>;

// Function-call form, e.g. click('12'). render/parse round-trip exactly.
std::string render_action(const Action& action);
std::string action_name(const Action& action);

// Inverse of render_action, with some leniency for model output: double
// quotes, keyword arguments, and extra whitespace are accepted. Throws
// ActionParseError on unknown names, bad arity, or malformed literals.
Action parse_action_call(const std::string& text);

// send_msg_to_user and report_infeasible end an episode.
bool is_terminal_action(const Action& action);

struct ActionDescriptor {
  std::string name;
  std::string signature;
  std::string description;
};

// One descriptor per variant, in declaration order. The prompt's action-space
// section and the parser both derive from this table so they cannot drift.
const std::vector<ActionDescriptor>& action_descriptors();

// Human-readable list, one action per line: "name(sig) - description".
std::string action_space_doc(bool include_explorer_extension = true);

}  // namespace gobrowse::simenv
