#include "gobrowse/simenv/actions.hpp"

#include <charconv>
#include <cstdio>

namespace gobrowse::simenv {

namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out += "'";
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string quote_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += quote(items[i]);
  }
  out += "]";
  return out;
}

}  // namespace

std::string render_action(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, NoopAction>) {
          return "noop(" + std::to_string(a.wait_ms) + ")";
        } else if constexpr (std::is_same_v<T, ClickAction>) {
          return "click(" + quote(a.elem) + ")";
        } else if constexpr (std::is_same_v<T, HoverAction>) {
          return "hover(" + quote(a.elem) + ")";
        } else if constexpr (std::is_same_v<T, FillAction>) {
          return "fill(" + quote(a.elem) + ", " + quote(a.value) + ")";
        } else if constexpr (std::is_same_v<T, KeyboardPressAction>) {
          return "keyboard_press(" + quote(a.key_comb) + ")";
        } else if constexpr (std::is_same_v<T, ScrollAction>) {
          return "scroll(" + format_number(a.x) + ", " + format_number(a.y) + ")";
        } else if constexpr (std::is_same_v<T, SelectOptionAction>) {
          return "select_option(" + quote(a.elem) + ", " + quote_list(a.options) + ")";
        } else if constexpr (std::is_same_v<T, GotoAction>) {
          return "goto(" + quote(a.url) + ")";
        } else if constexpr (std::is_same_v<T, GoBackAction>) {
          return "go_back()";
        } else if constexpr (std::is_same_v<T, GoForwardAction>) {
          return "go_forward()";
        } else if constexpr (std::is_same_v<T, NewTabAction>) {
          return "new_tab()";
        } else if constexpr (std::is_same_v<T, TabCloseAction>) {
          return "tab_close()";
        } else if constexpr (std::is_same_v<T, TabFocusAction>) {
          return "tab_focus(" + std::to_string(a.index) + ")";
        } else if constexpr (std::is_same_v<T, SendMsgToUserAction>) {
          return "send_msg_to_user(" + quote(a.text) + ")";
        } else if constexpr (std::is_same_v<T, ReportInfeasibleAction>) {
          return "report_infeasible(" + quote(a.reason) + ")";
        } else {
          static_assert(std::is_same_v<T, AddTasksToDatasetAction>);
          return "add_tasks_to_dataset(" + quote_list(a.tasks) + ")";
        }
      },
      action);
}

std::string action_name(const Action& action) {
  auto rendered = render_action(action);
  return rendered.substr(0, rendered.find('('));
}

bool is_terminal_action(const Action& action) {
  return std::holds_alternative<SendMsgToUserAction>(action) ||
         std::holds_alternative<ReportInfeasibleAction>(action);
}

const std::vector<ActionDescriptor>& action_descriptors() {
  static const std::vector<ActionDescriptor> table = {
      {"noop", "wait_ms: int", "Do nothing for specified time."},
      {"click", "elem: str", "Click at an element."},
      {"hover", "elem: str", "Hover on an element."},
      {"fill", "elem: str, value: str", "Type into an element."},
      {"keyboard_press", "key_comb: str", "Press a key combination."},
      {"scroll", "x: float, y: float", "Scroll horizontally or vertically."},
      {"select_option", "elem: str, options: list[str]", "Select one or multiple options."},
      {"goto", "url: str", "Navigate to a url."},
      {"go_back", "", "Navigate to the previous page."},
      {"go_forward", "", "Navigate to the next page."},
      {"new_tab", "", "Open a new tab."},
      {"tab_close", "", "Close the current tab."},
      {"tab_focus", "index: int", "Bring tab to front."},
      {"send_msg_to_user", "text: str", "Send a message to the user."},
      {"report_infeasible", "reason: str", "Notify user that instructions are infeasible."},
      {"add_tasks_to_dataset", "tasks: list[str]", "Add proposed task descriptions to the dataset."},
  };
  return table;
}

namespace {

struct ArgValue {
  enum class Kind { string, number, list };
  Kind kind = Kind::string;
  std::string str;
  double num = 0;
  std::vector<std::string> list;
};

class CallParser {
 public:
  explicit CallParser(const std::string& text) : s_(text) {}

  std::pair<std::string, std::vector<ArgValue>> parse() {
    skip_ws();
    auto name = parse_identifier();
    if (name.empty()) fail("expected an action name");
    skip_ws();
    expect('(');
    std::vector<ArgValue> args;
    skip_ws();
    if (!peek_is(')')) {
      while (true) {
        skip_ws();
        skip_keyword_prefix();
        args.push_back(parse_value());
        skip_ws();
        if (peek_is(',')) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    skip_ws();
    expect(')');
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected text after the call");
    return {name, std::move(args)};
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ActionParseError("cannot parse action '" + s_ + "': " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_is(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  void expect(char c) {
    if (!peek_is(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  // Tolerates the keyword form fill(elem='5', value='x').
  void skip_keyword_prefix() {
    std::size_t mark = pos_;
    auto name = parse_identifier();
    skip_ws();
    if (!name.empty() && peek_is('=') && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '=')) {
      ++pos_;
      skip_ws();
    } else {
      pos_ = mark;
    }
  }

  ArgValue parse_value() {
    if (pos_ >= s_.size()) fail("expected an argument");
    char c = s_[pos_];
    ArgValue v;
    if (c == '\'' || c == '"') {
      v.kind = ArgValue::Kind::string;
      v.str = parse_string();
      return v;
    }
    if (c == '[') {
      v.kind = ArgValue::Kind::list;
      ++pos_;
      skip_ws();
      if (!peek_is(']')) {
        while (true) {
          skip_ws();
          v.list.push_back(parse_string());
          skip_ws();
          if (peek_is(',')) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      skip_ws();
      expect(']');
      return v;
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      v.kind = ArgValue::Kind::number;
      std::size_t start = pos_;
      if (c == '-' || c == '+') ++pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                  ((s_[pos_] == '-' || s_[pos_] == '+') &&
                                   (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
        ++pos_;
      try {
        v.num = std::stod(s_.substr(start, pos_ - start));
      } catch (const std::exception&) {
        fail("bad number literal");
      }
      return v;
    }
    fail("expected a string, number, or list argument");
  }

  std::string parse_string() {
    if (pos_ >= s_.size() || (s_[pos_] != '\'' && s_[pos_] != '"'))
      fail("expected a quoted string");
    char quote_char = s_[pos_++];
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote_char) {
      char c = s_[pos_++];
      if (c == '\\' && pos_ < s_.size()) {
        char esc = s_[pos_++];
        switch (esc) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          default:
            out += '\\';
            out += esc;
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string literal");
    ++pos_;
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void arity_error(const std::string& name, const char* expected) {
  throw ActionParseError("action '" + name + "' expects " + expected);
}

std::string string_arg(const std::string& name, const std::vector<ArgValue>& args, std::size_t i,
                       const char* expected) {
  if (i >= args.size() || args[i].kind != ArgValue::Kind::string) arity_error(name, expected);
  return args[i].str;
}

double number_arg(const std::string& name, const std::vector<ArgValue>& args, std::size_t i,
                  const char* expected) {
  if (i >= args.size() || args[i].kind != ArgValue::Kind::number) arity_error(name, expected);
  return args[i].num;
}

std::vector<std::string> list_arg(const std::string& name, const std::vector<ArgValue>& args,
                                  std::size_t i, const char* expected) {
  if (i >= args.size()) arity_error(name, expected);
  if (args[i].kind == ArgValue::Kind::list) return args[i].list;
  if (args[i].kind == ArgValue::Kind::string) return {args[i].str};
  arity_error(name, expected);
}

}  // namespace

Action parse_action_call(const std::string& text) {
  auto [name, args] = CallParser(text).parse();
  auto want = [&](std::size_t n, const char* expected) {
    if (args.size() != n) arity_error(name, expected);
  };
  if (name == "noop") {
    if (args.empty()) return NoopAction{};
    want(1, "at most one integer argument");
    return NoopAction{static_cast<int>(number_arg(name, args, 0, "an integer wait"))};
  }
  if (name == "click") {
    want(1, "one string argument");
    return ClickAction{string_arg(name, args, 0, "one string argument")};
  }
  if (name == "hover") {
    want(1, "one string argument");
    return HoverAction{string_arg(name, args, 0, "one string argument")};
  }
  if (name == "fill") {
    want(2, "two string arguments");
    return FillAction{string_arg(name, args, 0, "two string arguments"),
                      string_arg(name, args, 1, "two string arguments")};
  }
  if (name == "keyboard_press") {
    want(1, "one string argument");
    return KeyboardPressAction{string_arg(name, args, 0, "one string argument")};
  }
  if (name == "scroll") {
    want(2, "two number arguments");
    return ScrollAction{number_arg(name, args, 0, "two number arguments"),
                        number_arg(name, args, 1, "two number arguments")};
  }
  if (name == "select_option") {
    want(2, "an element and an option list");
    return SelectOptionAction{string_arg(name, args, 0, "an element and an option list"),
                              list_arg(name, args, 1, "an element and an option list")};
  }
  if (name == "goto") {
    want(1, "one url argument");
    return GotoAction{string_arg(name, args, 0, "one url argument")};
  }
  if (name == "go_back") {
    want(0, "no arguments");
    return GoBackAction{};
  }
  if (name == "go_forward") {
    want(0, "no arguments");
    return GoForwardAction{};
  }
  if (name == "new_tab") {
    want(0, "no arguments");
    return NewTabAction{};
  }
  if (name == "tab_close") {
    want(0, "no arguments");
    return TabCloseAction{};
  }
  if (name == "tab_focus") {
    want(1, "one integer argument");
    return TabFocusAction{static_cast<int>(number_arg(name, args, 0, "one integer argument"))};
  }
  if (name == "send_msg_to_user") {
    want(1, "one string argument");
    return SendMsgToUserAction{string_arg(name, args, 0, "one string argument")};
  }
  if (name == "report_infeasible") {
    want(1, "one string argument");
    return ReportInfeasibleAction{string_arg(name, args, 0, "one string argument")};
  }
  if (name == "add_tasks_to_dataset") {
    want(1, "one list argument");
    return AddTasksToDatasetAction{list_arg(name, args, 0, "one list argument")};
  }
  throw ActionParseError("unknown action '" + name + "'");
}

std::string action_space_doc(bool include_explorer_extension) {
  std::string out;
  for (const auto& d : action_descriptors()) {
    if (!include_explorer_extension && d.name == "add_tasks_to_dataset") continue;
    out += d.name + "(" + d.signature + ") - " + d.description + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace gobrowse::simenv
