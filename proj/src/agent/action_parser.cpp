#include "gobrowse/agent/action_parser.hpp"

#include <cstddef>

#include "json.hpp"

namespace gobrowse::agent {

namespace {

// Index of the '}' closing the object that starts at `start`, honoring
// strings and escapes. npos when unbalanced.
std::size_t matching_brace(const std::string& text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string::npos;
}

}  // namespace

ParsedStep parse_action(const std::string& model_output) {
  for (std::size_t pos = model_output.find('{'); pos != std::string::npos;
       pos = model_output.find('{', pos + 1)) {
    auto end = matching_brace(model_output, pos);
    if (end == std::string::npos) continue;
    auto doc = nlohmann::json::parse(model_output.substr(pos, end - pos + 1), nullptr, false);
    if (!doc.is_object() || !doc.contains("thought") || !doc.contains("action")) continue;
    if (!doc["thought"].is_string() || !doc["action"].is_string())
      throw ActionParseError("thought and action must be strings");
    ParsedStep step;
    step.thought = doc["thought"].get<std::string>();
    step.action = simenv::parse_action_call(doc["action"].get<std::string>());
    return step;
  }
  throw ActionParseError("no json document with thought and action fields in model output");
}

std::string render_step_document(const ParsedStep& step) {
  nlohmann::ordered_json doc;
  doc["thought"] = step.thought;
  doc["action"] = simenv::render_action(step.action);
  return doc.dump();
}

}  // namespace gobrowse::agent
