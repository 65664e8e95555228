#include "gobrowse/core/url.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace gobrowse::core {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> segments;
  std::string current;
  for (char c : path) {
    if (c == '/') {
      if (!current.empty()) segments.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) segments.push_back(std::move(current));
  return segments;
}

std::vector<std::pair<std::string, std::string>> split_query(const std::string& q) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string part;
  std::istringstream in(q);
  while (std::getline(in, part, '&')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos) {
      pairs.emplace_back(part, "");
    } else {
      pairs.emplace_back(part.substr(0, eq), part.substr(eq + 1));
    }
  }
  return pairs;
}

}  // namespace

std::string CanonicalUrl::render() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  for (const auto& seg : path_segments) out += "/" + seg;
  if (query) {
    out += "?";
    for (size_t i = 0; i < query->size(); ++i) {
      if (i > 0) out += "&";
      out += (*query)[i].first + "=" + (*query)[i].second;
    }
  }
  if (fragment) out += "#" + *fragment;
  return out;
}

std::string CanonicalUrl::path() const {
  if (path_segments.empty()) return "/";
  std::string out;
  for (const auto& seg : path_segments) out += "/" + seg;
  return out;
}

bool CanonicalUrl::same_origin(const CanonicalUrl& other) const {
  return scheme == other.scheme && host == other.host && port == other.port;
}

bool CanonicalUrl::operator==(const CanonicalUrl& other) const {
  return scheme == other.scheme && host == other.host && port == other.port &&
         path_segments == other.path_segments && query == other.query &&
         fragment == other.fragment;
}

bool CanonicalUrl::operator<(const CanonicalUrl& other) const {
  auto tie = [](const CanonicalUrl& u) {
    return std::tie(u.scheme, u.host, u.port, u.path_segments, u.query, u.fragment);
  };
  return tie(*this) < tie(other);
}

CanonicalUrl canonicalize_url(const std::string& raw) {
  auto scheme_end = raw.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw MalformedUrl("not an absolute URL: " + raw);
  }
  CanonicalUrl url;
  url.scheme = to_lower(raw.substr(0, scheme_end));
  for (char c : url.scheme) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      throw MalformedUrl("invalid scheme in: " + raw);
    }
  }

  size_t pos = scheme_end + 3;
  size_t authority_end = raw.find_first_of("/?#", pos);
  std::string authority = raw.substr(pos, authority_end == std::string::npos
                                              ? std::string::npos
                                              : authority_end - pos);
  if (authority.empty()) throw MalformedUrl("missing host in: " + raw);
  auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    std::string port_str = authority.substr(colon + 1);
    if (port_str.empty() || !std::all_of(port_str.begin(), port_str.end(), [](unsigned char c) {
          return std::isdigit(c);
        })) {
      throw MalformedUrl("invalid port in: " + raw);
    }
    url.port = std::stoi(port_str);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw MalformedUrl("missing host in: " + raw);
  url.host = to_lower(authority);

  if (authority_end == std::string::npos) return url;

  std::string rest = raw.substr(authority_end);
  std::string frag_part;
  auto hash_pos = rest.find('#');
  if (hash_pos != std::string::npos) {
    frag_part = rest.substr(hash_pos + 1);
    rest = rest.substr(0, hash_pos);
    if (!frag_part.empty()) url.fragment = frag_part;
  }
  auto q_pos = rest.find('?');
  if (q_pos != std::string::npos) {
    auto pairs = split_query(rest.substr(q_pos + 1));
    if (!pairs.empty()) url.query = std::move(pairs);
    rest = rest.substr(0, q_pos);
  }
  url.path_segments = split_path(rest);
  return url;
}

int url_path_depth(const CanonicalUrl& url) {
  return static_cast<int>(url.path_segments.size());
}

CanonicalUrl without_query(CanonicalUrl url) {
  url.query.reset();
  url.fragment.reset();
  return url;
}

UrlTemplate::UrlTemplate(const std::string& pattern) : pattern_(pattern) {
  std::string rest = pattern;
  if (rest.find("://") != std::string::npos) {
    auto path_start = rest.find('/', rest.find("://") + 3);
    auto origin_part = path_start == std::string::npos ? rest : rest.substr(0, path_start);
    origin_ = canonicalize_url(origin_part);
    rest = path_start == std::string::npos ? "" : rest.substr(path_start);
  }
  auto hash_pos = rest.find('#');
  if (hash_pos != std::string::npos) rest = rest.substr(0, hash_pos);
  auto q_pos = rest.find('?');
  if (q_pos != std::string::npos) {
    auto pairs = split_query(rest.substr(q_pos + 1));
    if (!pairs.empty()) query_ = std::move(pairs);
    rest = rest.substr(0, q_pos);
  }
  for (auto& raw_seg : split_path(rest)) {
    Segment seg;
    if (raw_seg.size() >= 2 && raw_seg.front() == '{' && raw_seg.back() == '}') {
      seg.placeholder = true;
      seg.text = raw_seg.substr(1, raw_seg.size() - 2);
    } else {
      seg.text = raw_seg;
    }
    segments_.push_back(std::move(seg));
  }
}

bool UrlTemplate::matches(const CanonicalUrl& url) const {
  return match(url).has_value();
}

std::optional<std::map<std::string, std::string>> UrlTemplate::match(const CanonicalUrl& url) const {
  if (origin_ && !origin_->same_origin(url)) return std::nullopt;
  if (query_ && url.query != query_) return std::nullopt;
  if (url.path_segments.size() != segments_.size()) return std::nullopt;
  std::map<std::string, std::string> bindings;
  for (size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    const auto& actual = url.path_segments[i];
    if (seg.placeholder) {
      bindings[seg.text] = actual;
    } else if (seg.text != actual) {
      return std::nullopt;
    }
  }
  return bindings;
}

const UrlTemplate* match_template(const CanonicalUrl& url, const std::vector<UrlTemplate>& templates) {
  for (const auto& tmpl : templates) {
    if (tmpl.matches(url)) return &tmpl;
  }
  return nullptr;
}

}  // namespace gobrowse::core
