#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gobrowse/core/errors.hpp"

namespace gobrowse::core {

// Canonical URL value. Node identity for site graphs: two URLs are the same
// node iff their canonical forms compare equal. Canonicalization collapses
// consecutive slashes (no empty path segments) and drops trailing slashes;
// query order is preserved and significant.
struct CanonicalUrl {
  std::string scheme;
  std::string host;
  std::optional<int> port;
  std::vector<std::string> path_segments;
  std::optional<std::vector<std::pair<std::string, std::string>>> query;
  std::optional<std::string> fragment;

  std::string render() const;
  // Path portion only, "/a/b" form ("/" for the host root).
  std::string path() const;
  bool same_origin(const CanonicalUrl& other) const;

  bool operator==(const CanonicalUrl& other) const;
  bool operator!=(const CanonicalUrl& other) const { return !(*this == other); }
  bool operator<(const CanonicalUrl& other) const;
};

// Parses an absolute URL into canonical form. Throws MalformedUrl.
CanonicalUrl canonicalize_url(const std::string& raw);

// Number of path segments; query and fragment never count.
int url_path_depth(const CanonicalUrl& url);

// Same URL with query and fragment dropped: the page identity used for
// graph nodes and reachability.
CanonicalUrl without_query(CanonicalUrl url);

// Path pattern with single-segment placeholders, e.g.
// "/catalog/product/edit/id/{id}". A placeholder matches any one non-empty
// segment; there are no multi-segment wildcards. Patterns may carry an origin
// ("http://host/...") and a query string; a bare path matches on any origin,
// and a pattern without a query matches URLs with any query.
class UrlTemplate {
 public:
  UrlTemplate() = default;
  explicit UrlTemplate(const std::string& pattern);

  struct Segment {
    bool placeholder = false;
    std::string text;  // literal text, or placeholder name
  };

  const std::string& pattern() const { return pattern_; }
  const std::vector<Segment>& segments() const { return segments_; }
  int depth() const { return static_cast<int>(segments_.size()); }

  bool matches(const CanonicalUrl& url) const;
  // Placeholder-name -> matched segment, or nullopt when the URL does not match.
  std::optional<std::map<std::string, std::string>> match(const CanonicalUrl& url) const;

 private:
  std::string pattern_;
  std::optional<CanonicalUrl> origin_;
  std::optional<std::vector<std::pair<std::string, std::string>>> query_;
  std::vector<Segment> segments_;
};

// First matching template in list order, or nullptr.
const UrlTemplate* match_template(const CanonicalUrl& url, const std::vector<UrlTemplate>& templates);

}  // namespace gobrowse::core
