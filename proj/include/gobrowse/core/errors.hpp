#pragma once

#include <stdexcept>
#include <string>

namespace gobrowse {

// Base for all library errors so callers can catch one type at the CLI edge.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedUrl : Error {
  using Error::Error;
};

}  // namespace gobrowse
