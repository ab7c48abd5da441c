#pragma once

#include <stdexcept>
#include <string>

namespace onequery {

// Requested computation exceeds a simulator size cap.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A seeded randomized search exhausted its attempt budget.
class search_failure : public std::runtime_error {
 public:
  explicit search_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onequery
