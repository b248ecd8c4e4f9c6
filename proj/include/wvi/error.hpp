#pragma once

#include <stdexcept>
#include <string>

namespace wvi {

// Malformed input file.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a model invariant.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pixel color outside the four-entry palette; signals a renderer defect.
struct UnknownColorError : std::runtime_error {
  explicit UnknownColorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyMeshError : std::runtime_error {
  explicit EmptyMeshError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyCloudError : std::runtime_error {
  explicit EmptyCloudError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatchError : std::runtime_error {
  explicit DimensionMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IdMismatchError : std::runtime_error {
  explicit IdMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownFixtureError : std::runtime_error {
  explicit UnknownFixtureError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wvi
