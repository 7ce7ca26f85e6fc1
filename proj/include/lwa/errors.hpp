#pragma once

#include <stdexcept>
#include <string>

namespace lwa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Robot pose lies outside the map or inside an obstacle.
class InvalidPose : public Error {
 public:
  using Error::Error;
};

/// Planner start cell is not traversable.
class InvalidStart : public Error {
 public:
  using Error::Error;
};

/// No admissible end-point or traversable cell exists in the local window.
class DeadEnd : public Error {
 public:
  using Error::Error;
};

class MalformedScan : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed. The message names the line or byte offset.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lwa
