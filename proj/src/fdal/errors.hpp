#ifndef FDAL_ERRORS_HPP
#define FDAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdal {

// Error taxonomy used across the library. Everything derives from
// std::runtime_error so callers can catch coarsely or precisely.

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string &what) : std::runtime_error(what) {}
};

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string &what) : std::runtime_error(what) {}
};

struct NotSPD : std::runtime_error {
  explicit NotSPD(const std::string &what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string &what) : std::runtime_error(what) {}
};

struct IndefiniteOperator : std::runtime_error {
  explicit IndefiniteOperator(const std::string &what) : std::runtime_error(what) {}
};

struct Breakdown : std::runtime_error {
  explicit Breakdown(const std::string &what) : std::runtime_error(what) {}
};

struct PointOutsideMesh : std::runtime_error {
  explicit PointOutsideMesh(const std::string &what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string &what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  long line;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace fdal

#endif
