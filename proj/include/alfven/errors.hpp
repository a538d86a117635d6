#pragma once

#include <stdexcept>
#include <string>

namespace alfven {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a run configuration fails validation (bad key, bad value,
// or a violated run contract such as the no-wrap bound).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Raised by the time stepper when a runtime monitor trips. Simulation
// drivers catch this, flush partial outputs and report the breach.
class MonitorError : public Error {
 public:
  MonitorError(const std::string& monitor, const std::string& what)
      : Error(monitor + ": " + what), monitor_(monitor) {}
  const std::string& monitor() const { return monitor_; }

 private:
  std::string monitor_;
};

}  // namespace alfven
