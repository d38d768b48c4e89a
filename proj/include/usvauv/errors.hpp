#pragma once

#include <stdexcept>
#include <string>

namespace usvauv {

// Invalid or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything below is a runtime fault (exit code 3).
class RuntimeFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalBlowup : public RuntimeFault {
 public:
  NumericalBlowup(const std::string& what, long step)
      : RuntimeFault(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class DomainError : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

class DegenerateGeometry : public RuntimeFault {
 public:
  explicit DegenerateGeometry(const std::string& what, int index = -1)
      : RuntimeFault(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

class SimulationFault : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

class TrainingFault : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

class CheckpointError : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

}  // namespace usvauv
