#pragma once

#include <stdexcept>
#include <string>

namespace wsncalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class HurstOutOfRange : public Error {
 public:
  explicit HurstOutOfRange(double hurst);
  double hurst() const { return hurst_; }

 private:
  double hurst_;
};

// Sum of sustained arrival rates at a node is not strictly below its service rate.
class UnstableNode : public Error {
 public:
  UnstableNode(std::string node_id, double total_rate, double service_rate);
  const std::string& node_id() const { return node_id_; }
  double total_rate() const { return total_rate_; }
  double service_rate() const { return service_rate_; }

 private:
  std::string node_id_;
  double total_rate_;
  double service_rate_;
};

class UnknownFlow : public Error {
 public:
  UnknownFlow(const std::string& flow_id, const std::string& node_id);
};

class StepMismatch : public Error {
 public:
  StepMismatch(double lhs, double rhs);
};

class HorizonTooShort : public Error {
 public:
  HorizonTooShort(const std::string& what, double suggested_factor);
  double suggested_factor() const { return suggested_factor_; }

 private:
  double suggested_factor_;
};

// Scenario document problems. `location` is either "line L, column C" for
// syntax errors or a JSON pointer such as "/flows/0/micro_flows/1/fractal/hurst".
class ScenarioError : public Error {
 public:
  ScenarioError(std::string location, const std::string& message);
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace wsncalc
