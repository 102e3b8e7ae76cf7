#pragma once

#include <stdexcept>
#include <string>

namespace sfaas {

// Invalid user input: bad config values, unknown keys, impossible sweeps.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal simulator inconsistency (e.g. scheduling into the past). Aborts the
// replication that raised it.
class SimulationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No samples left after the warm-up cut.
class EmptyWindow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sfaas
