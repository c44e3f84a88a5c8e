#pragma once

#include <stdexcept>
#include <string>

namespace wsnd {

/// Caller passed arguments that violate an operation's precondition.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Every sensor is censored, so there is nothing to fuse.
class DegenerateFusionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// All sensors have zero local SNR; the power objective is flat.
class NoSignalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Communication graph is disconnected or could not be generated connected.
class TopologyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration file failed to parse or validate. Exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace wsnd
