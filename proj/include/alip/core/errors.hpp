#pragma once

#include <stdexcept>

namespace alip {

/// Malformed or inconsistent configuration input (robot model or scenario).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alip
