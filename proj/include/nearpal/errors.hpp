#pragma once

#include <stdexcept>
#include <string>

namespace nearpal {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal bookkeeping; never expected on valid inputs.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace nearpal
