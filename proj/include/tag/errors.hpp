#pragma once

#include <stdexcept>
#include <string>

namespace tag {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tag
