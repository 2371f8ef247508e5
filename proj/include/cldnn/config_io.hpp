#pragma once

#include "cldnn/simulate.hpp"

#include <stdexcept>
#include <string>

namespace cldnn {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a flat `key = value` text (one pair per line, '#' comments).
/// Unknown keys and malformed values raise ConfigError naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical commented dump; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& config);

}  // namespace cldnn
