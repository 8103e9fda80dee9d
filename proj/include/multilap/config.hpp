#pragma once

#include <string>

#include "multilap/pipeline.hpp"

namespace multilap {

// Flat key = value text with '#' comments. Layer keys are curve.base.*,
// curve.band1.* .. curve.bandN.*, curve.high.*. Serialization is stable and
// ordered, so resolved presets can be snapshot-tested and round-tripped.
std::string serialize_config(const EnhanceConfig& config);

EnhanceConfig parse_config_text(const std::string& text);
EnhanceConfig parse_config_file(const std::string& path);

// Applies one KEY=VALUE override (the CLI --set flag). Keys are the same as
// in the config file; changing "levels" resizes the curve list, keeping the
// base and high curves and filling new bands with identity.
void apply_override(EnhanceConfig& config, const std::string& key, const std::string& value);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace multilap
