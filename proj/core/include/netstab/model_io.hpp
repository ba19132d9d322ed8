#pragma once

#include <string>

#include "netstab/model.hpp"

namespace netstab {

// JSON text config for ModelSpec. Keys:
//   d, d_z, T, kappa, v, v0, shock_law, s_kind, custom_statistic,
//   position_law, attribute_law, s_bounds, pair_tail_eps
// Required: d, T, kappa, v, v0, shock_law, s_kind. Unknown keys are rejected
// with a ConfigError naming the key.
ModelSpec model_from_json(const std::string& text);
std::string model_to_json(const ModelSpec& spec, int indent = 2);

}  // namespace netstab
