#pragma once

#include <span>
#include <vector>

#include "netstab/model.hpp"
#include "netstab/net.hpp"
#include "netstab/primitives.hpp"

namespace netstab {

// Types handed to S: the primitives, the period whose attributes apply, and
// the scale that turns positions into scaled positions.
struct TypeView {
  const Primitives& prims;
  int period;
  double r;
};

// S_ij evaluated on `net`. Built-in kinds:
//   lagged_link                   (A_ij)
//   common_neighbor_max           (max_k A_ik A_jk)
//   common_neighbor_count         (sum_k A_ik A_jk), capped at the s_bounds hi
//   lagged_link_and_common_max    (A_ij, max_k A_ik A_jk)
//   lagged_link_and_common_count  (A_ij, sum_k A_ik A_jk), capped
// Local indices; i != j.
void eval_S_into(const ModelSpec& spec, int i, int j, const TypeView& types, const Net& net,
                 std::span<double> out);

std::vector<double> eval_S(const ModelSpec& spec, int i, int j, const TypeView& types,
                           const Net& net);

}  // namespace netstab
