#include "netstab/strategic.hpp"

#include <algorithm>

#include "netstab/errors.hpp"

namespace netstab {

void eval_S_into(const ModelSpec& spec, int i, int j, const TypeView& types, const Net& net,
                 std::span<double> out) {
  if (i == j) throw ContractViolation("S is defined for distinct nodes only");
  switch (spec.s_kind) {
    case SKind::none:
      return;
    case SKind::lagged_link:
      out[0] = net.has(i, j) ? 1.0 : 0.0;
      return;
    case SKind::common_neighbor_max:
      out[0] = common_neighbors(net, i, j) > 0 ? 1.0 : 0.0;
      return;
    case SKind::common_neighbor_count:
      out[0] = std::min<double>(common_neighbors(net, i, j), spec.s_bounds[0].hi);
      return;
    case SKind::lagged_link_and_common_max:
      out[0] = net.has(i, j) ? 1.0 : 0.0;
      out[1] = common_neighbors(net, i, j) > 0 ? 1.0 : 0.0;
      return;
    case SKind::lagged_link_and_common_count:
      out[0] = net.has(i, j) ? 1.0 : 0.0;
      out[1] = std::min<double>(common_neighbors(net, i, j), spec.s_bounds[1].hi);
      return;
    case SKind::custom: {
      spec.custom->fn(SContext{i, j, net, types.prims, types.period, types.r}, out);
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k] < spec.s_bounds[k].lo || out[k] > spec.s_bounds[k].hi) {
          throw ContractViolation("custom statistic '" + spec.custom->name +
                                  "' left its declared bounds");
        }
      }
      return;
    }
  }
}

std::vector<double> eval_S(const ModelSpec& spec, int i, int j, const TypeView& types,
                           const Net& net) {
  std::vector<double> out(spec.s_dim(), 0.0);
  eval_S_into(spec, i, j, types, net, out);
  return out;
}

}  // namespace netstab
