#include "netstab/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netstab/errors.hpp"
#include "netstab/rng.hpp"

namespace netstab {

double KeyedShocks::value(NodeId a, NodeId b, int t) const {
  const auto w = keyed_words(seed_, Stream::shock,
                             {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
                              static_cast<std::uint64_t>(t), 0});
  return law_.quantile(to_open_unit(w[0]));
}

void TableShocks::set(NodeId a, NodeId b, int t, double value) {
  if (a == b) throw ContractViolation("shocks are not defined on the diagonal");
  if (a > b) std::swap(a, b);
  table_[{a, b, t}] = value;
}

double TableShocks::value(NodeId a, NodeId b, int t) const {
  auto it = table_.find({a, b, t});
  if (it != table_.end()) return it->second;
  return base_ ? base_->value(a, b, t) : fallback_;
}

double Primitives::zeta(std::size_t a, std::size_t b, int t) const {
  if (a == b) return 0.0;
  NodeId ia = ids[a], ib = ids[b];
  if (ia > ib) std::swap(ia, ib);
  return shocks->value(ia, ib, t);
}

double Primitives::distance(std::size_t a, std::size_t b) const {
  double acc = 0.0;
  const auto xa = x(a), xb = x(b);
  for (int k = 0; k < d; ++k) {
    const double diff = xa[k] - xb[k];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

std::ptrdiff_t Primitives::index_of(NodeId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return -1;
  return it - ids.begin();
}

Primitives Primitives::subset(std::span<const int> local) const {
  Primitives out;
  out.d = d;
  out.d_z = d_z;
  out.T = T;
  out.shocks = shocks;
  out.master_seed = master_seed;
  out.ids.reserve(local.size());
  out.X.reserve(local.size() * static_cast<std::size_t>(d));
  const std::size_t zrow = static_cast<std::size_t>((T + 1) * d_z);
  out.Z.reserve(local.size() * zrow);
  int prev = -1;
  for (int k : local) {
    if (k <= prev || static_cast<std::size_t>(k) >= ids.size()) {
      throw ContractViolation("subset indices must be ascending and in range");
    }
    prev = k;
    out.ids.push_back(ids[static_cast<std::size_t>(k)]);
    auto xs = x(static_cast<std::size_t>(k));
    out.X.insert(out.X.end(), xs.begin(), xs.end());
    auto zb = Z.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * zrow);
    out.Z.insert(out.Z.end(), zb, zb + static_cast<std::ptrdiff_t>(zrow));
  }
  return out;
}

Primitives Primitives::subset_ids(std::span<const NodeId> sel) const {
  std::vector<int> local;
  local.reserve(sel.size());
  for (NodeId id : sel) {
    const auto k = index_of(id);
    if (k < 0) throw ContractViolation("node id " + std::to_string(id) + " not in primitives");
    local.push_back(static_cast<int>(k));
  }
  std::sort(local.begin(), local.end());
  local.erase(std::unique(local.begin(), local.end()), local.end());
  return subset(local);
}

std::vector<NodeId> iota_ids(std::size_t n, NodeId first) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), first);
  return ids;
}

void sample_position(const ModelSpec& spec, std::uint64_t seed, NodeId id, std::span<double> out) {
  for (int k = 0; k < spec.d; k += 4) {
    const auto w = keyed_words(seed, Stream::position,
                               {static_cast<std::uint64_t>(id), 0, 0, static_cast<std::uint64_t>(k / 4)});
    for (int c = 0; c < 4 && k + c < spec.d; ++c) out[static_cast<std::size_t>(k + c)] = to_open_unit(w[c]);
  }
}

void sample_attributes(const ModelSpec& spec, std::uint64_t seed, NodeId id, int t,
                       std::span<double> out) {
  for (int k = 0; k < spec.d_z; k += 4) {
    const auto w = keyed_words(seed, Stream::attribute,
                               {static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(t), 0,
                                static_cast<std::uint64_t>(k / 4)});
    for (int c = 0; c < 4 && k + c < spec.d_z; ++c) {
      const double u = to_open_unit(w[c]);
      out[static_cast<std::size_t>(k + c)] =
          spec.attributes.family == AttributeFamily::bernoulli ? (u < spec.attributes.p ? 1.0 : 0.0) : u;
    }
  }
}

Primitives sample_primitives(const ModelSpec& spec, std::span<const NodeId> node_ids,
                             std::uint64_t seed) {
  Primitives p;
  p.d = spec.d;
  p.d_z = spec.d_z;
  p.T = spec.T;
  p.master_seed = seed;
  p.ids.assign(node_ids.begin(), node_ids.end());
  if (!std::is_sorted(p.ids.begin(), p.ids.end()) ||
      std::adjacent_find(p.ids.begin(), p.ids.end()) != p.ids.end()) {
    std::sort(p.ids.begin(), p.ids.end());
    if (std::adjacent_find(p.ids.begin(), p.ids.end()) != p.ids.end()) {
      throw ContractViolation("node ids must be distinct");
    }
  }
  const std::size_t n = p.ids.size();
  p.X.resize(n * static_cast<std::size_t>(spec.d));
  p.Z.resize(n * static_cast<std::size_t>((spec.T + 1) * spec.d_z));
  for (std::size_t k = 0; k < n; ++k) {
    sample_position(spec, seed, p.ids[k],
                    {p.X.data() + k * static_cast<std::size_t>(spec.d), static_cast<std::size_t>(spec.d)});
    for (int t = 0; t <= spec.T; ++t) {
      if (spec.d_z == 0) break;
      auto row = std::span<double>(p.Z.data() + (k * static_cast<std::size_t>(spec.T + 1) + static_cast<std::size_t>(t)) *
                                                    static_cast<std::size_t>(spec.d_z),
                                   static_cast<std::size_t>(spec.d_z));
      sample_attributes(spec, seed, p.ids[k], t, row);
    }
  }
  p.shocks = std::make_shared<KeyedShocks>(seed, spec.shock);
  return p;
}

}  // namespace netstab
