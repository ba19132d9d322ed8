#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <tuple>
#include <vector>

#include "netstab/model.hpp"

namespace netstab {

// Symmetric pair shocks keyed by node ids, so a pair's value never depends
// on which other nodes are present.
class ShockField {
 public:
  virtual ~ShockField() = default;
  // a < b are node ids.
  virtual double value(NodeId a, NodeId b, int t) const = 0;
};

class KeyedShocks final : public ShockField {
 public:
  KeyedShocks(std::uint64_t seed, ShockLaw law) : seed_(seed), law_(law) {}
  double value(NodeId a, NodeId b, int t) const override;

 private:
  std::uint64_t seed_;
  ShockLaw law_;
};

// Explicit per-pair values with a fallback for pairs not listed. Used to pin
// scenarios by hand and to relabel realizations.
class TableShocks final : public ShockField {
 public:
  explicit TableShocks(double fallback = 0.0) : fallback_(fallback) {}
  explicit TableShocks(std::shared_ptr<const ShockField> fallback)
      : base_(std::move(fallback)) {}
  void set(NodeId a, NodeId b, int t, double value);
  double value(NodeId a, NodeId b, int t) const override;

 private:
  std::map<std::tuple<NodeId, NodeId, int>, double> table_;
  std::shared_ptr<const ShockField> base_;
  double fallback_ = 0.0;
};

// One realized draw of the model primitives on an ascending set of node ids.
// Local index k refers to ids[k].
struct Primitives {
  std::vector<NodeId> ids;
  int d = 1;
  int d_z = 0;
  int T = 0;
  std::vector<double> X;  // size * d
  std::vector<double> Z;  // size * (T+1) * d_z
  std::shared_ptr<const ShockField> shocks;
  std::uint64_t master_seed = 0;

  std::size_t size() const { return ids.size(); }
  std::span<const double> x(std::size_t k) const {
    return {X.data() + k * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  std::span<const double> z(std::size_t k, int t) const {
    const std::size_t dz = static_cast<std::size_t>(d_z);
    return {Z.data() + (k * static_cast<std::size_t>(T + 1) + static_cast<std::size_t>(t)) * dz, dz};
  }
  // Shock for local indices; zero on the diagonal.
  double zeta(std::size_t a, std::size_t b, int t) const;
  // Unscaled Euclidean distance between local nodes.
  double distance(std::size_t a, std::size_t b) const;
  // Local index of a node id, or -1.
  std::ptrdiff_t index_of(NodeId id) const;
  // Restriction to ascending local indices.
  Primitives subset(std::span<const int> local) const;
  // Restriction to a set of node ids (any order, must be present).
  Primitives subset_ids(std::span<const NodeId> ids) const;
};

std::vector<NodeId> iota_ids(std::size_t n, NodeId first = 1);

Primitives sample_primitives(const ModelSpec& spec, std::span<const NodeId> node_ids,
                             std::uint64_t seed);

// Keyed single-node draws, exposed for callers that sample node types
// outside a realization (branching roots).
void sample_position(const ModelSpec& spec, std::uint64_t seed, NodeId id, std::span<double> out);
void sample_attributes(const ModelSpec& spec, std::uint64_t seed, NodeId id, int t,
                       std::span<double> out);

}  // namespace netstab
