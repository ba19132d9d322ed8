#pragma once

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "netstab/model.hpp"

namespace netstab {

// Undirected simple graph on local indices 0..size-1 with sorted adjacency.
class Net {
 public:
  Net() = default;
  explicit Net(std::size_t n) : adj_(n) {}

  std::size_t size() const { return adj_.size(); }
  bool has(int a, int b) const;
  // Return true when the edge set changed.
  bool add(int a, int b);
  bool remove(int a, int b);
  void set(int a, int b, bool on) { on ? add(a, b) : remove(a, b); }
  const std::vector<int>& neighbors(int a) const { return adj_[static_cast<std::size_t>(a)]; }
  std::size_t degree(int a) const { return adj_[static_cast<std::size_t>(a)].size(); }
  std::size_t edge_count() const;
  // Edges (a < b) in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  // Subnetwork on ascending local indices, relabelled 0..k-1.
  Net induced(const std::vector<int>& local) const;

  bool operator==(const Net& o) const { return adj_ == o.adj_; }

 private:
  std::vector<std::vector<int>> adj_;
};

// Nodes within `K` hops of `src` (including src), ascending.
std::vector<int> k_neighborhood(const Net& net, int src, int K);

// Number of common neighbours of a and b.
int common_neighbors(const Net& net, int a, int b);

struct NetSeries {
  std::vector<NodeId> ids;
  std::vector<Net> nets;  // periods 0..T

  int T() const { return static_cast<int>(nets.size()) - 1; }
  std::size_t size() const { return ids.size(); }
};

// CSV edge list "period,i,j", sorted by period then (i, j) in id order.
void write_edge_list(std::ostream& os, const NetSeries& series);

}  // namespace netstab
