#include "netstab/net.hpp"

#include <algorithm>
#include <deque>

#include "netstab/errors.hpp"

namespace netstab {

bool Net::has(int a, int b) const {
  const auto& v = adj_[static_cast<std::size_t>(a)];
  return std::binary_search(v.begin(), v.end(), b);
}

bool Net::add(int a, int b) {
  if (a == b) throw ContractViolation("self links are not allowed");
  auto& va = adj_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(va.begin(), va.end(), b);
  if (it != va.end() && *it == b) return false;
  va.insert(it, b);
  auto& vb = adj_[static_cast<std::size_t>(b)];
  vb.insert(std::lower_bound(vb.begin(), vb.end(), a), a);
  return true;
}

bool Net::remove(int a, int b) {
  auto& va = adj_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(va.begin(), va.end(), b);
  if (it == va.end() || *it != b) return false;
  va.erase(it);
  auto& vb = adj_[static_cast<std::size_t>(b)];
  vb.erase(std::lower_bound(vb.begin(), vb.end(), a));
  return true;
}

std::size_t Net::edge_count() const {
  std::size_t s = 0;
  for (const auto& v : adj_) s += v.size();
  return s / 2;
}

std::vector<std::pair<int, int>> Net::edges() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < adj_.size(); ++a) {
    for (int b : adj_[a]) {
      if (b > static_cast<int>(a)) out.emplace_back(static_cast<int>(a), b);
    }
  }
  return out;
}

Net Net::induced(const std::vector<int>& local) const {
  Net out(local.size());
  for (std::size_t p = 0; p < local.size(); ++p) {
    for (int b : adj_[static_cast<std::size_t>(local[p])]) {
      auto it = std::lower_bound(local.begin(), local.end(), b);
      if (it != local.end() && *it == b) {
        const int q = static_cast<int>(it - local.begin());
        if (q > static_cast<int>(p)) out.add(static_cast<int>(p), q);
      }
    }
  }
  return out;
}

std::vector<int> k_neighborhood(const Net& net, int src, int K) {
  std::vector<int> out{src};
  std::vector<int> frontier{src};
  std::vector<char> seen(net.size(), 0);
  seen[static_cast<std::size_t>(src)] = 1;
  for (int step = 0; step < K && !frontier.empty(); ++step) {
    std::vector<int> next;
    for (int a : frontier) {
      for (int b : net.neighbors(a)) {
        if (!seen[static_cast<std::size_t>(b)]) {
          seen[static_cast<std::size_t>(b)] = 1;
          next.push_back(b);
          out.push_back(b);
        }
      }
    }
    frontier.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int common_neighbors(const Net& net, int a, int b) {
  const auto& va = net.neighbors(a);
  const auto& vb = net.neighbors(b);
  int c = 0;
  auto i = va.begin();
  auto j = vb.begin();
  while (i != va.end() && j != vb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++c;
      ++i;
      ++j;
    }
  }
  return c;
}

void write_edge_list(std::ostream& os, const NetSeries& series) {
  os << "period,i,j\n";
  for (std::size_t t = 0; t < series.nets.size(); ++t) {
    for (auto [a, b] : series.nets[t].edges()) {
      os << t << ',' << series.ids[static_cast<std::size_t>(a)] << ','
         << series.ids[static_cast<std::size_t>(b)] << '\n';
    }
  }
}

}  // namespace netstab
