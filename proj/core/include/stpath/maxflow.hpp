#pragma once

/// @file maxflow.hpp
/// @brief Dense Edmonds-Karp max-flow on undirected capacities.

#include <vector>

#include "stpath/graph.hpp"
#include "stpath/simplex.hpp"

namespace stpath {

template <class Scalar>
class MaxFlow {
  using Ops = ScalarOps<Scalar>;

 public:
  explicit MaxFlow(int n) : n_(n), residual_(static_cast<std::size_t>(n) * n, Scalar(0)) {}

  void add_undirected(int u, int v, const Scalar& capacity) {
    residual_[u * n_ + v] += capacity;
    residual_[v * n_ + u] += capacity;
  }

  void add_directed(int u, int v, const Scalar& capacity) { residual_[u * n_ + v] += capacity; }

  Scalar solve(int source, int sink) {
    source_ = source;
    Scalar total(0);
    std::vector<int> prev(n_);
    while (true) {
      std::fill(prev.begin(), prev.end(), -1);
      prev[source] = source;
      std::vector<int> queue{source};
      for (std::size_t head = 0; head < queue.size() && prev[sink] < 0; ++head) {
        const int v = queue[head];
        for (int w = 0; w < n_; ++w) {
          if (prev[w] < 0 && Ops::is_positive(residual_[v * n_ + w])) {
            prev[w] = v;
            queue.push_back(w);
          }
        }
      }
      if (prev[sink] < 0) break;
      Scalar bottleneck = residual_[prev[sink] * n_ + sink];
      for (int w = sink; w != source; w = prev[w]) {
        const Scalar& c = residual_[prev[w] * n_ + w];
        if (c < bottleneck) bottleneck = c;
      }
      for (int w = sink; w != source; w = prev[w]) {
        residual_[prev[w] * n_ + w] -= bottleneck;
        residual_[w * n_ + prev[w]] += bottleneck;
      }
      total += bottleneck;
    }
    return total;
  }

  /// Vertices reachable from the source in the final residual graph: the
  /// inclusion-minimal minimum cut.
  VertexSet source_side() const {
    VertexSet seen = singleton(source_);
    std::vector<int> stack{source_};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n_; ++w) {
        if (!contains(seen, w) && Ops::is_positive(residual_[v * n_ + w])) {
          seen |= singleton(w);
          stack.push_back(w);
        }
      }
    }
    return seen;
  }

 private:
  int n_;
  int source_ = 0;
  std::vector<Scalar> residual_;
};

}  // namespace stpath
