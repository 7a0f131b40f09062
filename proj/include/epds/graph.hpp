#pragma once

#include <utility>
#include <vector>

#include "epds/types.hpp"

namespace epds {

/// Undirected communication graph among the sources, with a transport
/// delay per link and a delay on the broadcast bus-voltage measurement.
class CommGraph {
 public:
  CommGraph() = default;

  /// Zero-based edge list. Throws ConfigError on self-loops, out-of-range
  /// endpoints or negative delay. Duplicate edges are merged.
  CommGraph(Index n, const std::vector<std::pair<Index, Index>>& edges, double link_delay_s = 0.0,
            double broadcast_delay_s = 0.0);

  static CommGraph path(Index n, double link_delay_s = 0.0);
  static CommGraph ring(Index n, double link_delay_s = 0.0);
  static CommGraph complete(Index n, double link_delay_s = 0.0);

  Index size() const { return n_; }
  const std::vector<Index>& neighbors(Index i) const { return neighbors_[static_cast<std::size_t>(i)]; }
  bool adjacent(Index i, Index j) const;
  std::vector<std::pair<Index, Index>> edges() const;

  /// Integer-weight Laplacian: degree on the diagonal, -1 per link.
  Matrix laplacian() const;
  bool connected() const;

  double link_delay(Index i, Index j) const { return delay_(i, j); }
  void set_link_delay(Index i, Index j, double delay_s);
  double broadcast_delay() const { return broadcast_delay_; }
  void set_broadcast_delay(double delay_s);
  double max_delay() const;

  /// Throws ConfigError unless the graph is connected and has n nodes.
  void validate(Index n) const;

 private:
  Index n_ = 0;
  std::vector<std::vector<Index>> neighbors_;
  Matrix delay_;
  double broadcast_delay_ = 0.0;
};

}  // namespace epds
