#include "epds/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epds {

CommGraph::CommGraph(Index n, const std::vector<std::pair<Index, Index>>& edges,
                     double link_delay_s, double broadcast_delay_s)
    : n_(n), neighbors_(static_cast<std::size_t>(n)), delay_(Matrix::Zero(n, n)) {
  if (n < 1) throw ConfigError("communication graph needs at least one node");
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      std::ostringstream msg;
      msg << "edge (" << a + 1 << ", " << b + 1 << ") references a node outside 1.." << n;
      throw ConfigError(msg.str());
    }
    if (a == b) {
      std::ostringstream msg;
      msg << "self-loop on node " << a + 1;
      throw ConfigError(msg.str());
    }
    auto& na = neighbors_[static_cast<std::size_t>(a)];
    if (std::find(na.begin(), na.end(), b) == na.end()) {
      na.push_back(b);
      neighbors_[static_cast<std::size_t>(b)].push_back(a);
    }
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  for (Index i = 0; i < n; ++i) {
    for (Index j : neighbors(i)) set_link_delay(i, j, link_delay_s);
  }
  set_broadcast_delay(broadcast_delay_s);
}

CommGraph CommGraph::path(Index n, double link_delay_s) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return CommGraph(n, edges, link_delay_s, link_delay_s);
}

CommGraph CommGraph::ring(Index n, double link_delay_s) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (n > 2) edges.emplace_back(n - 1, 0);
  return CommGraph(n, edges, link_delay_s, link_delay_s);
}

CommGraph CommGraph::complete(Index n, double link_delay_s) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return CommGraph(n, edges, link_delay_s, link_delay_s);
}

bool CommGraph::adjacent(Index i, Index j) const {
  const auto& list = neighbors(i);
  return std::binary_search(list.begin(), list.end(), j);
}

std::vector<std::pair<Index, Index>> CommGraph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < n_; ++i)
    for (Index j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

Matrix CommGraph::laplacian() const {
  Matrix L = Matrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    for (Index j : neighbors(i)) L(i, j) = -1.0;
    L(i, i) = static_cast<double>(neighbors(i).size());
  }
  return L;
}

bool CommGraph::connected() const {
  if (n_ == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::vector<Index> stack{0};
  seen[0] = true;
  Index count = 1;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j : neighbors(i)) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == n_;
}

void CommGraph::set_link_delay(Index i, Index j, double delay_s) {
  if (!adjacent(i, j)) {
    std::ostringstream msg;
    msg << "no link between nodes " << i + 1 << " and " << j + 1;
    throw ConfigError(msg.str());
  }
  if (!std::isfinite(delay_s) || delay_s < 0.0) throw ConfigError("link delay must be >= 0");
  delay_(i, j) = delay_s;
  delay_(j, i) = delay_s;
}

void CommGraph::set_broadcast_delay(double delay_s) {
  if (!std::isfinite(delay_s) || delay_s < 0.0) throw ConfigError("broadcast delay must be >= 0");
  broadcast_delay_ = delay_s;
}

double CommGraph::max_delay() const {
  const double links = n_ > 0 ? delay_.maxCoeff() : 0.0;
  return std::max(links, broadcast_delay_);
}

void CommGraph::validate(Index n) const {
  if (n_ != n) {
    std::ostringstream msg;
    msg << "communication graph has " << n_ << " nodes, plant has " << n;
    throw ConfigError(msg.str());
  }
  if (!connected()) throw ConfigError("communication graph is not connected");
}

}  // namespace epds
