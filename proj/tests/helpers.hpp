#pragma once

// Shared graph builders for tests.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "scrank/graph.hpp"

namespace test_helpers {

// Random digraph with roughly `target_arcs` arcs; `reciprocate_prob` of the
// drawn pairs also add the reverse arc, giving mixed reciprocity.
inline scrank::DirectedGraph random_digraph(std::size_t n, std::size_t target_arcs,
                                            double reciprocate_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(n - 1));
  std::bernoulli_distribution both(reciprocate_prob);
  std::vector<scrank::Arc> arcs;
  arcs.reserve(target_arcs * 2);
  while (arcs.size() < target_arcs) {
    const std::uint32_t u = node(rng);
    const std::uint32_t v = node(rng);
    if (u == v) continue;
    arcs.emplace_back(u, v);
    if (both(rng)) arcs.emplace_back(v, u);
  }
  return scrank::DirectedGraph(n, std::move(arcs));
}

// Complete bipartite digraph: arcs from every node in [0, half) to every
// node in [half, 2*half). Every node on the left has out-degree `half`,
// every node on the right has in-degree `half`, nothing is reciprocated.
inline scrank::ArcSet complete_bipartite_arcs(std::uint32_t half) {
  std::vector<scrank::Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(half) * half);
  for (std::uint32_t u = 0; u < half; ++u) {
    for (std::uint32_t v = half; v < 2 * half; ++v) arcs.emplace_back(u, v);
  }
  return scrank::ArcSet(2 * half, std::move(arcs));
}

// Random undirected edge list (no self-loops, deduplicated by construction
// order being irrelevant to the consumers).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> random_undirected_edges(
    std::size_t n, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return edges;
}

}  // namespace test_helpers
