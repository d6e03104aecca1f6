#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

// Synthetic digraphs with planted celebrity and spammer sets. An undirected
// "friendship" graph H is generated first (Erdos-Renyi or Chung-Lu expected
// degrees); each H-edge becomes two arcs with probability 1-p, otherwise one
// arc in a uniformly random direction. Planted spammers then emit arcs to
// uniform targets, planted celebrities receive arcs from uniform sources,
// and duplicates from overlapping mechanisms collapse in the final graph.

namespace scrank::synth {

struct ErdosRenyi {
  double edge_prob = 0.0;
};

struct ChungLu {
  double exponent = 0.5;
  double avg_degree = 100.0;
};

using HModel = std::variant<ErdosRenyi, ChungLu>;

struct GeneratorParams {
  std::size_t n = 0;
  std::size_t n_c = 0;
  std::size_t n_s = 0;
  double p = 0.2;
  double p_c = 0.0;
  double p_s = 0.0;
  HModel h_model = ChungLu{0.5, 100.0};
  std::uint64_t seed = 1;
};

inline void validate_params(const GeneratorParams& gp) {
  if (gp.n == 0) throw invalid_input_error("generator needs at least one node");
  if (gp.n_c + gp.n_s > gp.n) {
    throw invalid_input_error("planted celebrity and spammer counts exceed the node count");
  }
  auto check_prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw invalid_input_error(std::string(name) + " must lie in [0,1]");
    }
  };
  check_prob(gp.p, "p");
  check_prob(gp.p_c, "p_c");
  check_prob(gp.p_s, "p_s");
  if (const auto* er = std::get_if<ErdosRenyi>(&gp.h_model)) {
    check_prob(er->edge_prob, "edge_prob");
  } else {
    const auto& cl = std::get<ChungLu>(gp.h_model);
    if (!(cl.exponent >= 0.0)) throw invalid_input_error("exponent must be >= 0");
    if (!(cl.avg_degree >= 0.0) ||
        cl.avg_degree > static_cast<double>(gp.n - 1)) {
      throw invalid_input_error("infeasible average degree: must lie in [0, node count - 1]");
    }
  }
}

// Disjoint planted sets, stored sorted for binary-search membership.
struct GroundTruth {
  std::vector<NodeId> celebrities;
  std::vector<NodeId> spammers;

  bool is_celebrity(NodeId v) const {
    return std::binary_search(celebrities.begin(), celebrities.end(), v);
  }
  bool is_spammer(NodeId v) const {
    return std::binary_search(spammers.begin(), spammers.end(), v);
  }
};

// Emission counts per mechanism, before duplicate collapse in the graph.
struct RealizedStats {
  std::size_t h_edges = 0;
  std::size_t reciprocated_pairs = 0;
  std::size_t spam_arcs = 0;
  std::size_t celebrity_arcs = 0;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct ExpectedStats {
  MeanSd h_edges;
  MeanSd reciprocated_pairs;
  MeanSd spam_arcs;
  MeanSd celebrity_arcs;
};

struct PlantedInstance {
  DirectedGraph graph;
  GroundTruth truth;
  GeneratorParams params;
  RealizedStats stats;
};

namespace detail {

// Uniform in [0,1) from the top 53 bits of the engine output.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Chung-Lu node weights: w_i proportional to (i+1)^(-exponent), scaled so the
// mean weight (hence the uncapped expected degree) equals avg_degree.
inline std::vector<double> chung_lu_weights(std::size_t n, const ChungLu& cl) {
  std::vector<double> w(n);
  double raw_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -cl.exponent);
    raw_sum += w[i];
  }
  const double scale = cl.avg_degree * static_cast<double>(n) / raw_sum;
  for (double& v : w) v *= scale;
  return w;
}

inline void erdos_renyi_edges(std::size_t n, double prob, std::mt19937_64& rng,
                              std::vector<std::pair<NodeId, NodeId>>& out) {
  if (prob <= 0.0) return;
  if (prob >= 1.0) {
    for (std::size_t u = 0; u + 1 < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        out.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      }
    }
    return;
  }
  // Walk the pairs (u,v), u < v, in lexicographic order, skipping a
  // geometric number of candidates between successive edges.
  const double log_q = std::log1p(-prob);
  for (std::size_t u = 0; u + 1 < n; ++u) {
    std::size_t v = u;  // position before the first candidate u+1
    while (true) {
      const double r = unit(rng);
      const double skip = std::floor(std::log1p(-r) / log_q);
      v += 1 + static_cast<std::size_t>(std::min(skip, 1e18));
      if (v >= n) break;
      out.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
  }
}

// Miller-Hagberg sampling for Chung-Lu: weights are non-increasing in the
// node index, so within a row the connection probability only falls; skip
// geometrically under the current probability and thin to the exact one.
inline void chung_lu_edges(const std::vector<double>& w, std::mt19937_64& rng,
                           std::vector<std::pair<NodeId, NodeId>>& out) {
  const std::size_t n = w.size();
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) return;
  for (std::size_t u = 0; u + 1 < n; ++u) {
    std::size_t v = u + 1;
    double p = std::min(1.0, w[u] * w[v] / total);
    while (v < n && p > 0.0) {
      if (p < 1.0) {
        const double r = unit(rng);
        const double skip = std::floor(std::log1p(-r) / std::log1p(-p));
        v += static_cast<std::size_t>(std::min(skip, 1e18));
      }
      if (v < n) {
        const double q = std::min(1.0, w[u] * w[v] / total);
        if (unit(rng) < q / p) {
          out.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
        }
        p = q;
        ++v;
      }
    }
  }
}

// k distinct uniform picks from {0,..,n-1} \ {excluded}.
inline void distinct_targets(std::size_t n, NodeId excluded, std::size_t k,
                             std::mt19937_64& rng, std::vector<NodeId>& out) {
  if (k == 0) return;
  if (k * 3 >= n) {
    // Dense draw: partial Fisher-Yates over the full candidate list.
    std::vector<NodeId> pool;
    pool.reserve(n - 1);
    for (std::size_t v = 0; v < n; ++v) {
      if (static_cast<NodeId>(v) != excluded) pool.push_back(static_cast<NodeId>(v));
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out.push_back(pool[i]);
    }
    return;
  }
  std::unordered_set<NodeId> chosen;
  chosen.reserve(k * 2);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (chosen.size() < k) {
    const NodeId v = static_cast<NodeId>(pick(rng));
    if (v == excluded) continue;
    if (chosen.insert(v).second) out.push_back(v);
  }
}

}  // namespace detail

// Undirected friendship edges (u < v in every pair).
inline std::vector<std::pair<NodeId, NodeId>> generate_h(const GeneratorParams& gp,
                                                         std::mt19937_64& rng) {
  validate_params(gp);
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (const auto* er = std::get_if<ErdosRenyi>(&gp.h_model)) {
    edges.reserve(static_cast<std::size_t>(
        er->edge_prob * 0.5 * static_cast<double>(gp.n) * static_cast<double>(gp.n - 1) * 1.05));
    detail::erdos_renyi_edges(gp.n, er->edge_prob, rng, edges);
  } else {
    const auto& cl = std::get<ChungLu>(gp.h_model);
    edges.reserve(static_cast<std::size_t>(
        cl.avg_degree * 0.5 * static_cast<double>(gp.n) * 1.05));
    detail::chung_lu_edges(detail::chung_lu_weights(gp.n, cl), rng, edges);
  }
  return edges;
}

inline PlantedInstance plant(const std::vector<std::pair<NodeId, NodeId>>& h_edges,
                             const GeneratorParams& gp, std::mt19937_64& rng) {
  validate_params(gp);
  const std::size_t n = gp.n;

  // Planted sets: partial Fisher-Yates over the identity permutation; the
  // first n_c entries become celebrities, the next n_s spammers.
  GroundTruth truth;
  {
    std::vector<NodeId> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
    for (std::size_t i = 0; i < gp.n_c + gp.n_s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    truth.celebrities.assign(perm.begin(), perm.begin() + gp.n_c);
    truth.spammers.assign(perm.begin() + gp.n_c, perm.begin() + gp.n_c + gp.n_s);
    std::sort(truth.celebrities.begin(), truth.celebrities.end());
    std::sort(truth.spammers.begin(), truth.spammers.end());
  }

  RealizedStats stats;
  stats.h_edges = h_edges.size();

  std::vector<Arc> arcs;
  arcs.reserve(h_edges.size() * 2);
  std::bernoulli_distribution reciprocate(1.0 - gp.p);
  std::bernoulli_distribution coin(0.5);
  for (const auto& [u, v] : h_edges) {
    if (reciprocate(rng)) {
      arcs.push_back({u, v});
      arcs.push_back({v, u});
      ++stats.reciprocated_pairs;
    } else if (coin(rng)) {
      arcs.push_back({u, v});
    } else {
      arcs.push_back({v, u});
    }
  }

  std::vector<NodeId> picks;
  if (gp.p_s > 0.0) {
    std::binomial_distribution<std::size_t> spam_count(n - 1, gp.p_s);
    for (NodeId u : truth.spammers) {
      const std::size_t k = spam_count(rng);
      picks.clear();
      detail::distinct_targets(n, u, k, rng, picks);
      for (NodeId v : picks) arcs.push_back({u, v});
      stats.spam_arcs += k;
    }
  }
  if (gp.p_c > 0.0) {
    std::binomial_distribution<std::size_t> celeb_count(n - 1, gp.p_c);
    for (NodeId v : truth.celebrities) {
      const std::size_t k = celeb_count(rng);
      picks.clear();
      detail::distinct_targets(n, v, k, rng, picks);
      for (NodeId u : picks) arcs.push_back({u, v});
      stats.celebrity_arcs += k;
    }
  }

  return PlantedInstance{DirectedGraph(n, std::move(arcs)), std::move(truth), gp, stats};
}

inline PlantedInstance generate_instance(const GeneratorParams& gp) {
  validate_params(gp);
  std::mt19937_64 rng(gp.seed);
  const auto h_edges = generate_h(gp, rng);
  return plant(h_edges, gp, rng);
}

// Closed-form means and standard deviations per mechanism, for generator
// self-checks (each realized count should land within a few sd of its mean).
inline ExpectedStats expected_stats(const GeneratorParams& gp) {
  validate_params(gp);
  ExpectedStats ex;
  const double n = static_cast<double>(gp.n);

  if (const auto* er = std::get_if<ErdosRenyi>(&gp.h_model)) {
    const double pairs = 0.5 * n * (n - 1.0);
    ex.h_edges.mean = pairs * er->edge_prob;
    ex.h_edges.sd = std::sqrt(pairs * er->edge_prob * (1.0 - er->edge_prob));
  } else {
    // Exact capped sums: weights are non-increasing, so for each u the
    // capped partners v > u form a prefix; a two-pointer frontier plus
    // suffix sums of w and w^2 give sum(p) and sum(p^2) in O(n).
    const auto w = detail::chung_lu_weights(gp.n, std::get<ChungLu>(gp.h_model));
    double total = 0.0;
    for (double x : w) total += x;
    double mean = 0.0, sum_p2 = 0.0;
    if (total > 0.0) {
      std::vector<double> suf(gp.n + 1, 0.0), suf2(gp.n + 1, 0.0);
      for (std::size_t i = gp.n; i-- > 0;) {
        suf[i] = suf[i + 1] + w[i];
        suf2[i] = suf2[i + 1] + w[i] * w[i];
      }
      // cut = first index v with w[u]*w[v] < total. As u grows w[u] shrinks,
      // so the capped prefix only gets shorter and the pointer sweeps left.
      std::size_t cut = gp.n;
      for (std::size_t u = 0; u + 1 < gp.n; ++u) {
        while (cut > 0 && w[u] * w[cut - 1] < total) --cut;
        const std::size_t frontier = std::max(cut, u + 1);
        const double capped = static_cast<double>(frontier - (u + 1));
        mean += capped + w[u] * suf[frontier] / total;
        sum_p2 += capped + (w[u] * w[u]) * suf2[frontier] / (total * total);
      }
    }
    ex.h_edges.mean = mean;
    ex.h_edges.sd = std::sqrt(std::max(0.0, mean - sum_p2));
  }

  // Reciprocation is a Bernoulli(1-p) thinning of the H-edge count:
  // Var = E[H]*(1-p)*p + (1-p)^2 * Var[H].
  ex.reciprocated_pairs.mean = ex.h_edges.mean * (1.0 - gp.p);
  ex.reciprocated_pairs.sd =
      std::sqrt(ex.h_edges.mean * (1.0 - gp.p) * gp.p +
                (1.0 - gp.p) * (1.0 - gp.p) * ex.h_edges.sd * ex.h_edges.sd);

  const double spam_trials = static_cast<double>(gp.n_s) * (n - 1.0);
  ex.spam_arcs.mean = spam_trials * gp.p_s;
  ex.spam_arcs.sd = std::sqrt(spam_trials * gp.p_s * (1.0 - gp.p_s));
  const double celeb_trials = static_cast<double>(gp.n_c) * (n - 1.0);
  ex.celebrity_arcs.mean = celeb_trials * gp.p_c;
  ex.celebrity_arcs.sd = std::sqrt(celeb_trials * gp.p_c * (1.0 - gp.p_c));
  return ex;
}

// Expected arc emissions before duplicate collapse (memory planning).
inline double expected_arc_emissions(const GeneratorParams& gp) {
  const ExpectedStats ex = expected_stats(gp);
  return 2.0 * ex.reciprocated_pairs.mean + (ex.h_edges.mean - ex.reciprocated_pairs.mean) +
         ex.spam_arcs.mean + ex.celebrity_arcs.mean;
}

// Named parameter sets. "desk" is sized for laptop runs; "paper-2M" keeps
// the same per-node arc expectations at 2M nodes; "throughput" produces a
// ~10.3M-arc fully unreciprocated graph for timing runs.
inline GeneratorParams desk_preset() {
  GeneratorParams gp;
  gp.n = 20000;
  gp.n_c = 100;
  gp.n_s = 250;
  gp.p = 0.2;
  gp.p_c = 0.025;
  gp.p_s = 0.025;
  gp.h_model = ChungLu{0.5, 100.0};
  return gp;
}

inline GeneratorParams paper_2m_preset() {
  GeneratorParams gp;
  gp.n = 2000000;
  gp.n_c = 1000;
  gp.n_s = 5000;
  gp.p = 0.2;
  gp.p_c = 0.00025;
  gp.p_s = 0.00025;
  gp.h_model = ChungLu{0.5, 100.0};
  return gp;
}

inline GeneratorParams throughput_preset() {
  GeneratorParams gp;
  gp.n = 200000;
  gp.n_c = 0;
  gp.n_s = 0;
  gp.p = 1.0;
  gp.p_c = 0.0;
  gp.p_s = 0.0;
  gp.h_model = ChungLu{0.5, 103.0};
  return gp;
}

inline std::optional<GeneratorParams> preset_by_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "desk") return desk_preset();
  if (name == "paper-2m" || name == "paper_2m") return paper_2m_preset();
  if (name == "throughput") return throughput_preset();
  return std::nullopt;
}

}  // namespace scrank::synth
