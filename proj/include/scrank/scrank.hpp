#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "numeric.hpp"
#include "rng.hpp"
#include "transfer.hpp"

// Core celebrity/spammer scoring iteration:
//   c_v = F_c( sum over unreciprocated in-arcs (u,v) of (1 - s_u) )
//   s_v = F_s( sum over unreciprocated out-arcs (v,u) of (1 - c_u) )
// run as two phases per iteration (all c from the current s, then all s from
// the new c) until the max score change drops below epsilon.

namespace scrank {

struct InitSpec {
  enum class Kind { constant, uniform_random };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::uint64_t seed = 0;

  static InitSpec zeros() { return {Kind::constant, 0.0, 0}; }
  static InitSpec ones() { return {Kind::constant, 1.0, 0}; }
  static InitSpec constant(double x) { return {Kind::constant, x, 0}; }
  static InitSpec random(std::uint64_t seed) { return {Kind::uniform_random, 0.0, seed}; }

  std::string name() const {
    if (kind == Kind::uniform_random) return "rand";
    std::ostringstream os;
    os << value;
    return os.str();
  }
};

struct IterationConfig {
  double epsilon = 1e-6;
  int max_iterations = 50;
  InitSpec init = InitSpec::constant(0.5);
  int workers = 1;
};

struct ScoreState {
  std::vector<double> c, s;
  int iteration_count = 0;
};

struct TraceRow {
  double delta_inf = 0.0;
  double l1_c = 0.0;
  double l1_s = 0.0;
  long double potential = 0.0L;
  double millis = 0.0;
};

struct IterationTrace {
  long double initial_potential = 0.0L;
  std::vector<TraceRow> rows;
};

struct IterateResult {
  ScoreState state;
  IterationTrace trace;
  bool converged = false;
};

namespace detail {

inline void check_transfer_field(const TransferField& f, std::size_t n, const char* which) {
  if (!f.is_uniform() && f.per_vertex_size() != n) {
    throw invalid_input_error(std::string(which) +
                              " per-vertex transfer table size does not match node count");
  }
}

// Runs fn(begin,end) over [0,n) split into contiguous chunks on `workers`
// threads. Chunking never changes per-node results (each node is written by
// exactly one worker and summation order within a node is fixed).
template <typename Fn>
void parallel_ranges(std::size_t n, int workers, Fn&& fn) {
  const std::size_t w =
      std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(workers)));
  if (w <= 1) {
    fn(static_cast<NodeId>(0), static_cast<NodeId>(n));
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t k = 0; k < w; ++k) {
    const NodeId lo = static_cast<NodeId>(std::min(n, k * chunk));
    const NodeId hi = static_cast<NodeId>(std::min(n, (k + 1) * chunk));
    threads.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace detail

// Phase 1: c_out[v] = F_c(v)( sum_{(u,v) in A} (1 - s[u]) ).
inline void celebrity_phase(const ArcSet& a, const std::vector<double>& s,
                            const TransferField& fc, std::vector<double>& c_out,
                            int workers = 1) {
  const std::size_t n = a.node_count();
  if (s.size() != n) throw invalid_input_error("spammer vector size does not match graph");
  detail::check_transfer_field(fc, n, "celebrity");
  c_out.resize(n);
  detail::parallel_ranges(n, workers, [&](NodeId lo, NodeId hi) {
    for (NodeId v = lo; v < hi; ++v) {
      double sum = 0.0;
      for (NodeId u : a.in_neighbors(v)) sum += 1.0 - s[u];
      c_out[v] = fc[v](sum);
    }
  });
}

// Phase 2: s_out[v] = F_s(v)( sum_{(v,u) in A} (1 - c[u]) ).
inline void spammer_phase(const ArcSet& a, const std::vector<double>& c,
                          const TransferField& fs, std::vector<double>& s_out,
                          int workers = 1) {
  const std::size_t n = a.node_count();
  if (c.size() != n) throw invalid_input_error("celebrity vector size does not match graph");
  detail::check_transfer_field(fs, n, "spammer");
  s_out.resize(n);
  detail::parallel_ranges(n, workers, [&](NodeId lo, NodeId hi) {
    for (NodeId v = lo; v < hi; ++v) {
      double sum = 0.0;
      for (NodeId u : a.out_neighbors(v)) sum += 1.0 - c[u];
      s_out[v] = fs[v](sum);
    }
  });
}

inline std::vector<double> celebrity_update(const ArcSet& a, const std::vector<double>& s,
                                            const TransferFunction& fc) {
  std::vector<double> c;
  celebrity_phase(a, s, TransferField(fc), c);
  return c;
}

inline std::vector<double> spammer_update(const ArcSet& a, const std::vector<double>& c,
                                          const TransferFunction& fs) {
  std::vector<double> s;
  spammer_phase(a, c, TransferField(fs), s);
  return s;
}

// P(c,s) = sum_{(u,v) in A} (1-s_u)(1-c_v) + sum_v Gc(c_v) + sum_v Gs(s_v),
// evaluated in long double with compensated summation: per-iteration
// decreases near convergence are many orders below P itself.
inline long double potential(const ArcSet& a, const std::vector<double>& c,
                             const std::vector<double>& s, const TransferField& fc,
                             const TransferField& fs) {
  const std::size_t n = a.node_count();
  if (c.size() != n || s.size() != n) {
    throw invalid_input_error("score vector size does not match graph");
  }
  detail::check_transfer_field(fc, n, "celebrity");
  detail::check_transfer_field(fs, n, "spammer");
  NeumaierSum acc;
  for (NodeId u = 0; u < n; ++u) {
    const auto nbrs = a.out_neighbors(u);
    if (nbrs.empty()) continue;
    long double inner = 0.0L;
    for (NodeId v : nbrs) inner += 1.0L - static_cast<long double>(c[v]);
    acc.add((1.0L - static_cast<long double>(s[u])) * inner);
  }
  for (NodeId v = 0; v < n; ++v) {
    acc.add(fc[v].g_l(c[v]));
    acc.add(fs[v].g_l(s[v]));
  }
  return acc.value();
}

inline long double potential(const ArcSet& a, const ScoreState& st,
                             const TransferFunction& fc, const TransferFunction& fs) {
  return potential(a, st.c, st.s, TransferField(fc), TransferField(fs));
}

inline std::vector<double> make_init_vector(const InitSpec& init, std::size_t n,
                                            std::uint64_t stream) {
  if (init.kind == InitSpec::Kind::constant) {
    if (!(init.value >= 0.0 && init.value <= 1.0)) {
      throw invalid_input_error("constant init value must lie in [0,1]");
    }
    return std::vector<double>(n, init.value);
  }
  std::vector<double> x(n);
  for (std::size_t v = 0; v < n; ++v) {
    // Keyed by node id (not by draw order), so values are order-independent.
    x[v] = unit_from_key(init.seed, (static_cast<std::uint64_t>(v) << 1) | stream);
  }
  return x;
}

inline IterateResult iterate(const ArcSet& a, const TransferField& fc,
                             const TransferField& fs, const IterationConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw invalid_input_error("epsilon must be > 0");
  if (cfg.max_iterations < 1) throw invalid_input_error("max_iterations must be >= 1");
  const std::size_t n = a.node_count();
  detail::check_transfer_field(fc, n, "celebrity");
  detail::check_transfer_field(fs, n, "spammer");

  IterateResult res;
  res.state.c = make_init_vector(cfg.init, n, 0);
  res.state.s = make_init_vector(cfg.init, n, 1);
  res.trace.initial_potential = potential(a, res.state.c, res.state.s, fc, fs);

  std::vector<double> c_new(n), s_new(n);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    celebrity_phase(a, res.state.s, fc, c_new, cfg.workers);
    spammer_phase(a, c_new, fs, s_new, cfg.workers);

    double delta_inf = 0.0, l1_c = 0.0, l1_s = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double dc = std::fabs(c_new[v] - res.state.c[v]);
      const double ds = std::fabs(s_new[v] - res.state.s[v]);
      delta_inf = std::max({delta_inf, dc, ds});
      l1_c += dc;
      l1_s += ds;
    }
    res.state.c.swap(c_new);
    res.state.s.swap(s_new);
    res.state.iteration_count = t;

    TraceRow row;
    row.delta_inf = delta_inf;
    row.l1_c = l1_c;
    row.l1_s = l1_s;
    row.potential = potential(a, res.state.c, res.state.s, fc, fs);
    row.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    res.trace.rows.push_back(row);

    if (delta_inf < cfg.epsilon) {
      res.converged = true;
      break;
    }
  }
  return res;
}

inline IterateResult iterate(const ArcSet& a, const TransferFunction& fc,
                             const TransferFunction& fs, const IterationConfig& cfg) {
  return iterate(a, TransferField(fc), TransferField(fs), cfg);
}

struct FixedPointCheck {
  bool ok = false;
  double worst_residual = 0.0;
  NodeId worst_node = 0;
};

// Max over vertices of the two update-equation residuals, compared to eps.
inline FixedPointCheck is_eps_fixed_point(const ArcSet& a, const ScoreState& st,
                                          const TransferField& fc, const TransferField& fs,
                                          double eps) {
  if (!(eps > 0.0)) throw invalid_input_error("eps must be > 0");
  std::vector<double> c_ref, s_ref;
  celebrity_phase(a, st.s, fc, c_ref);
  spammer_phase(a, st.c, fs, s_ref);
  FixedPointCheck out;
  for (NodeId v = 0; v < a.node_count(); ++v) {
    const double r = std::max(std::fabs(c_ref[v] - st.c[v]), std::fabs(s_ref[v] - st.s[v]));
    if (r > out.worst_residual) {
      out.worst_residual = r;
      out.worst_node = v;
    }
  }
  out.ok = out.worst_residual <= eps;
  return out;
}

inline FixedPointCheck is_eps_fixed_point(const ArcSet& a, const ScoreState& st,
                                          const TransferFunction& fc,
                                          const TransferFunction& fs, double eps) {
  return is_eps_fixed_point(a, st, TransferField(fc), TransferField(fs), eps);
}

// Tolerance at which a state accepted via "max change < eps" is still an
// approximate fixed point: one phase of staleness can amplify the residual
// by at most (derivative bound) * (max degree).
inline double derived_fixed_point_tolerance(const ArcSet& a, const TransferField& fc,
                                            const TransferField& fs, double eps) {
  const double alpha = std::max(fc.max_lipschitz(), fs.max_lipschitz());
  return eps * (1.0 + alpha * static_cast<double>(a.max_degree()));
}

inline double lipschitz_bound(const TransferFunction& f) { return f.lipschitz_bound(); }

}  // namespace scrank
