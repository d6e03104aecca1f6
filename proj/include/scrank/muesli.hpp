#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "normal.hpp"
#include "numeric.hpp"
#include "rng.hpp"
#include "transfer.hpp"

// Generic one-variable-at-a-time iteration: bounded variables x_i in
// [lo_i, hi_i], a symmetric zero-diagonal weight matrix W, and per-variable
// strictly increasing C^1 update functions; activating variable i sets
// x_i <- F_i((Wx)_i). The potential P(x) = sum_i G_i(x_i) - x'Wx/2 with
// G_i the antiderivative of F_i^{-1} decreases at every step, under any
// activation sequence.

namespace scrank::muesli {

// Strictly increasing C^1 map from the reals onto (lo, hi), with closed-form
// inverse, antiderivative-of-inverse, and derivative bound. Two families:
// a rescaled normal CDF and a logistic sigmoid.
class UpdateFn {
 public:
  enum class Family { normal_cdf, logistic };

  static UpdateFn normal(double mu, double sigma, double lo = 0.0, double hi = 1.0) {
    if (!(sigma > 0.0)) throw invalid_input_error("normal update needs sigma > 0");
    return UpdateFn(Family::normal_cdf, mu, sigma, lo, hi);
  }

  static UpdateFn logistic(double center, double steepness, double lo, double hi) {
    if (!(steepness > 0.0)) throw invalid_input_error("logistic update needs steepness > 0");
    return UpdateFn(Family::logistic, center, steepness, lo, hi);
  }

  Family family() const { return family_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Location/scale: (mu, sigma) for the normal family, (center, steepness)
  // for the logistic family.
  double location() const { return p1_; }
  double scale() const { return p2_; }

  double operator()(double x) const {
    const double u = (family_ == Family::normal_cdf)
                         ? std_normal_cdf((x - p1_) / p2_)
                         : 1.0 / (1.0 + std::exp(-p2_ * (x - p1_)));
    return lo_ + (hi_ - lo_) * u;
  }

  // Defined on (lo, hi); +-inf at the endpoints.
  double inverse(double y) const {
    const double u = (y - lo_) / (hi_ - lo_);
    if (family_ == Family::normal_cdf) return p1_ + p2_ * std_normal_quantile(u);
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return p1_ + std::log(u / (1.0 - u)) / p2_;
  }

  // g(z) = integral of inverse(t) dt from base to z, where base is 0 clamped
  // into [lo, hi] (the lower limit only shifts the potential by a constant).
  long double g_l(long double z) const {
    const long double lo_l = lo_, hi_l = hi_;
    if (!(z >= lo_l && z <= hi_l)) throw invalid_input_error("g(z) needs z within bounds");
    const long double base = std::clamp(0.0L, lo_l, hi_l);
    const long double width = hi_l - lo_l;
    const long double uz = (z - lo_l) / width;
    const long double ub = (base - lo_l) / width;
    const long double loc = p1_;
    if (family_ == Family::normal_cdf) {
      const long double sc = p2_;
      auto neg_pdf_at_quantile = [](long double u) {
        if (u <= 0.0L || u >= 1.0L) return 0.0L;
        return -std_normal_pdf_l(std_normal_quantile_l(u));
      };
      return loc * (z - base) +
             sc * width * (neg_pdf_at_quantile(uz) - neg_pdf_at_quantile(ub));
    }
    const long double k = p2_;
    auto entropy_term = [](long double u) {
      if (u <= 0.0L || u >= 1.0L) return 0.0L;
      return u * std::log(u) + (1.0L - u) * std::log(1.0L - u);
    };
    return loc * (z - base) + width / k * (entropy_term(uz) - entropy_term(ub));
  }

  double g(double z) const { return static_cast<double>(g_l(z)); }

  // Global maximum of F'.
  double derivative_bound() const {
    if (family_ == Family::normal_cdf) return (hi_ - lo_) * kInvSqrt2Pi / p2_;
    return (hi_ - lo_) * p2_ / 4.0;
  }

 private:
  UpdateFn(Family family, double p1, double p2, double lo, double hi)
      : family_(family), p1_(p1), p2_(p2), lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw invalid_input_error("update function needs lo < hi");
  }

  Family family_;
  double p1_, p2_;
  double lo_, hi_;
};

// Deterministic rule t -> variable index.
class ActivationSequence {
 public:
  static ActivationSequence round_robin(std::size_t n) {
    if (n == 0) throw invalid_input_error("activation sequence needs n > 0");
    ActivationSequence s;
    s.n_ = n;
    s.kind_ = Kind::round_robin;
    return s;
  }

  static ActivationSequence cycle(std::vector<NodeId> order, std::size_t n) {
    if (order.empty()) throw invalid_input_error("activation cycle needs a nonempty list");
    for (NodeId i : order) {
      if (i >= n) throw invalid_input_error("activation cycle index out of range");
    }
    ActivationSequence s;
    s.n_ = n;
    s.kind_ = Kind::cycle;
    s.order_ = std::move(order);
    return s;
  }

  static ActivationSequence random(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw invalid_input_error("activation sequence needs n > 0");
    ActivationSequence s;
    s.n_ = n;
    s.kind_ = Kind::random;
    s.seed_ = seed;
    return s;
  }

  NodeId operator()(std::size_t t) const {
    switch (kind_) {
      case Kind::round_robin:
        return static_cast<NodeId>(t % n_);
      case Kind::cycle:
        return order_[t % order_.size()];
      default:
        return static_cast<NodeId>(hash_key(seed_, t) % n_);
    }
  }

  std::size_t domain() const { return n_; }

 private:
  enum class Kind { round_robin, cycle, random };
  Kind kind_ = Kind::round_robin;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<NodeId> order_;
};

struct WeightTriple {
  NodeId i, j;
  double w;
};

class System {
 public:
  // Weight triples may name each unordered pair once or give both
  // orientations; entries for the same pair must agree within 1e-12 and the
  // diagonal must be absent.
  System(std::vector<double> lo, std::vector<double> hi, std::vector<UpdateFn> fs,
         const std::vector<WeightTriple>& weights, std::vector<double> init)
      : n_(lo.size()), lo_(std::move(lo)), hi_(std::move(hi)), f_(std::move(fs)),
        x_(std::move(init)) {
    if (hi_.size() != n_ || f_.size() != n_ || x_.size() != n_) {
      throw invalid_input_error("system component sizes disagree");
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(lo_[i] < hi_[i])) throw invalid_input_error("system needs lo < hi per variable");
      if (!(x_[i] >= lo_[i] && x_[i] <= hi_[i])) {
        throw invalid_input_error("initial state out of bounds");
      }
      if (f_[i].lo() != lo_[i] || f_[i].hi() != hi_[i]) {
        throw invalid_input_error("update function range does not match variable bounds");
      }
    }

    std::map<std::pair<NodeId, NodeId>, double> collapsed;
    for (const WeightTriple& t : weights) {
      if (t.i >= n_ || t.j >= n_) throw invalid_input_error("weight index out of range");
      if (t.i == t.j) throw invalid_input_error("weight matrix must have a zero diagonal");
      const std::pair<NodeId, NodeId> key = std::minmax(t.i, t.j);
      const auto [it, inserted] = collapsed.emplace(key, t.w);
      if (!inserted && std::fabs(it->second - t.w) > 1e-12) {
        throw invalid_input_error("asymmetric weights: entries for one pair disagree");
      }
    }
    std::vector<WeightTriple> sym;
    sym.reserve(collapsed.size() * 2);
    for (const auto& [key, w] : collapsed) {
      if (w == 0.0) continue;
      sym.push_back({key.first, key.second, w});
      sym.push_back({key.second, key.first, w});
    }
    std::sort(sym.begin(), sym.end(), [](const WeightTriple& a, const WeightTriple& b) {
      return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    off_.assign(n_ + 1, 0);
    for (const auto& t : sym) ++off_[t.i + 1];
    for (std::size_t i = 0; i < n_; ++i) off_[i + 1] += off_[i];
    nbr_.resize(sym.size());
    wgt_.resize(sym.size());
    for (std::size_t k = 0; k < sym.size(); ++k) {
      nbr_[k] = sym[k].j;
      wgt_[k] = sym[k].w;
    }

    // Probabilistic spot-check that updates respect the bounds.
    std::uint64_t probe = 0x5eed;
    for (std::size_t i = 0; i < std::min<std::size_t>(n_, 16); ++i) {
      for (int rep = 0; rep < 4; ++rep) {
        long double l = 0.0L;
        for (std::size_t k = off_[i]; k < off_[i + 1]; ++k) {
          const NodeId j = nbr_[k];
          ++probe;
          l += wgt_[k] * (lo_[j] + (hi_[j] - lo_[j]) * unit_from_key(probe, probe));
        }
        const double y = f_[i](static_cast<double>(l));
        if (!(y >= lo_[i] && y <= hi_[i])) {
          throw invalid_input_error("update function escapes the variable bounds");
        }
      }
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<double>& state() const { return x_; }
  double lo(std::size_t i) const { return lo_[i]; }
  double hi(std::size_t i) const { return hi_[i]; }
  const UpdateFn& update_fn(std::size_t i) const { return f_[i]; }

  void set_state(std::vector<double> x) {
    if (x.size() != n_) throw invalid_input_error("state size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(x[i] >= lo_[i] && x[i] <= hi_[i])) {
        throw invalid_input_error("state out of bounds");
      }
    }
    x_ = std::move(x);
  }

  // (Wx)_i in long double with a fixed summation order.
  long double weighted_sum(std::size_t i) const {
    long double l = 0.0L;
    for (std::size_t k = off_[i]; k < off_[i + 1]; ++k) {
      l += static_cast<long double>(wgt_[k]) * x_[nbr_[k]];
    }
    return l;
  }

  struct StepResult {
    double old_value = 0.0;
    double new_value = 0.0;
    long double potential_delta = 0.0L;
  };

  // x_i <- F_i((Wx)_i). The returned potential delta is exact up to rounding:
  // changing one coordinate changes P by G_i(new) - G_i(old) - (new-old)*(Wx)_i
  // because W is symmetric with a zero diagonal.
  StepResult step(std::size_t i) {
    if (i >= n_) throw invalid_input_error("variable index out of range");
    const long double l = weighted_sum(i);
    StepResult r;
    r.old_value = x_[i];
    r.new_value = std::clamp(f_[i](static_cast<double>(l)), lo_[i], hi_[i]);
    r.potential_delta = f_[i].g_l(r.new_value) - f_[i].g_l(r.old_value) -
                        (static_cast<long double>(r.new_value) - r.old_value) * l;
    x_[i] = r.new_value;
    return r;
  }

  // P(x) = sum_i G_i(x_i) - x'Wx/2, from scratch with compensated summation.
  long double potential() const {
    NeumaierSum acc;
    for (std::size_t i = 0; i < n_; ++i) acc.add(f_[i].g_l(x_[i]));
    for (std::size_t i = 0; i < n_; ++i) {
      acc.add(-0.5L * static_cast<long double>(x_[i]) * weighted_sum(i));
    }
    return acc.value();
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> lo_, hi_;
  std::vector<UpdateFn> f_;
  std::vector<double> x_;
  std::vector<std::size_t> off_{0};
  std::vector<NodeId> nbr_;
  std::vector<double> wgt_;
};

struct StepRecord {
  std::size_t step;
  NodeId variable;
  double value;
  long double potential;
};

struct RunResult {
  bool converged = false;
  std::size_t steps = 0;
  std::vector<StepRecord> trace;
};

// Applies the activation sequence until the last `size()` consecutive steps
// all moved their variable by at most eps (a full round-robin sweep, or an
// n-step window for other sequences), or until max_steps.
inline RunResult run(System& sys, const ActivationSequence& act, double eps,
                     std::size_t max_steps, bool record_trace = true) {
  if (!(eps > 0.0)) throw invalid_input_error("eps must be > 0");
  if (act.domain() != sys.size()) {
    throw invalid_input_error("activation sequence domain does not match system size");
  }
  RunResult res;
  if (record_trace) res.trace.reserve(std::min<std::size_t>(max_steps, 1 << 20));
  long double potential_acc = sys.potential();
  std::size_t quiet_streak = 0;
  for (std::size_t t = 0; t < max_steps; ++t) {
    const NodeId i = act(t);
    const System::StepResult r = sys.step(i);
    potential_acc += r.potential_delta;
    ++res.steps;
    if (record_trace) {
      res.trace.push_back({t, i, r.new_value, potential_acc});
    }
    if (std::fabs(r.new_value - r.old_value) <= eps) {
      ++quiet_streak;
      if (quiet_streak >= sys.size()) {
        res.converged = true;
        break;
      }
    } else {
      quiet_streak = 0;
    }
  }
  return res;
}

// The scoring iteration as a 2n-variable system: variables [0,n) are the
// celebrity scores, [n,2n) the spammer scores; every unreciprocated arc
// (u,v) couples s_u and c_v with weight -1. The per-variable update absorbs
// the arc count: F(L) = Phi((L + indeg - mu)/sigma) = the normal family with
// mu shifted by the degree.
inline System embed_scrank(const ArcSet& a, const TransferField& fc, const TransferField& fs,
                           const std::vector<double>& init_c, const std::vector<double>& init_s) {
  const std::size_t n = a.node_count();
  if (init_c.size() != n || init_s.size() != n) {
    throw invalid_input_error("embedding init size mismatch");
  }
  std::vector<double> lo(2 * n, 0.0), hi(2 * n, 1.0);
  std::vector<UpdateFn> f;
  f.reserve(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    f.push_back(UpdateFn::normal(fc[v].mu() - static_cast<double>(a.in_degree(static_cast<NodeId>(v))),
                                 fc[v].sigma()));
  }
  for (std::size_t u = 0; u < n; ++u) {
    f.push_back(UpdateFn::normal(fs[u].mu() - static_cast<double>(a.out_degree(static_cast<NodeId>(u))),
                                 fs[u].sigma()));
  }
  std::vector<WeightTriple> w;
  w.reserve(a.arc_count());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : a.out_neighbors(u)) {
      w.push_back({v, static_cast<NodeId>(n + u), -1.0});
    }
  }
  std::vector<double> init(init_c);
  init.insert(init.end(), init_s.begin(), init_s.end());
  return System(std::move(lo), std::move(hi), std::move(f), w, std::move(init));
}

inline System embed_scrank(const ArcSet& a, const TransferFunction& fc,
                           const TransferFunction& fs, double init_value = 0.0) {
  const std::size_t n = a.node_count();
  return embed_scrank(a, TransferField(fc), TransferField(fs),
                      std::vector<double>(n, init_value), std::vector<double>(n, init_value));
}

namespace detail {

// The normal family's mu may go negative in the embedding (mu - indeg), which
// is fine: UpdateFn::normal does not constrain mu's sign.

inline UpdateFn connectivity_update(double steepness) {
  // Soft step between "no neighbor reached" (sum 0) and "one neighbor
  // reached" (sum 1): centered at 1/2 so a single reached neighbor lands
  // firmly on the high side.
  return UpdateFn::logistic(0.5, steepness, 0.0, 1.0);
}

inline UpdateFn pin_high_update(double steepness) {
  // Returns values within 1e-12 of 1 for any input >= 0: a genuine strictly
  // increasing C^1 update whose fixed point pins the variable at ~1.
  return UpdateFn::logistic(-50.0 / steepness, steepness, 0.0, 1.0);
}

}  // namespace detail

// Reachability from `origin` over an undirected graph: W = adjacency, the
// origin's update pins it at ~1, every other variable fires once the summed
// values of reached neighbors crosses 1/2.
inline System make_connectivity(std::size_t n,
                                const std::vector<std::pair<NodeId, NodeId>>& undirected_edges,
                                NodeId origin, double steepness = 30.0) {
  if (origin >= n) throw invalid_input_error("origin out of range");
  if (!(steepness > 0.0)) throw invalid_input_error("steepness must be > 0");
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  std::vector<UpdateFn> f;
  f.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.push_back(i == origin ? detail::pin_high_update(steepness)
                            : detail::connectivity_update(steepness));
  }
  std::vector<WeightTriple> w;
  w.reserve(undirected_edges.size());
  for (const auto& e : undirected_edges) {
    w.push_back({e.first, e.second, 1.0});
  }
  std::vector<double> init(n, 0.0);
  init[origin] = 1.0;
  return System(std::move(lo), std::move(hi), std::move(f), w, std::move(init));
}

// Signed-influence dynamics on [-1,1]: each variable moves toward the sign
// of the weighted sum of its neighbors (tanh-shaped response centered at 0).
inline System make_party_affiliation(std::size_t n, const std::vector<WeightTriple>& weights,
                                     double steepness) {
  if (!(steepness > 0.0)) throw invalid_input_error("steepness must be > 0");
  std::vector<double> lo(n, -1.0), hi(n, 1.0);
  std::vector<UpdateFn> f(n, UpdateFn::logistic(0.0, steepness, -1.0, 1.0));
  return System(std::move(lo), std::move(hi), std::move(f), weights,
                std::vector<double>(n, 0.0));
}

// Adoption dynamics on [0,1]: variable i adopts once the minutes-weighted
// adoption of its call partners crosses free_limit.
inline System make_tech_diffusion(std::size_t n, const std::vector<WeightTriple>& minutes,
                                  double free_limit, double steepness) {
  if (!(steepness > 0.0)) throw invalid_input_error("steepness must be > 0");
  if (!(free_limit >= 0.0)) throw invalid_input_error("free_limit must be >= 0");
  for (const auto& t : minutes) {
    if (!(t.w >= 0.0)) throw invalid_input_error("minutes must be nonnegative");
  }
  std::vector<double> lo(n, 0.0), hi(n, 1.0);
  std::vector<UpdateFn> f(n, UpdateFn::logistic(free_limit, steepness, 0.0, 1.0));
  return System(std::move(lo), std::move(hi), std::move(f), minutes,
                std::vector<double>(n, 0.0));
}

// Text format for a system definition:
//   n <count>
//   bounds default <lo> <hi>        (optional; default [0,1])
//   bounds <i> <lo> <hi>
//   update default <family> <a> <b> (family: "normal <mu> <sigma>" or
//   update <i> <family> <a> <b>      "logistic <center> <steepness>")
//   init default <x>                (optional; default 0 clamped into bounds)
//   init <i> <x>
//   w <i> <j> <weight>              (each undirected pair at most once)
// '#' lines and blank lines are ignored. An update line (default or
// per-variable) must cover every variable.
inline System parse_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open system file: " + path);

  std::optional<std::size_t> n;
  std::optional<std::pair<double, double>> default_bounds;
  std::map<std::size_t, std::pair<double, double>> bounds;
  struct FnSpec {
    std::string family;
    double a, b;
  };
  std::optional<FnSpec> default_fn;
  std::map<std::size_t, FnSpec> fns;
  std::optional<double> default_init;
  std::map<std::size_t, double> inits;
  std::vector<WeightTriple> weights;
  std::map<std::pair<NodeId, NodeId>, std::size_t> seen_pairs;

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw invalid_input_error("system file " + path + " line " + std::to_string(line_no) +
                              ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key[0] == '#') continue;
    if (key == "n") {
      std::size_t val;
      if (!(ls >> val) || val == 0) fail("expected a positive variable count");
      if (n) fail("duplicate n line");
      n = val;
    } else if (key == "bounds" || key == "update" || key == "init") {
      std::string target;
      if (!(ls >> target)) fail("missing target after " + key);
      std::optional<std::size_t> index;
      if (target != "default") {
        try {
          index = std::stoul(target);
        } catch (const std::exception&) {
          fail("expected 'default' or a variable index");
        }
        if (!n) fail("indexed line before the n line");
        if (*index >= *n) fail("variable index out of range");
      }
      if (key == "bounds") {
        double lo, hi;
        if (!(ls >> lo >> hi) || !(lo < hi)) fail("expected <lo> <hi> with lo < hi");
        if (index) {
          bounds[*index] = {lo, hi};
        } else {
          default_bounds = {lo, hi};
        }
      } else if (key == "update") {
        FnSpec spec;
        if (!(ls >> spec.family >> spec.a >> spec.b)) {
          fail("expected <family> <param> <param>");
        }
        if (spec.family != "normal" && spec.family != "logistic") {
          fail("unknown update family: " + spec.family);
        }
        if (index) {
          fns[*index] = spec;
        } else {
          default_fn = spec;
        }
      } else {
        double x;
        if (!(ls >> x)) fail("expected an init value");
        if (index) {
          inits[*index] = x;
        } else {
          default_init = x;
        }
      }
    } else if (key == "w") {
      if (!n) fail("w line before the n line");
      long long i, j;
      double wv;
      if (!(ls >> i >> j >> wv)) fail("expected <i> <j> <weight>");
      if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= *n ||
          static_cast<std::size_t>(j) >= *n) {
        fail("weight index out of range");
      }
      if (i == j) fail("diagonal weights are not allowed");
      // Materialized as values: minmax returns references into its arguments.
      const std::pair<NodeId, NodeId> pair_key =
          std::minmax(static_cast<NodeId>(i), static_cast<NodeId>(j));
      const auto [it, inserted] = seen_pairs.emplace(pair_key, line_no);
      if (!inserted) {
        fail("pair already given on line " + std::to_string(it->second));
      }
      weights.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), wv});
    } else {
      fail("unknown directive: " + key);
    }
  }
  if (in.bad()) throw io_error("read failure on system file: " + path);
  if (!n) throw invalid_input_error("system file " + path + ": missing n line");

  const std::pair<double, double> base_bounds =
      default_bounds.value_or(std::pair<double, double>{0.0, 1.0});
  std::vector<double> lo(*n), hi(*n), init(*n);
  std::vector<UpdateFn> f;
  f.reserve(*n);
  for (std::size_t i = 0; i < *n; ++i) {
    const auto b = bounds.count(i) ? bounds.at(i) : base_bounds;
    lo[i] = b.first;
    hi[i] = b.second;
    const FnSpec* spec = fns.count(i) ? &fns.at(i) : (default_fn ? &*default_fn : nullptr);
    if (!spec) {
      throw invalid_input_error("system file " + path + ": no update function for variable " +
                                std::to_string(i));
    }
    if (spec->family == "normal") {
      f.push_back(UpdateFn::normal(spec->a, spec->b, lo[i], hi[i]));
    } else {
      f.push_back(UpdateFn::logistic(spec->a, spec->b, lo[i], hi[i]));
    }
    const double base_init = default_init.value_or(std::clamp(0.0, lo[i], hi[i]));
    init[i] = inits.count(i) ? inits.at(i) : base_init;
  }
  return System(std::move(lo), std::move(hi), std::move(f), weights, std::move(init));
}

}  // namespace scrank::muesli
