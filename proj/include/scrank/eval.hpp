#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "numeric.hpp"
#include "scrank.hpp"
#include "synthgen.hpp"
#include "transfer.hpp"

// Experiment harness: convergence-speed traces, cross-initialization distance
// (uniqueness probing), precision/recall against planted truth, and score
// histograms.

namespace scrank::eval {

// Least-squares geometric decay rate of a positive series, fitted in log
// space on the points after `burn_in` (the leading deltas reflect the
// initialization, not the asymptotic rate). Returns the per-step ratio, or
// nullopt when fewer than two positive points remain.
inline std::optional<double> fit_geometric_decay(const std::vector<double>& vals,
                                                 std::size_t burn_in = 2) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t t = burn_in; t < vals.size(); ++t) {
    if (vals[t] > 0.0) pts.push_back({static_cast<double>(t), std::log(vals[t])});
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  return std::exp(sxy / sxx);
}

struct ConvergenceSeries {
  std::string init_name;
  std::vector<double> l1_c;  // per-iteration l1 change of c (index 0 = iteration 1)
  std::vector<double> l1_s;
  std::optional<double> decay_rate_c;
  std::optional<double> decay_rate_s;
  bool converged = false;
};

inline std::vector<ConvergenceSeries> convergence_experiment(
    const ArcSet& a, const TransferField& fc, const TransferField& fs,
    const std::vector<InitSpec>& inits, double epsilon, std::size_t max_iterations) {
  if (inits.empty()) throw invalid_input_error("convergence experiment needs at least one init");
  std::vector<ConvergenceSeries> out;
  out.reserve(inits.size());
  for (const InitSpec& init : inits) {
    IterationConfig cfg;
    cfg.epsilon = epsilon;
    cfg.max_iterations = max_iterations;
    cfg.init = init;
    const IterateResult res = iterate(a, fc, fs, cfg);
    ConvergenceSeries series;
    series.init_name = init.name();
    for (const TraceRow& row : res.trace.rows) {
      series.l1_c.push_back(row.l1_c);
      series.l1_s.push_back(row.l1_s);
    }
    series.decay_rate_c = fit_geometric_decay(series.l1_c);
    series.decay_rate_s = fit_geometric_decay(series.l1_s);
    series.converged = res.converged;
    out.push_back(std::move(series));
  }
  return out;
}

struct UniquenessSeries {
  std::string pair_name;
  std::vector<double> l1_c;  // index 0 = distance between the initial vectors
  std::vector<double> l1_s;
};

namespace detail {

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc.add(a[i] >= b[i] ? static_cast<long double>(a[i]) - b[i]
                         : static_cast<long double>(b[i]) - a[i]);
  }
  return static_cast<double>(acc.value());
}

}  // namespace detail

// Runs the iteration from two initializations in lockstep, recording the
// cross-run l1 distance after every iteration. A run that converges holds
// its state while the other continues; the experiment stops when both have
// converged or at the iteration cap.
inline UniquenessSeries uniqueness_experiment(const ArcSet& a, const TransferField& fc,
                                              const TransferField& fs, const InitSpec& init_a,
                                              const InitSpec& init_b, double epsilon,
                                              std::size_t max_iterations) {
  if (!(epsilon > 0.0)) throw invalid_input_error("epsilon must be > 0");
  const std::size_t n = a.node_count();
  struct Run {
    std::vector<double> c, s;
    bool done = false;
  };
  Run ra{make_init_vector(init_a, n, 0), make_init_vector(init_a, n, 1), false};
  Run rb{make_init_vector(init_b, n, 0), make_init_vector(init_b, n, 1), false};

  UniquenessSeries series;
  series.pair_name = init_a.name() + "|" + init_b.name();
  series.l1_c.push_back(detail::l1_distance(ra.c, rb.c));
  series.l1_s.push_back(detail::l1_distance(ra.s, rb.s));

  std::vector<double> new_c(n), new_s(n);
  auto advance = [&](Run& r) {
    if (r.done) return;
    celebrity_phase(a, r.s, fc, new_c);
    spammer_phase(a, new_c, fs, new_s);
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      delta = std::max(delta, std::fabs(new_c[v] - r.c[v]));
      delta = std::max(delta, std::fabs(new_s[v] - r.s[v]));
    }
    r.c.swap(new_c);
    r.s.swap(new_s);
    if (delta < epsilon) r.done = true;
  };

  for (std::size_t t = 0; t < max_iterations && !(ra.done && rb.done); ++t) {
    advance(ra);
    advance(rb);
    series.l1_c.push_back(detail::l1_distance(ra.c, rb.c));
    series.l1_s.push_back(detail::l1_distance(ra.s, rb.s));
  }
  return series;
}

struct ClassPR {
  std::optional<double> precision;  // nullopt when nothing was predicted
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t truth_size = 0;
};

struct PrecisionRecall {
  double threshold = 0.5;
  ClassPR celebrity;
  ClassPR spammer;
};

inline PrecisionRecall precision_recall(const ScoreState& state,
                                        const synth::GroundTruth& truth,
                                        double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw invalid_input_error("threshold must lie in (0,1)");
  }
  if (truth.celebrities.empty() || truth.spammers.empty()) {
    throw invalid_input_error("precision/recall needs nonempty planted truth sets");
  }
  PrecisionRecall pr;
  pr.threshold = threshold;
  auto score_class = [&](const std::vector<double>& scores,
                         const std::vector<NodeId>& planted) {
    ClassPR r;
    r.truth_size = planted.size();
    for (std::size_t v = 0; v < scores.size(); ++v) {
      if (scores[v] > threshold) {
        ++r.predicted;
        if (std::binary_search(planted.begin(), planted.end(), static_cast<NodeId>(v))) {
          ++r.true_positives;
        }
      }
    }
    if (r.predicted > 0) {
      r.precision = static_cast<double>(r.true_positives) / static_cast<double>(r.predicted);
    }
    r.recall = static_cast<double>(r.true_positives) / static_cast<double>(r.truth_size);
    return r;
  };
  pr.celebrity = score_class(state.c, truth.celebrities);
  pr.spammer = score_class(state.s, truth.spammers);
  return pr;
}

struct TransferParams {
  double mu_c = 100.0;
  double sigma_c = 25.0;
  double mu_s = 100.0;
  double sigma_s = 25.0;
};

struct PrPoint {
  std::uint64_t seed = 0;  // instance seed, identifying the graph scored
  TransferParams params;
  PrecisionRecall pr;
};

// Scores every instance under every transfer-parameter setting and reports
// one precision/recall point per (instance, setting) pair, instance-major.
inline std::vector<PrPoint> pr_sweep(const std::vector<synth::PlantedInstance>& instances,
                                     const std::vector<TransferParams>& grid,
                                     const IterationConfig& base_config,
                                     double threshold = 0.5) {
  if (grid.empty()) throw invalid_input_error("parameter grid must be nonempty");
  std::vector<PrPoint> out;
  out.reserve(instances.size() * grid.size());
  for (const synth::PlantedInstance& inst : instances) {
    const ArcSet a = unreciprocated(inst.graph);
    for (const TransferParams& tp : grid) {
      const TransferFunction fc(tp.mu_c, tp.sigma_c, ScoreKind::celebrity);
      const TransferFunction fs(tp.mu_s, tp.sigma_s, ScoreKind::spammer);
      const IterateResult res = iterate(a, TransferField(fc), TransferField(fs), base_config);
      out.push_back({inst.params.seed, tp, precision_recall(res.state, inst.truth, threshold)});
    }
  }
  return out;
}

// Fixed-width bins over [0,1]; score 1.0 lands in the top bin.
struct Histogram {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<std::size_t> all_count;
  std::vector<std::size_t> planted_count;

  std::size_t bins() const { return bin_lo.size(); }
  std::size_t all_total() const {
    std::size_t t = 0;
    for (std::size_t c : all_count) t += c;
    return t;
  }
  std::size_t planted_total() const {
    std::size_t t = 0;
    for (std::size_t c : planted_count) t += c;
    return t;
  }
  // log10 of the normalized density (count / (population * bin width));
  // nullopt for empty bins or an empty population.
  std::optional<double> log10_density_all(std::size_t bin) const {
    return log10_density(all_count[bin], all_total(), bin_hi[bin] - bin_lo[bin]);
  }
  std::optional<double> log10_density_planted(std::size_t bin) const {
    return log10_density(planted_count[bin], planted_total(), bin_hi[bin] - bin_lo[bin]);
  }

 private:
  static std::optional<double> log10_density(std::size_t count, std::size_t population,
                                             double width) {
    if (count == 0 || population == 0) return std::nullopt;
    return std::log10(static_cast<double>(count) /
                      (static_cast<double>(population) * width));
  }
};

struct HistogramSet {
  Histogram celebrity;  // celebrity scores; planted subset = planted celebrities
  Histogram spammer;    // spammer scores; planted subset = planted spammers
};

inline HistogramSet score_histograms(const ScoreState& state, const synth::GroundTruth& truth,
                                     std::size_t bins) {
  if (bins < 2) throw invalid_input_error("histograms need at least 2 bins");
  auto build = [&](const std::vector<double>& scores, const std::vector<NodeId>& planted) {
    Histogram h;
    h.bin_lo.resize(bins);
    h.bin_hi.resize(bins);
    h.all_count.assign(bins, 0);
    h.planted_count.assign(bins, 0);
    for (std::size_t b = 0; b < bins; ++b) {
      h.bin_lo[b] = static_cast<double>(b) / static_cast<double>(bins);
      h.bin_hi[b] = static_cast<double>(b + 1) / static_cast<double>(bins);
    }
    for (std::size_t v = 0; v < scores.size(); ++v) {
      const auto raw = static_cast<std::size_t>(scores[v] * static_cast<double>(bins));
      const std::size_t b = std::min(bins - 1, raw);
      ++h.all_count[b];
      if (std::binary_search(planted.begin(), planted.end(), static_cast<NodeId>(v))) {
        ++h.planted_count[b];
      }
    }
    return h;
  };
  return HistogramSet{build(state.c, truth.celebrities), build(state.s, truth.spammers)};
}

}  // namespace scrank::eval
