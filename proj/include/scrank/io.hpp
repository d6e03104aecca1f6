#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "muesli.hpp"
#include "scrank.hpp"
#include "synthgen.hpp"

// File formats: score TSVs, run-trace and experiment CSVs, edge-list and
// planted-truth sidecars, plus content digests for run manifests.

namespace scrank::io {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw io_error("write failure: " + path);
}

// Shortest decimal round-trip formatting (17 significant digits for double).
inline std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_full(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.21Lg", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_full(*v) : std::string("NA");
}

}  // namespace detail

// FNV-1a over the raw bytes of a file.
inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  if (in.bad()) throw io_error("read failure while digesting: " + path);
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

inline void write_scores_tsv(const std::string& path, const DirectedGraph& g,
                             const ScoreState& state) {
  auto out = detail::open_out(path);
  out << "node_label\tcelebrity_score\tspammer_score\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v) << '\t' << detail::fmt_full(state.c[v]) << '\t'
        << detail::fmt_full(state.s[v]) << '\n';
  }
  detail::finish(out, path);
}

struct ScoresFile {
  std::vector<std::string> labels;
  std::vector<double> c;
  std::vector<double> s;
};

inline ScoresFile read_scores_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open scores file: " + path);
  ScoresFile sf;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "node_label\tcelebrity_score\tspammer_score") {
        throw invalid_input_error("unexpected header in scores file: " + path);
      }
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string label;
    double c, s;
    if (!(std::getline(ls, label, '\t') && ls >> c >> s)) {
      throw invalid_input_error("malformed line " + std::to_string(line_no) +
                                " in scores file: " + path);
    }
    sf.labels.push_back(label);
    sf.c.push_back(c);
    sf.s.push_back(s);
  }
  if (in.bad()) throw io_error("read failure on scores file: " + path);
  return sf;
}

inline void write_trace_csv(const std::string& path, const IterationTrace& trace) {
  auto out = detail::open_out(path);
  out << "iteration,delta_inf,l1_c,l1_s,potential,millis\n";
  for (std::size_t t = 0; t < trace.rows.size(); ++t) {
    const TraceRow& row = trace.rows[t];
    out << (t + 1) << ',' << detail::fmt_full(row.delta_inf) << ','
        << detail::fmt_full(row.l1_c) << ',' << detail::fmt_full(row.l1_s) << ','
        << detail::fmt_full(row.potential) << ',' << detail::fmt_full(row.millis) << '\n';
  }
  detail::finish(out, path);
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<eval::ConvergenceSeries>& series) {
  auto out = detail::open_out(path);
  out << "init,iteration,l1_c,l1_s\n";
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.l1_c.size(); ++t) {
      out << s.init_name << ',' << (t + 1) << ',' << detail::fmt_full(s.l1_c[t]) << ','
          << detail::fmt_full(s.l1_s[t]) << '\n';
    }
  }
  detail::finish(out, path);
}

inline void write_uniqueness_csv(const std::string& path,
                                 const std::vector<eval::UniquenessSeries>& series) {
  auto out = detail::open_out(path);
  out << "pair,iteration,l1_c,l1_s\n";
  for (const auto& s : series) {
    for (std::size_t t = 0; t < s.l1_c.size(); ++t) {
      out << s.pair_name << ',' << t << ',' << detail::fmt_full(s.l1_c[t]) << ','
          << detail::fmt_full(s.l1_s[t]) << '\n';
    }
  }
  detail::finish(out, path);
}

inline void write_pr_csv(const std::string& path, const std::vector<eval::PrPoint>& points) {
  auto out = detail::open_out(path);
  out << "seed,mu_c,sigma_c,mu_s,sigma_s,threshold,"
         "precision_c,recall_c,precision_s,recall_s\n";
  for (const auto& p : points) {
    out << p.seed << ',' << detail::fmt_full(p.params.mu_c) << ','
        << detail::fmt_full(p.params.sigma_c) << ',' << detail::fmt_full(p.params.mu_s) << ','
        << detail::fmt_full(p.params.sigma_s) << ',' << detail::fmt_full(p.pr.threshold) << ','
        << detail::fmt_opt(p.pr.celebrity.precision) << ','
        << detail::fmt_full(p.pr.celebrity.recall) << ','
        << detail::fmt_opt(p.pr.spammer.precision) << ','
        << detail::fmt_full(p.pr.spammer.recall) << '\n';
  }
  detail::finish(out, path);
}

inline void write_hist_csv(const std::string& path, const eval::Histogram& h) {
  auto out = detail::open_out(path);
  out << "bin_lo,bin_hi,all_count,planted_count\n";
  for (std::size_t b = 0; b < h.bins(); ++b) {
    out << detail::fmt_full(h.bin_lo[b]) << ',' << detail::fmt_full(h.bin_hi[b]) << ','
        << h.all_count[b] << ',' << h.planted_count[b] << '\n';
  }
  detail::finish(out, path);
}

inline void write_muesli_csv(const std::string& path,
                             const std::vector<muesli::StepRecord>& trace) {
  auto out = detail::open_out(path);
  out << "step,variable,value,potential\n";
  for (const auto& r : trace) {
    out << r.step << ',' << r.variable << ',' << detail::fmt_full(r.value) << ','
        << detail::fmt_full(r.potential) << '\n';
  }
  detail::finish(out, path);
}

// Edge list in the graph module's input format, one "src dst" pair per line,
// preceded by '#' comment lines echoing the generation parameters.
inline void write_edge_list(const std::string& path, const DirectedGraph& g,
                            const std::vector<std::string>& comment_lines = {}) {
  auto out = detail::open_out(path);
  for (const std::string& c : comment_lines) out << "# " << c << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) {
      out << g.label(u) << ' ' << g.label(v) << '\n';
    }
  }
  detail::finish(out, path);
}

// Truth sidecar: one "C <label>" or "S <label>" line per planted vertex.
inline void write_truth(const std::string& path, const DirectedGraph& g,
                        const synth::GroundTruth& truth) {
  auto out = detail::open_out(path);
  for (NodeId v : truth.celebrities) out << "C " << g.label(v) << '\n';
  for (NodeId v : truth.spammers) out << "S " << g.label(v) << '\n';
  detail::finish(out, path);
}

inline synth::GroundTruth read_truth(const std::string& path, const DirectedGraph& g) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open truth file: " + path);
  synth::GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string cls, label;
    if (!(ls >> cls)) continue;
    if (cls[0] == '#') continue;
    std::string extra;
    if (!(ls >> label) || (ls >> extra) || (cls != "C" && cls != "S")) {
      throw invalid_input_error("malformed line " + std::to_string(line_no) +
                                " in truth file " + path + ": expected \"C <label>\" or \"S <label>\"");
    }
    const std::optional<NodeId> v = g.find_label(label);
    if (!v) {
      throw invalid_input_error("truth file " + path + " line " + std::to_string(line_no) +
                                ": label \"" + label + "\" not present in the graph");
    }
    (cls == "C" ? truth.celebrities : truth.spammers).push_back(*v);
  }
  if (in.bad()) throw io_error("read failure on truth file: " + path);
  std::sort(truth.celebrities.begin(), truth.celebrities.end());
  std::sort(truth.spammers.begin(), truth.spammers.end());
  return truth;
}

}  // namespace scrank::io
