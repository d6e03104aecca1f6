#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace scrank {

using NodeId = std::uint32_t;
using Arc = std::pair<NodeId, NodeId>;

namespace detail {

// Builds sorted CSR offsets/adjacency from arcs sorted ascending by (src,dst).
// by_source=false groups by destination; neighbor lists stay sorted because
// for a fixed destination the sources appear in increasing order.
inline void build_csr(std::size_t n, const std::vector<Arc>& arcs, bool by_source,
                      std::vector<std::size_t>& off, std::vector<NodeId>& adj) {
  off.assign(n + 1, 0);
  adj.resize(arcs.size());
  for (const Arc& a : arcs) ++off[(by_source ? a.first : a.second) + 1];
  for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
  std::vector<std::size_t> cursor(off.begin(), off.end() - 1);
  for (const Arc& a : arcs) {
    const NodeId key = by_source ? a.first : a.second;
    adj[cursor[key]++] = by_source ? a.second : a.first;
  }
}

inline bool sorted_contains(std::span<const NodeId> sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace detail

// Immutable simple digraph over dense node ids with both adjacency directions.
// Self-loops are dropped and duplicate arcs collapsed at construction.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  DirectedGraph(std::size_t n, std::vector<Arc> arcs, std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n_) {
      throw invalid_input_error("label vector size does not match node count");
    }
    for (const Arc& a : arcs) {
      if (a.first >= n_ || a.second >= n_) {
        throw invalid_input_error("arc endpoint out of range");
      }
    }
    std::size_t kept = 0;
    for (const Arc& a : arcs) {
      if (a.first != a.second) {
        arcs[kept++] = a;
      } else {
        ++dropped_self_loops_;
      }
    }
    arcs.resize(kept);
    std::sort(arcs.begin(), arcs.end());
    const auto last = std::unique(arcs.begin(), arcs.end());
    collapsed_duplicates_ = static_cast<std::size_t>(arcs.end() - last);
    arcs.erase(last, arcs.end());
    m_ = arcs.size();
    detail::build_csr(n_, arcs, true, out_off_, out_adj_);
    detail::build_csr(n_, arcs, false, in_off_, in_adj_);
    if (!labels_.empty()) {
      for (NodeId v = 0; v < n_; ++v) label_ids_.emplace(labels_[v], v);
    }
  }

  std::size_t node_count() const { return n_; }
  std::size_t arc_count() const { return m_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_adj_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_adj_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }

  std::size_t out_degree(NodeId v) const { return out_off_[v + 1] - out_off_[v]; }
  std::size_t in_degree(NodeId v) const { return in_off_[v + 1] - in_off_[v]; }

  bool has_arc(NodeId u, NodeId v) const {
    return detail::sorted_contains(out_neighbors(u), v);
  }

  std::string label(NodeId v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }

  std::optional<NodeId> find_label(const std::string& label) const {
    if (labels_.empty()) {
      // Numeric self-labels.
      NodeId v = 0;
      std::size_t pos = 0;
      try {
        const unsigned long parsed = std::stoul(label, &pos);
        if (pos != label.size() || parsed >= n_) return std::nullopt;
        v = static_cast<NodeId>(parsed);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      return v;
    }
    const auto it = label_ids_.find(label);
    if (it == label_ids_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t dropped_self_loops() const { return dropped_self_loops_; }
  std::size_t collapsed_duplicates() const { return collapsed_duplicates_; }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> out_off_{0}, in_off_{0};
  std::vector<NodeId> out_adj_, in_adj_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_ids_;
  std::size_t dropped_self_loops_ = 0;
  std::size_t collapsed_duplicates_ = 0;
};

// The arcs of a digraph whose reverse arc is absent, with both adjacency
// directions and per-node degrees. Contains no anti-parallel pair.
class ArcSet {
 public:
  ArcSet() = default;

  ArcSet(std::size_t n, std::vector<Arc> arcs) : n_(n) {
    std::sort(arcs.begin(), arcs.end());
    m_ = arcs.size();
    detail::build_csr(n_, arcs, true, out_off_, out_adj_);
    detail::build_csr(n_, arcs, false, in_off_, in_adj_);
  }

  std::size_t node_count() const { return n_; }
  std::size_t arc_count() const { return m_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_adj_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_adj_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }

  std::size_t out_degree(NodeId v) const { return out_off_[v + 1] - out_off_[v]; }
  std::size_t in_degree(NodeId v) const { return in_off_[v + 1] - in_off_[v]; }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeId v = 0; v < n_; ++v) {
      best = std::max({best, in_degree(v), out_degree(v)});
    }
    return best;
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    out.reserve(m_);
    for (NodeId u = 0; u < n_; ++u) {
      for (NodeId v : out_neighbors(u)) out.emplace_back(u, v);
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> out_off_{0}, in_off_{0};
  std::vector<NodeId> out_adj_, in_adj_;
};

inline ArcSet unreciprocated(const DirectedGraph& g) {
  std::vector<Arc> arcs;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) {
      if (!g.has_arc(v, u)) arcs.emplace_back(u, v);
    }
  }
  return ArcSet(g.node_count(), std::move(arcs));
}

// Re-interprets the arc set as a digraph (numeric labels).
inline DirectedGraph to_graph(const ArcSet& a) {
  return DirectedGraph(a.node_count(), a.arcs());
}

// Fraction of arcs whose anti-parallel partner also exists; 0 on empty graphs.
inline double reciprocity(const DirectedGraph& g, const ArcSet& a) {
  if (g.arc_count() == 0) return 0.0;
  return static_cast<double>(g.arc_count() - a.arc_count()) /
         static_cast<double>(g.arc_count());
}

struct DegreeStats {
  std::vector<NodeId> in_degree, out_degree;
  std::size_t max_in = 0, max_out = 0;
  double mean_in = 0.0, mean_out = 0.0;
  // Bucket 0 holds degree 0; bucket k>=1 holds degrees in [2^(k-1), 2^k).
  std::vector<std::size_t> in_hist, out_hist;
};

inline DegreeStats degree_stats(const ArcSet& a) {
  DegreeStats st;
  const std::size_t n = a.node_count();
  st.in_degree.resize(n);
  st.out_degree.resize(n);
  auto bucket = [](std::size_t d) {
    std::size_t b = 0;
    while (d > 0) {
      ++b;
      d >>= 1;
    }
    return b;
  };
  std::size_t sum_in = 0, sum_out = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t din = a.in_degree(v);
    const std::size_t dout = a.out_degree(v);
    st.in_degree[v] = static_cast<NodeId>(din);
    st.out_degree[v] = static_cast<NodeId>(dout);
    st.max_in = std::max(st.max_in, din);
    st.max_out = std::max(st.max_out, dout);
    sum_in += din;
    sum_out += dout;
    const std::size_t bi = bucket(din), bo = bucket(dout);
    if (bi >= st.in_hist.size()) st.in_hist.resize(bi + 1, 0);
    if (bo >= st.out_hist.size()) st.out_hist.resize(bo + 1, 0);
    ++st.in_hist[bi];
    ++st.out_hist[bo];
  }
  if (n > 0) {
    st.mean_in = static_cast<double>(sum_in) / static_cast<double>(n);
    st.mean_out = static_cast<double>(sum_out) / static_cast<double>(n);
  }
  return st;
}

// One-line digest of a graph and its unreciprocated arc set.
inline std::string summary_line(const DirectedGraph& g, const ArcSet& a) {
  std::ostringstream os;
  os << "n=" << g.node_count() << " m=" << g.arc_count()
     << " unreciprocated=" << a.arc_count() << " reciprocity=" << reciprocity(g, a);
  return os.str();
}

// Parses "src dst" whitespace-separated lines; '#'-prefixed lines and blank
// lines are ignored. Labels are arbitrary non-whitespace tokens, assigned
// dense ids in first-appearance order.
inline DirectedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open edge list: " + path);
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& tok) {
    const auto it = ids.find(tok);
    if (it != ids.end()) return it->second;
    const NodeId v = static_cast<NodeId>(labels.size());
    ids.emplace(tok, v);
    labels.push_back(tok);
    return v;
  };
  std::vector<Arc> arcs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // blank line
    if (a[0] == '#') continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw invalid_input_error("malformed line " + std::to_string(line_no) +
                                " in " + path + ": expected \"src dst\"");
    }
    arcs.emplace_back(intern(a), intern(b));
  }
  if (in.bad()) throw io_error("read failure on edge list: " + path);
  // Taken before the call: argument evaluation order is unspecified, so
  // labels.size() must not race the move of labels into the constructor.
  const std::size_t n = labels.size();
  return DirectedGraph(n, std::move(arcs), std::move(labels));
}

}  // namespace scrank
