#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "scrank/eval.hpp"
#include "scrank/scrank.hpp"
#include "scrank/synthgen.hpp"

using scrank::ArcSet;
using scrank::InitSpec;
using scrank::NodeId;
using scrank::ScoreState;
using scrank::TransferField;
using scrank::TransferFunction;
using scrank::invalid_input_error;
namespace eval = scrank::eval;
namespace synth = scrank::synth;

namespace {

TransferField field(double mu, double sigma, scrank::ScoreKind kind) {
  return TransferField(TransferFunction(mu, sigma, kind));
}

synth::GroundTruth make_truth(std::size_t n_c, std::size_t n_s) {
  synth::GroundTruth t;
  for (std::size_t i = 0; i < n_c; ++i) t.celebrities.push_back(static_cast<NodeId>(i));
  for (std::size_t i = 0; i < n_s; ++i) {
    t.spammers.push_back(static_cast<NodeId>(n_c + i));
  }
  return t;
}

}  // namespace

TEST_CASE("geometric decay fits are exact on pure geometric series") {
  std::vector<double> vals;
  for (int t = 0; t < 12; ++t) vals.push_back(7.5 * std::pow(0.37, t));
  const auto rate = eval::fit_geometric_decay(vals);
  REQUIRE(rate);
  CHECK(*rate == Catch::Approx(0.37).epsilon(1e-12));

  // The burn-in points are ignored: corrupt them and the fit is unchanged.
  vals[0] = 1e9;
  vals[1] = 0.0;
  const auto rate2 = eval::fit_geometric_decay(vals);
  REQUIRE(rate2);
  CHECK(*rate2 == Catch::Approx(0.37).epsilon(1e-12));

  CHECK_FALSE(eval::fit_geometric_decay({1.0, 0.5, 0.25}));       // one post-burn-in point
  CHECK_FALSE(eval::fit_geometric_decay({1.0, 0.5, 0.25, 0.0}));  // zeros are skipped
  CHECK(eval::fit_geometric_decay({1.0, 0.5, 0.25, 0.125}));
}

TEST_CASE("convergence experiments trace every initialization") {
  const ArcSet empty(5, {});
  const auto fc = field(100.0, 25.0, scrank::ScoreKind::celebrity);
  const auto fs = field(100.0, 25.0, scrank::ScoreKind::spammer);
  const std::vector<InitSpec> inits{InitSpec::zeros(), InitSpec::ones(),
                                    InitSpec::constant(0.5), InitSpec::random(1)};
  const auto series = eval::convergence_experiment(empty, fc, fs, inits, 1e-6, 50);
  REQUIRE(series.size() == 4);
  for (const auto& s : series) {
    CHECK(s.converged);
    REQUIRE(s.l1_c.size() == 2);  // arcless graphs land on the fixed point at once
    CHECK(s.l1_c[1] == 0.0);
    CHECK(s.l1_s[1] == 0.0);
  }
  CHECK(series[0].init_name == "0");
  CHECK(series[3].init_name.substr(0, 4) == "rand");

  CHECK_THROWS_AS(eval::convergence_experiment(empty, fc, fs, {}, 1e-6, 50),
                  invalid_input_error);

  // A transfer scaled to the graph's degrees (means near the typical arc
  // count) keeps the contraction mild, so the run lasts long enough past the
  // burn-in for a decay fit; with means far above the degrees the iteration
  // lands on the fixed point in two or three steps and no fit is possible.
  const scrank::DirectedGraph g = test_helpers::random_digraph(400, 3000, 0.3, 31);
  const ArcSet a = scrank::unreciprocated(g);
  const auto fc_slow = field(5.0, 4.0, scrank::ScoreKind::celebrity);
  const auto fs_slow = field(5.0, 4.0, scrank::ScoreKind::spammer);
  const auto real = eval::convergence_experiment(a, fc_slow, fs_slow, inits, 1e-6, 50);
  for (const auto& s : real) {
    CHECK(s.converged);
    REQUIRE(s.decay_rate_c);
    CHECK(*s.decay_rate_c > 0.0);
    CHECK(*s.decay_rate_c < 1.0);
  }
}

TEST_CASE("identical initializations stay at distance zero") {
  const scrank::DirectedGraph g = test_helpers::random_digraph(300, 2000, 0.2, 17);
  const ArcSet a = scrank::unreciprocated(g);
  const auto fc = field(100.0, 25.0, scrank::ScoreKind::celebrity);
  const auto fs = field(100.0, 25.0, scrank::ScoreKind::spammer);
  const auto series =
      eval::uniqueness_experiment(a, fc, fs, InitSpec::constant(0.3), InitSpec::constant(0.3),
                                  1e-6, 50);
  CHECK(series.pair_name == "0.3|0.3");
  REQUIRE(series.l1_c.size() >= 2);
  for (double d : series.l1_c) CHECK(d == 0.0);
  for (double d : series.l1_s) CHECK(d == 0.0);
}

TEST_CASE("different initializations start apart and draw together") {
  const scrank::DirectedGraph g = test_helpers::random_digraph(300, 2000, 0.2, 17);
  const ArcSet a = scrank::unreciprocated(g);
  const auto fc = field(100.0, 25.0, scrank::ScoreKind::celebrity);
  const auto fs = field(100.0, 25.0, scrank::ScoreKind::spammer);
  const auto series = eval::uniqueness_experiment(a, fc, fs, InitSpec::zeros(),
                                                  InitSpec::ones(), 1e-6, 50);
  REQUIRE(series.l1_c.size() >= 3);
  CHECK(series.l1_c[0] == Catch::Approx(300.0));  // initial vectors differ by 1 per node
  CHECK(series.l1_c.back() < series.l1_c[0]);
  for (double d : series.l1_c) CHECK(d >= 0.0);
}

TEST_CASE("precision and recall follow their defining identities") {
  const std::size_t n = 500;
  synth::GroundTruth truth = make_truth(40, 60);
  ScoreState state;
  state.c.assign(n, 0.0);
  state.s.assign(n, 0.0);

  SECTION("indicator scores recover the planted sets exactly") {
    for (NodeId v : truth.celebrities) state.c[v] = 1.0;
    for (NodeId v : truth.spammers) state.s[v] = 1.0;
    const auto pr = eval::precision_recall(state, truth, 0.5);
    REQUIRE(pr.celebrity.precision);
    CHECK(*pr.celebrity.precision == 1.0);
    CHECK(pr.celebrity.recall == 1.0);
    REQUIRE(pr.spammer.precision);
    CHECK(*pr.spammer.precision == 1.0);
    CHECK(pr.spammer.recall == 1.0);
    CHECK(pr.celebrity.true_positives == 40);
    CHECK(pr.spammer.predicted == 60);
  }

  SECTION("all-zero scores leave precision undefined") {
    const auto pr = eval::precision_recall(state, truth, 0.5);
    CHECK_FALSE(pr.celebrity.precision);
    CHECK_FALSE(pr.spammer.precision);
    CHECK(pr.celebrity.recall == 0.0);
    CHECK(pr.spammer.recall == 0.0);
  }

  SECTION("mixed scores satisfy precision*predicted == recall*|truth|") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t v = 0; v < n; ++v) {
      state.c[v] = unif(rng);
      state.s[v] = unif(rng);
    }
    const auto pr = eval::precision_recall(state, truth, 0.5);
    for (const eval::ClassPR* cls : {&pr.celebrity, &pr.spammer}) {
      REQUIRE(cls->precision);
      CHECK(*cls->precision * static_cast<double>(cls->predicted) ==
            Catch::Approx(static_cast<double>(cls->true_positives)).margin(1e-9));
      CHECK(cls->recall * static_cast<double>(cls->truth_size) ==
            Catch::Approx(static_cast<double>(cls->true_positives)).margin(1e-9));
    }
  }

  SECTION("validation rejects bad thresholds and empty truth") {
    CHECK_THROWS_AS(eval::precision_recall(state, truth, 0.0), invalid_input_error);
    CHECK_THROWS_AS(eval::precision_recall(state, truth, 1.0), invalid_input_error);
    synth::GroundTruth empty;
    empty.celebrities = truth.celebrities;
    CHECK_THROWS_AS(eval::precision_recall(state, empty, 0.5), invalid_input_error);
  }
}

TEST_CASE("uniform random scores give chance-level precision at half recall") {
  const std::size_t n = 20000;
  synth::GroundTruth truth = make_truth(100, 250);
  // Planted ids interleaved through the population do not matter for this
  // check; uniform scores are exchangeable.
  ScoreState state;
  state.c.resize(n);
  state.s.resize(n);
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    state.c[v] = unif(rng);
    state.s[v] = unif(rng);
  }
  const auto pr = eval::precision_recall(state, truth, 0.5);
  REQUIRE(pr.spammer.precision);
  CHECK(*pr.spammer.precision == Catch::Approx(250.0 / 20000.0).margin(0.006));
  CHECK(pr.spammer.recall == Catch::Approx(0.5).margin(0.15));
  REQUIRE(pr.celebrity.precision);
  CHECK(*pr.celebrity.precision == Catch::Approx(100.0 / 20000.0).margin(0.004));
  CHECK(pr.celebrity.recall == Catch::Approx(0.5).margin(0.2));
}

TEST_CASE("easier spammer thresholds trade precision for recall") {
  synth::GeneratorParams gp;
  gp.n = 2000;
  gp.n_c = 20;
  gp.n_s = 40;
  gp.p = 0.2;
  gp.p_c = 0.025;
  gp.p_s = 0.025;
  gp.h_model = synth::ChungLu{0.5, 40.0};
  gp.seed = 11;
  std::vector<synth::PlantedInstance> instances;
  instances.push_back(synth::generate_instance(gp));

  eval::TransferParams easy;
  easy.mu_s = 25.0;
  easy.sigma_s = 12.0;
  eval::TransferParams hard;
  hard.mu_s = 400.0;
  hard.sigma_s = 25.0;

  scrank::IterationConfig cfg;
  const auto points = eval::pr_sweep(instances, {easy, hard}, cfg, 0.5);
  REQUIRE(points.size() == 2);
  CHECK(points[0].pr.spammer.recall >= points[1].pr.spammer.recall);

  // A single-point grid reproduces the direct computation.
  const ArcSet a = scrank::unreciprocated(instances[0].graph);
  const auto direct = scrank::iterate(
      a, field(easy.mu_c, easy.sigma_c, scrank::ScoreKind::celebrity),
      field(easy.mu_s, easy.sigma_s, scrank::ScoreKind::spammer), cfg);
  const auto single = eval::pr_sweep(instances, {easy}, cfg, 0.5);
  REQUIRE(single.size() == 1);
  const auto direct_pr = eval::precision_recall(direct.state, instances[0].truth, 0.5);
  CHECK(single[0].pr.spammer.recall == direct_pr.spammer.recall);
  CHECK(single[0].pr.celebrity.recall == direct_pr.celebrity.recall);
  CHECK(single[0].pr.spammer.precision == direct_pr.spammer.precision);
  CHECK(single[0].seed == gp.seed);

  CHECK_THROWS_AS(eval::pr_sweep(instances, {}, cfg, 0.5), invalid_input_error);
}

TEST_CASE("score histograms partition the population") {
  synth::GroundTruth truth = make_truth(3, 4);
  ScoreState state;
  state.c = {1.0, 0.95, 0.2, 0.0, 0.0, 0.0, 0.0, 0.31, 0.99, 0.5};
  state.s = {0.0, 0.0, 0.0, 0.9, 0.86, 0.97, 1.0, 0.02, 0.0, 0.74};
  const auto hs = eval::score_histograms(state, truth, 10);

  CHECK(hs.celebrity.bins() == 10);
  CHECK(hs.celebrity.all_total() == 10);
  CHECK(hs.celebrity.planted_total() == 3);
  CHECK(hs.spammer.planted_total() == 4);
  for (std::size_t b = 0; b < 10; ++b) {
    CHECK(hs.celebrity.planted_count[b] <= hs.celebrity.all_count[b]);
    CHECK(hs.celebrity.bin_hi[b] == Catch::Approx(hs.celebrity.bin_lo[b] + 0.1));
  }
  // Bins are left-closed, so boundary scores land in the upper bin, and 1.0
  // lands in the top bin rather than out of range.
  CHECK(hs.celebrity.all_count[9] == 3);  // 1.0, 0.95, 0.99
  CHECK(hs.spammer.all_count[9] == 3);    // 0.9, 0.97, 1.0
  CHECK(hs.celebrity.all_count[5] == 1);  // 0.5 sits on the lower edge of bin 5

  const auto dens = hs.celebrity.log10_density_all(9);
  REQUIRE(dens);
  CHECK(*dens == Catch::Approx(std::log10(3.0 / (10.0 * 0.1))));
  CHECK_FALSE(hs.celebrity.log10_density_all(6));  // empty bin

  ScoreState zeros;
  zeros.c.assign(10, 0.0);
  zeros.s.assign(10, 0.0);
  const auto hz = eval::score_histograms(zeros, truth, 10);
  CHECK(hz.celebrity.all_count[0] == 10);
  for (std::size_t b = 1; b < 10; ++b) CHECK(hz.celebrity.all_count[b] == 0);

  CHECK_THROWS_AS(eval::score_histograms(state, truth, 1), invalid_input_error);
}
