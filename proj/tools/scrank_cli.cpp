// Command-line driver: synthetic graph generation, iterative scoring,
// experiment reports, and the generic monotone-update engine.
//
// Exit codes: 0 success/converged, 2 iteration cap reached before
// convergence, 3 invalid input, 4 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scrank/eval.hpp"
#include "scrank/graph.hpp"
#include "scrank/io.hpp"
#include "scrank/muesli.hpp"
#include "scrank/rng.hpp"
#include "scrank/scrank.hpp"
#include "scrank/synthgen.hpp"
#include "scrank/transfer.hpp"

namespace eval_ns = scrank::eval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitIoError = 4;

int g_exit_code = kExitOk;

using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw scrank::io_error("cannot create output directory: " + dir);
}

// Applies key=value lines from `path` to options of `cmd` that were not set
// on the command line, so explicit flags keep priority. '#'/';' comments and
// blank lines are skipped. Called from the subcommand callback, where the
// command-line option counts are final.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw scrank::io_error("cannot open config file: " + path);
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw scrank::invalid_input_error("config file " + path + " line " +
                                      std::to_string(line_no) + ": " + msg);
  };
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (!seen.insert(key).second) fail("duplicate key \"" + key + "\"");
    if (key == "config") fail("a config file cannot name another config file");
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) fail("unknown key \"" + key + "\"");
    if (opt->count() > 0) continue;  // an explicit command-line flag wins
    opt->add_result(value);
    opt->run_callback();
  }
  if (in.bad()) throw scrank::io_error("read failure on config file: " + path);
}

void write_manifest(const std::string& dir, const std::string& subcommand, const json& params,
                    std::uint64_t seed, const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& output_names) {
  json inputs = json::object();
  for (const std::string& p : input_paths) {
    inputs[p] = scrank::io::hex64(scrank::io::fnv1a64_file(p));
  }
  json m;
  m["subcommand"] = subcommand;
  m["params"] = params;
  m["seed"] = seed;
  m["inputs"] = inputs;
  m["outputs"] = output_names;
  const std::string path = join_path(dir, "manifest.json");
  std::ofstream out(path);
  if (!out) throw scrank::io_error("cannot open for writing: " + path);
  out << m.dump(2) << '\n';
  out.flush();
  if (!out) throw scrank::io_error("write failure: " + path);
}

// Shared scoring options (names match the config-file keys).
struct RankOptions {
  double mu_c = 100.0;
  double sigma_c = 25.0;
  double mu_s = 100.0;
  double sigma_s = 25.0;
  double epsilon = 1e-6;
  int max_iters = 50;
  std::string init = "0.5";
  std::uint64_t seed = 1;
  int workers = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mu_c", mu_c, "celebrity transfer mean");
    cmd->add_option("--sigma_c", sigma_c, "celebrity transfer spread");
    cmd->add_option("--mu_s", mu_s, "spammer transfer mean");
    cmd->add_option("--sigma_s", sigma_s, "spammer transfer spread");
    cmd->add_option("--epsilon", epsilon, "convergence threshold on the max score change");
    cmd->add_option("--max_iters", max_iters, "iteration cap");
    cmd->add_option("--init", init, "initial scores: a constant in [0,1] or 'rand'");
    cmd->add_option("--seed", seed, "seed for the 'rand' initialization");
    cmd->add_option("--workers", workers, "worker threads for the scoring phases");
  }

  scrank::InitSpec init_spec() const {
    if (init == "rand") return scrank::InitSpec::random(seed);
    try {
      std::size_t used = 0;
      const double v = std::stod(init, &used);
      if (used != init.size()) throw std::invalid_argument(init);
      return scrank::InitSpec::constant(v);
    } catch (const std::exception&) {
      throw scrank::invalid_input_error("unrecognized init \"" + init +
                                        "\": expected a number in [0,1] or \"rand\"");
    }
  }

  scrank::IterationConfig config() const {
    scrank::IterationConfig cfg;
    cfg.epsilon = epsilon;
    cfg.max_iterations = max_iters;
    cfg.init = init_spec();
    cfg.workers = workers;
    return cfg;
  }

  scrank::TransferFunction fc() const {
    return scrank::TransferFunction(mu_c, sigma_c, scrank::ScoreKind::celebrity);
  }
  scrank::TransferFunction fs() const {
    return scrank::TransferFunction(mu_s, sigma_s, scrank::ScoreKind::spammer);
  }

  json to_json() const {
    return json{{"mu_c", mu_c},       {"sigma_c", sigma_c}, {"mu_s", mu_s},
                {"sigma_s", sigma_s}, {"epsilon", epsilon}, {"max_iters", max_iters},
                {"init", init},       {"seed", seed},       {"workers", workers}};
  }
};

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string preset;
  std::string out_dir = ".";
  std::uint64_t n = 0, n_c = 0, n_s = 0;
  double p = -1.0, p_c = -1.0, p_s = -1.0;
  std::string h_model;
  double exponent = -1.0, avg_degree = -1.0, edge_prob = -1.0;
  std::uint64_t seed = 0;
  bool dry_run = false;
  CLI::App* cmd = nullptr;
};

scrank::synth::GeneratorParams resolve_generate_params(const GenerateOptions& o) {
  scrank::synth::GeneratorParams gp;
  if (!o.preset.empty()) {
    const auto found = scrank::synth::preset_by_name(o.preset);
    if (!found) {
      throw scrank::invalid_input_error("unknown preset \"" + o.preset +
                                        "\" (available: desk, paper-2M, throughput)");
    }
    gp = *found;
  }
  const auto given = [&](const char* flag) { return o.cmd->count(flag) > 0; };
  if (given("--n")) gp.n = o.n;
  if (given("--n_c")) gp.n_c = o.n_c;
  if (given("--n_s")) gp.n_s = o.n_s;
  if (given("--p")) gp.p = o.p;
  if (given("--p_c")) gp.p_c = o.p_c;
  if (given("--p_s")) gp.p_s = o.p_s;
  if (given("--seed")) gp.seed = o.seed;

  const bool wants_er = o.h_model == "erdos-renyi";
  const bool wants_cl = o.h_model == "chung-lu";
  if (!o.h_model.empty() && !wants_er && !wants_cl) {
    throw scrank::invalid_input_error("unknown h_model \"" + o.h_model +
                                      "\" (expected chung-lu or erdos-renyi)");
  }
  if (wants_er) gp.h_model = scrank::synth::ErdosRenyi{0.0};
  if (wants_cl) gp.h_model = scrank::synth::ChungLu{};
  if (given("--edge_prob")) {
    auto* er = std::get_if<scrank::synth::ErdosRenyi>(&gp.h_model);
    if (!er) throw scrank::invalid_input_error("--edge_prob applies to the erdos-renyi model");
    er->edge_prob = o.edge_prob;
  }
  if (given("--exponent") || given("--avg_degree")) {
    auto* cl = std::get_if<scrank::synth::ChungLu>(&gp.h_model);
    if (!cl) {
      throw scrank::invalid_input_error(
          "--exponent/--avg_degree apply to the chung-lu model");
    }
    if (given("--exponent")) cl->exponent = o.exponent;
    if (given("--avg_degree")) cl->avg_degree = o.avg_degree;
  }
  return gp;
}

json generator_params_json(const scrank::synth::GeneratorParams& gp) {
  json j{{"n", gp.n}, {"n_c", gp.n_c}, {"n_s", gp.n_s},
         {"p", gp.p}, {"p_c", gp.p_c}, {"p_s", gp.p_s},
         {"seed", gp.seed}};
  if (const auto* er = std::get_if<scrank::synth::ErdosRenyi>(&gp.h_model)) {
    j["h_model"] = "erdos-renyi";
    j["edge_prob"] = er->edge_prob;
  } else {
    const auto& cl = std::get<scrank::synth::ChungLu>(gp.h_model);
    j["h_model"] = "chung-lu";
    j["exponent"] = cl.exponent;
    j["avg_degree"] = cl.avg_degree;
  }
  return j;
}

void run_generate(const GenerateOptions& o) {
  const scrank::synth::GeneratorParams gp = resolve_generate_params(o);
  scrank::synth::validate_params(gp);

  const double est_arcs = scrank::synth::expected_arc_emissions(gp);
  const double est_gib = est_arcs * 24.0 / (1024.0 * 1024.0 * 1024.0);
  if (est_gib > 1.0) {
    std::cerr << "warning: expecting ~" << static_cast<std::uint64_t>(est_arcs)
              << " arcs; peak memory estimate ~" << est_gib << " GiB\n";
  }
  if (o.dry_run) {
    const scrank::synth::ExpectedStats dry = scrank::synth::expected_stats(gp);
    std::cout << "dry run; expected arc emissions ~" << static_cast<std::uint64_t>(est_arcs)
              << "\n  friendship edges: " << dry.h_edges.mean
              << "\n  reciprocated pairs: " << dry.reciprocated_pairs.mean
              << "\n  spam arcs: " << dry.spam_arcs.mean
              << "\n  celebrity arcs: " << dry.celebrity_arcs.mean << '\n';
    return;
  }
  ensure_out_dir(o.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const scrank::synth::PlantedInstance inst = scrank::synth::generate_instance(gp);
  const auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();

  const json params = generator_params_json(gp);
  std::vector<std::string> comments{"synthetic planted-truth instance",
                                    "params " + params.dump()};
  const std::string edges_path = join_path(o.out_dir, "edges.txt");
  const std::string truth_path = join_path(o.out_dir, "truth.txt");
  scrank::io::write_edge_list(edges_path, inst.graph, comments);
  scrank::io::write_truth(truth_path, inst.graph, inst.truth);

  const scrank::synth::ExpectedStats ex = scrank::synth::expected_stats(gp);
  auto line = [](const char* name, double realized, const scrank::synth::MeanSd& ms_) {
    std::cout << "  " << name << ": realized " << realized << ", expected " << ms_.mean
              << " (sd " << ms_.sd << ")\n";
  };
  std::cout << "generated " << scrank::summary_line(inst.graph,
                                                    scrank::unreciprocated(inst.graph))
            << " in " << ms << " ms\n";
  line("friendship edges", static_cast<double>(inst.stats.h_edges), ex.h_edges);
  line("reciprocated pairs", static_cast<double>(inst.stats.reciprocated_pairs),
       ex.reciprocated_pairs);
  line("spam arcs", static_cast<double>(inst.stats.spam_arcs), ex.spam_arcs);
  line("celebrity arcs", static_cast<double>(inst.stats.celebrity_arcs), ex.celebrity_arcs);

  write_manifest(o.out_dir, "generate", params, gp.seed, {},
                 {"edges.txt", "truth.txt"});
}

// -------------------------------------------------------------------- rank

struct RankCmdOptions {
  std::string graph_path;
  std::string out_dir = ".";
  RankOptions rank;
};

void run_rank(const RankCmdOptions& o) {
  const scrank::DirectedGraph g = scrank::load_edge_list(o.graph_path);
  const scrank::ArcSet a = scrank::unreciprocated(g);
  std::cout << scrank::summary_line(g, a) << '\n';
  ensure_out_dir(o.out_dir);

  const auto res = scrank::iterate(a, scrank::TransferField(o.rank.fc()),
                                   scrank::TransferField(o.rank.fs()), o.rank.config());
  scrank::io::write_scores_tsv(join_path(o.out_dir, "scores.tsv"), g, res.state);
  scrank::io::write_trace_csv(join_path(o.out_dir, "trace.csv"), res.trace);
  write_manifest(o.out_dir, "rank", o.rank.to_json(), o.rank.seed, {o.graph_path},
                 {"scores.tsv", "trace.csv"});

  if (res.converged) {
    std::cout << "converged after " << res.state.iteration_count << " iterations\n";
  } else {
    std::cout << "not converged after " << res.state.iteration_count
              << " iterations (cap reached)\n";
    g_exit_code = kExitNotConverged;
  }
}

// -------------------------------------------------------------------- eval

struct EvalOptions {
  std::string graph_path;
  std::string truth_path;
  std::string experiment;
  std::string out_dir = ".";
  std::size_t bins = 50;
  double threshold = 0.5;
  RankOptions rank;
};

void run_eval(const EvalOptions& o) {
  const scrank::DirectedGraph g = scrank::load_edge_list(o.graph_path);
  const scrank::ArcSet a = scrank::unreciprocated(g);
  ensure_out_dir(o.out_dir);
  const scrank::TransferField fc(o.rank.fc()), fs(o.rank.fs());

  json params = o.rank.to_json();
  params["experiment"] = o.experiment;
  std::vector<std::string> inputs{o.graph_path};
  std::vector<std::string> outputs;

  if (o.experiment == "convergence") {
    const std::vector<scrank::InitSpec> inits{
        scrank::InitSpec::zeros(), scrank::InitSpec::ones(), scrank::InitSpec::constant(0.5),
        scrank::InitSpec::random(o.rank.seed)};
    const auto series =
        eval_ns::convergence_experiment(a, fc, fs, inits, o.rank.epsilon,
                                        static_cast<std::size_t>(o.rank.max_iters));
    scrank::io::write_convergence_csv(join_path(o.out_dir, "convergence.csv"), series);
    for (const auto& s : series) {
      std::cout << "init " << s.init_name << ": "
                << (s.converged ? "converged" : "hit the cap");
      if (s.decay_rate_c) std::cout << ", decay rate " << *s.decay_rate_c;
      std::cout << '\n';
    }
    outputs.push_back("convergence.csv");
  } else if (o.experiment == "uniqueness") {
    const std::vector<eval_ns::UniquenessSeries> series{
        eval_ns::uniqueness_experiment(a, fc, fs, scrank::InitSpec::zeros(),
                                       scrank::InitSpec::ones(), o.rank.epsilon,
                                       static_cast<std::size_t>(o.rank.max_iters)),
        eval_ns::uniqueness_experiment(a, fc, fs, scrank::InitSpec::zeros(),
                                       scrank::InitSpec::constant(0.5), o.rank.epsilon,
                                       static_cast<std::size_t>(o.rank.max_iters))};
    scrank::io::write_uniqueness_csv(join_path(o.out_dir, "uniqueness.csv"), series);
    for (const auto& s : series) {
      std::cout << "pair " << s.pair_name << ": initial distance " << s.l1_c[0]
                << ", final " << s.l1_c.back() << '\n';
    }
    outputs.push_back("uniqueness.csv");
  } else if (o.experiment == "pr" || o.experiment == "hist") {
    if (o.truth_path.empty()) {
      throw scrank::invalid_input_error("experiment \"" + o.experiment +
                                        "\" needs --truth");
    }
    const scrank::synth::GroundTruth truth = scrank::io::read_truth(o.truth_path, g);
    inputs.push_back(o.truth_path);
    const auto res = scrank::iterate(a, fc, fs, o.rank.config());
    if (!res.converged) g_exit_code = kExitNotConverged;
    if (o.experiment == "pr") {
      eval_ns::PrPoint point;
      point.seed = o.rank.seed;
      point.params = {o.rank.mu_c, o.rank.sigma_c, o.rank.mu_s, o.rank.sigma_s};
      point.pr = eval_ns::precision_recall(res.state, truth, o.threshold);
      scrank::io::write_pr_csv(join_path(o.out_dir, "pr.csv"), {point});
      auto show = [](const char* cls, const eval_ns::ClassPR& c) {
        std::cout << cls << ": precision "
                  << (c.precision ? std::to_string(*c.precision) : std::string("NA"))
                  << ", recall " << c.recall << '\n';
      };
      show("celebrities", point.pr.celebrity);
      show("spammers", point.pr.spammer);
      outputs.push_back("pr.csv");
    } else {
      const auto hs = eval_ns::score_histograms(res.state, truth, o.bins);
      scrank::io::write_hist_csv(join_path(o.out_dir, "hist_c.csv"), hs.celebrity);
      scrank::io::write_hist_csv(join_path(o.out_dir, "hist_s.csv"), hs.spammer);
      outputs.push_back("hist_c.csv");
      outputs.push_back("hist_s.csv");
    }
  } else {
    throw scrank::invalid_input_error(
        "unknown experiment \"" + o.experiment +
        "\" (expected convergence, uniqueness, pr, or hist)");
  }
  write_manifest(o.out_dir, "eval", params, o.rank.seed, inputs, outputs);
}

// ------------------------------------------------------------------ muesli

struct MuesliOptions {
  std::string system_path;
  std::string builtin;
  std::string activation = "round-robin";
  double eps = 1e-8;
  std::uint64_t max_steps = 1000000;
  std::uint64_t n = 50;
  double edge_prob = 0.08;
  double steepness = 30.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

scrank::muesli::System build_muesli_system(const MuesliOptions& o) {
  namespace mu = scrank::muesli;
  if (!o.system_path.empty()) return mu::parse_system_file(o.system_path);
  if (o.builtin.empty()) {
    throw scrank::invalid_input_error("give either --system <file> or --builtin <name>");
  }

  // Random undirected support for the builtin examples.
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<scrank::NodeId, scrank::NodeId>> edges;
  for (std::size_t u = 0; u + 1 < o.n; ++u) {
    for (std::size_t v = u + 1; v < o.n; ++v) {
      if (unit(rng) < o.edge_prob) {
        edges.push_back({static_cast<scrank::NodeId>(u), static_cast<scrank::NodeId>(v)});
      }
    }
  }

  if (o.builtin == "connectivity") {
    return mu::make_connectivity(o.n, edges, 0, o.steepness);
  }
  if (o.builtin == "party") {
    std::vector<mu::WeightTriple> w;
    for (const auto& e : edges) {
      w.push_back({e.first, e.second, unit(rng) < 0.5 ? 1.0 : -1.0});
    }
    mu::System sys = mu::make_party_affiliation(o.n, w, 4.0);
    std::vector<double> init(o.n);
    for (double& x : init) x = unit(rng) - 0.5;  // break the all-zero tie
    sys.set_state(std::move(init));
    return sys;
  }
  if (o.builtin == "tech") {
    std::vector<mu::WeightTriple> w;
    for (const auto& e : edges) {
      w.push_back({e.first, e.second, 10.0 + 110.0 * unit(rng)});
    }
    mu::System sys = mu::make_tech_diffusion(o.n, w, 60.0, 0.2);
    std::vector<double> init(o.n);
    for (double& x : init) x = unit(rng);
    sys.set_state(std::move(init));
    return sys;
  }
  throw scrank::invalid_input_error("unknown builtin \"" + o.builtin +
                                    "\" (expected connectivity, party, or tech)");
}

void run_muesli(const MuesliOptions& o) {
  namespace mu = scrank::muesli;
  mu::System sys = build_muesli_system(o);
  ensure_out_dir(o.out_dir);

  mu::ActivationSequence act = mu::ActivationSequence::round_robin(sys.size());
  if (o.activation == "random") {
    act = mu::ActivationSequence::random(sys.size(), o.seed);
  } else if (o.activation != "round-robin") {
    throw scrank::invalid_input_error("unknown activation \"" + o.activation +
                                      "\" (expected round-robin or random)");
  }

  const mu::RunResult res = mu::run(sys, act, o.eps, o.max_steps, true);

  // Internal consistency: the recorded potential never increases.
  long double prev = res.trace.empty() ? 0.0L : res.trace.front().potential;
  for (std::size_t t = 1; t < res.trace.size(); ++t) {
    const long double cur = res.trace[t].potential;
    if (cur > prev + 1e-9L) {
      std::cerr << "internal error: potential rose at step " << t << '\n';
      g_exit_code = 1;
      break;
    }
    prev = cur;
  }

  scrank::io::write_muesli_csv(join_path(o.out_dir, "muesli.csv"), res.trace);
  json params{{"system", o.system_path}, {"builtin", o.builtin},
              {"activation", o.activation}, {"eps", o.eps},
              {"max_steps", o.max_steps},  {"n", o.n},
              {"edge_prob", o.edge_prob},  {"steepness", o.steepness},
              {"seed", o.seed}};
  std::vector<std::string> inputs;
  if (!o.system_path.empty()) inputs.push_back(o.system_path);
  write_manifest(o.out_dir, "muesli", params, o.seed, inputs, {"muesli.csv"});

  std::cout << (res.converged ? "converged" : "step cap reached") << " after " << res.steps
            << " steps; final potential "
            << static_cast<double>(res.trace.empty() ? sys.potential()
                                                     : res.trace.back().potential)
            << '\n';
  if (!res.converged && g_exit_code == kExitOk) g_exit_code = kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative graph scoring toolkit: synthetic planted-truth generation,\n"
               "celebrity/spammer score iteration, experiment reports, and a generic\n"
               "monotone-update engine."};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* cg = app.add_subcommand("generate", "generate a synthetic planted instance");
  gen.cmd = cg;
  cg->add_option("--preset", gen.preset, "named parameter set: desk, paper-2M, throughput");
  cg->add_option("--n", gen.n, "node count");
  cg->add_option("--n_c", gen.n_c, "planted celebrity count");
  cg->add_option("--n_s", gen.n_s, "planted spammer count");
  cg->add_option("--p", gen.p, "probability a friendship edge stays one-directional");
  cg->add_option("--p_c", gen.p_c, "per-pair inbound celebrity arc probability");
  cg->add_option("--p_s", gen.p_s, "per-pair outbound spam arc probability");
  cg->add_option("--h_model", gen.h_model, "friendship model: chung-lu or erdos-renyi");
  cg->add_option("--exponent", gen.exponent, "chung-lu power-law exponent");
  cg->add_option("--avg_degree", gen.avg_degree, "chung-lu target average degree");
  cg->add_option("--edge_prob", gen.edge_prob, "erdos-renyi edge probability");
  cg->add_option("--seed", gen.seed, "generator seed");
  cg->add_flag("--dry_run", gen.dry_run, "validate and print expectations without generating");
  cg->add_option("--out", gen.out_dir, "output directory");
  std::string gen_config;
  cg->add_option("--config", gen_config, "key=value config file (flags win)");
  cg->callback([&] {
    apply_config_file(cg, gen_config);
    run_generate(gen);
  });

  RankCmdOptions rank;
  CLI::App* cr = app.add_subcommand("rank", "score a directed graph");
  cr->add_option("--graph", rank.graph_path, "edge-list file")->required();
  cr->add_option("--out", rank.out_dir, "output directory");
  rank.rank.attach(cr);
  std::string rank_config;
  cr->add_option("--config", rank_config, "key=value config file (flags win)");
  cr->callback([&] {
    apply_config_file(cr, rank_config);
    run_rank(rank);
  });

  EvalOptions ev;
  CLI::App* ce = app.add_subcommand("eval", "run an experiment report");
  ce->add_option("--graph", ev.graph_path, "edge-list file")->required();
  ce->add_option("--truth", ev.truth_path, "planted truth sidecar (pr/hist)");
  ce->add_option("--experiment", ev.experiment,
                 "one of: convergence, uniqueness, pr, hist")
      ->required();
  ce->add_option("--bins", ev.bins, "histogram bin count");
  ce->add_option("--threshold", ev.threshold, "score threshold for pr");
  ce->add_option("--out", ev.out_dir, "output directory");
  ev.rank.attach(ce);
  std::string eval_config;
  ce->add_option("--config", eval_config, "key=value config file (flags win)");
  ce->callback([&] {
    apply_config_file(ce, eval_config);
    run_eval(ev);
  });

  MuesliOptions mo;
  CLI::App* cm = app.add_subcommand("muesli", "run the generic monotone-update engine");
  cm->add_option("--system", mo.system_path, "system definition file");
  cm->add_option("--builtin", mo.builtin, "builtin example: connectivity, party, tech");
  cm->add_option("--activation", mo.activation, "round-robin or random");
  cm->add_option("--eps", mo.eps, "per-step quiet threshold");
  cm->add_option("--max_steps", mo.max_steps, "step cap");
  cm->add_option("--n", mo.n, "builtin example size");
  cm->add_option("--edge_prob", mo.edge_prob, "builtin example edge probability");
  cm->add_option("--steepness", mo.steepness, "builtin connectivity steepness");
  cm->add_option("--seed", mo.seed, "builtin example seed");
  cm->add_option("--out", mo.out_dir, "output directory");
  std::string muesli_config;
  cm->add_option("--config", muesli_config, "key=value config file (flags win)");
  cm->callback([&] {
    apply_config_file(cm, muesli_config);
    run_muesli(mo);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  } catch (const scrank::invalid_input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const scrank::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  return g_exit_code;
}
