// posim — compare partial orders, generate fixtures, estimate nulls, and run
// the perturbation experiments. Every randomized code path takes a fixed
// default seed, so identical invocations print byte-identical output; pass
// --seed random to opt into entropy.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "posim/posim.hpp"

namespace {

using nlohmann::ordered_json;

// Exit codes: 0 success, 2 usage error, 1 domain error (message names the
// error variant, e.g. "LinkCountMismatch: ...").
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 1;

std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return std::stoull(text);  // pre-validated by the option check
}

bool valid_seed(const std::string& text) {
  if (text == "random") return true;
  if (text.empty()) return false;
  if (text[0] == '-') return false;  // stoull would wrap negatives silently
  try {
    std::size_t used = 0;
    (void)std::stoull(text, &used);
    return used == text.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

posim::Scheme parse_scheme(const std::string& name) {
  if (name == "top-down") return posim::Scheme::top_down;
  if (name == "bottom-up") return posim::Scheme::bottom_up;
  return posim::Scheme::random;
}

// Writes to `path`, or to stdout when the path is empty.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) posim::raise(posim::ErrorKind::ParseError, "cannot open output file: " + path);
  emit(out);
}

ordered_json report_json(const posim::SimilarityReport& r) {
  ordered_json j;
  j["measure"] = r.measure;
  if (r.integer_valued)
    j["value"] = static_cast<long long>(r.value);
  else
    j["value"] = r.value;
  if (r.has_information) {
    j["i"] = r.i_total;
    j["h_kappa"] = r.h_kappa;
    j["h_mu"] = r.h_mu;
  }
  if (r.has_combinatorial_null) {
    j["expected_i"] = r.expected_I;
    j["null_terms"] = r.null_terms;
  }
  if (r.has_empirical_null) {
    j["null_mean"] = r.null_mean;
    j["null_stderr"] = r.null_stderr;
    j["null_samples"] = r.null_samples;
    j["null_model"] = r.null_model;
    j["links"] = r.links;
  }
  if (r.has_extension_count) j["extensions"] = r.extensions_enumerated;
  if (r.has_self_defect) j["self_defect"] = r.self_defect;
  return j;
}

struct CompareConfig {
  std::string path_a, path_b;
  std::string measure = "nmi";
  std::string format = "kv";
  std::string seed_text = std::to_string(posim::kDefaultSeed);
  std::string null_model = "random-dag";
  int samples = 1000;
  long long burn_in = -1;
  long long cap = posim::kDefaultExtensionCap;
  int threads = 0;
  bool require_rooted = false;
};

posim::SimilarityReport build_report(const CompareConfig& cfg) {
  using namespace posim;
  const PartialOrder kappa = load_order(cfg.path_a, cfg.require_rooted);
  const PartialOrder mu = load_order(cfg.path_b, cfg.require_rooted);

  SimilarityReport rep;
  rep.measure = cfg.measure;
  if (cfg.measure == "nmi" || cfg.measure == "ami") {
    MiBreakdown mi = mutual_information(kappa, mu);
    rep.has_information = true;
    rep.i_total = mi.total;
    rep.h_kappa = mi.h_kappa;
    rep.h_mu = mi.h_mu;
    if (cfg.measure == "nmi") {
      rep.value = nmi_from(mi.total, mi.h_kappa, mi.h_mu);
    } else {
      NullModelReport null_model = expected_mi(kappa, mu);
      rep.has_combinatorial_null = true;
      rep.expected_I = null_model.expected_I;
      rep.null_terms = null_model.term_count;
      const double denom = 0.5 * (mi.h_kappa + mi.h_mu) - null_model.expected_I;
      if (denom <= 1e-12)
        raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
      rep.value = (mi.total - null_model.expected_I) / denom;
    }
  } else if (cfg.measure == "emi") {
    EmiOptions opts;
    opts.samples = cfg.samples;
    opts.seed = parse_seed(cfg.seed_text);
    opts.null_model =
        cfg.null_model == "rewire-mcmc" ? NullModel::rewire_mcmc : NullModel::random_dag;
    opts.burn_in = cfg.burn_in;
    opts.threads = cfg.threads;
    EmiResult res = emi(kappa, mu, opts);
    rep.value = res.value;
    rep.has_information = true;
    rep.i_total = res.i_total;
    rep.h_kappa = res.h_kappa;
    rep.h_mu = res.h_mu;
    rep.has_empirical_null = true;
    rep.null_mean = res.null_estimate.mean_I;
    rep.null_stderr = res.null_estimate.stderr_I;
    rep.null_samples = res.null_estimate.samples_used;
    rep.null_model = cfg.null_model;
    rep.links = res.m;
  } else if (cfg.measure == "kendall") {
    rep.value = static_cast<double>(kendall_tau(kappa, mu));
    rep.integer_valued = true;
  } else if (cfg.measure == "footrule") {
    rep.value = static_cast<double>(spearman_footrule(kappa, mu));
    rep.integer_valued = true;
  } else if (cfg.measure == "naive-nmi") {
    NaiveNmiResult res = naive_nmi(kappa, mu);
    rep.value = res.value;
    rep.has_self_defect = true;
    rep.self_defect = res.self_defect;
  } else {
    // nn-* / hausdorff-*: distances between the linear-extension sets
    const ExtMetric metric = (cfg.measure == "nn-kendall" || cfg.measure == "hausdorff-kendall")
                                 ? ExtMetric::kendall
                                 : ExtMetric::footrule;
    const bool hausdorff = cfg.measure.rfind("hausdorff-", 0) == 0;
    DistanceReport res = hausdorff ? hausdorff_distance(kappa, mu, metric, cfg.cap)
                                   : nn_distance(kappa, mu, metric, cfg.cap);
    rep.value = static_cast<double>(res.value);
    rep.integer_valued = true;
    rep.has_extension_count = true;
    rep.extensions_enumerated = res.extensions_enumerated;
  }
  return rep;
}

posim::MeasureSelection parse_measures(const std::string& csv) {
  posim::MeasureSelection sel;
  sel.nmi = false;
  for (const std::string& item : split_list(csv)) {
    if (item == "nmi")
      sel.nmi = true;
    else if (item == "ami")
      sel.ami = true;
    else if (item == "emi")
      sel.emi = true;
    else if (item == "kendall")
      sel.kendall = true;
  }
  return sel;
}

std::string check_measure_list(const std::string& csv) {
  for (const std::string& item : split_list(csv))
    if (item != "nmi" && item != "ami" && item != "emi" && item != "kendall")
      return "unknown measure '" + item + "' (expected nmi, ami, emi, kendall)";
  return {};
}

std::string check_fraction_list(const std::string& csv) {
  for (const std::string& item : split_list(csv)) {
    try {
      std::size_t used = 0;
      (void)std::stod(item, &used);
      if (used != item.size()) return "bad fraction '" + item + "'";
    } catch (...) {
      return "bad fraction '" + item + "'";
    }
  }
  return {};
}

std::string check_int_list(const std::string& csv) {
  for (const std::string& item : split_list(csv)) {
    try {
      std::size_t used = 0;
      (void)std::stoi(item, &used);
      if (used != item.size()) return "bad integer '" + item + "'";
    } catch (...) {
      return "bad integer '" + item + "'";
    }
  }
  return {};
}

int run(int argc, char** argv) {
  CLI::App app{"information-theoretic similarity and classical distances for partial orders"};
  app.require_subcommand(1);

  const auto seed_check = [](const std::string& s) {
    return valid_seed(s) ? std::string{} : "seed must be a non-negative integer or 'random'";
  };

  // --- compare ---------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "compare two edge-list order files");
  CompareConfig cc;
  cmp->add_option("kappa", cc.path_a, "first order file")->required();
  cmp->add_option("mu", cc.path_b, "second order file")->required();
  cmp->add_option("--measure", cc.measure, "measure to evaluate")
      ->check(CLI::IsMember({"nmi", "ami", "emi", "kendall", "footrule", "naive-nmi", "nn-kendall",
                             "nn-footrule", "hausdorff-kendall", "hausdorff-footrule"}))
      ->capture_default_str();
  cmp->add_option("--samples", cc.samples, "empirical null sample count (emi)")
      ->capture_default_str();
  cmp->add_option("--seed", cc.seed_text, "RNG seed, or 'random'")
      ->check(seed_check)
      ->capture_default_str();
  cmp->add_option("--format", cc.format, "output format")
      ->check(CLI::IsMember({"kv", "json"}))
      ->capture_default_str();
  cmp->add_option("--null", cc.null_model, "empirical null sampler (emi)")
      ->check(CLI::IsMember({"random-dag", "rewire-mcmc"}))
      ->capture_default_str();
  cmp->add_option("--burn-in", cc.burn_in, "rewire-mcmc burn-in steps (-1 = 10*links)")
      ->capture_default_str();
  cmp->add_option("--cap", cc.cap, "linear-extension enumeration cap (nn-*/hausdorff-*)")
      ->capture_default_str();
  cmp->add_option("--threads", cc.threads, "worker threads (0 = POSIM_THREADS env, then hardware)")
      ->capture_default_str();
  cmp->add_flag("--require-rooted", cc.require_rooted, "reject inputs without a unique root");

  // --- gen -------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate an edge-list order file");
  gen->require_subcommand(1);
  int gen_branching = 2, gen_depth = 4, gen_n = 8;
  std::string gen_sizes = "2,2";
  std::string gen_out;
  auto* gen_tree = gen->add_subcommand("tree", "complete regular tree");
  gen_tree->add_option("--branching", gen_branching, "children per node")->capture_default_str();
  gen_tree->add_option("--depth", gen_depth, "levels, root included")->capture_default_str();
  gen_tree->add_option("-o,--output", gen_out, "output file (default stdout)");
  auto* gen_chain = gen->add_subcommand("chain", "total order");
  gen_chain->add_option("--n", gen_n, "candidate count")->capture_default_str();
  gen_chain->add_option("-o,--output", gen_out, "output file (default stdout)");
  auto* gen_buckets = gen->add_subcommand("buckets", "ordered groups of ties");
  gen_buckets->add_option("--sizes", gen_sizes, "comma-separated bucket sizes")
      ->check([](const std::string& s) { return check_int_list(s); })
      ->capture_default_str();
  gen_buckets->add_option("-o,--output", gen_out, "output file (default stdout)");

  // --- null ------------------------------------------------------------
  auto* nul = app.add_subcommand("null", "estimate the expected MI of random (n,m) DAG pairs");
  int null_n = 0;
  long long null_m = 0;
  int null_samples = 1000, null_threads = 0;
  std::string null_seed = std::to_string(posim::kDefaultSeed);
  nul->add_option("--n", null_n, "candidate count")->required();
  nul->add_option("--m", null_m, "link count")->required();
  nul->add_option("--samples", null_samples, "sample pairs")->capture_default_str();
  nul->add_option("--seed", null_seed, "RNG seed, or 'random'")
      ->check(seed_check)
      ->capture_default_str();
  nul->add_option("--threads", null_threads, "worker threads")->capture_default_str();

  // --- experiment ------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "perturbation experiments, CSV output");
  exp->require_subcommand(1);
  std::string exp_out, exp_seed = std::to_string(posim::kDefaultSeed);
  int exp_runs = 100, exp_emi_samples = 1000, exp_threads = 0;
  double exp_grid_step = 0.05;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--runs", exp_runs, "independent runs per point")->capture_default_str();
    sub->add_option("--seed", exp_seed, "RNG seed, or 'random'")
        ->check(seed_check)
        ->capture_default_str();
    sub->add_option("--threads", exp_threads, "worker threads")->capture_default_str();
    sub->add_option("-o,--output", exp_out, "CSV file (default stdout)");
  };

  auto* exp_swap = exp->add_subcommand("swap", "same-level pair swaps on a regular tree");
  int swap_branching = 2, swap_depth = 8;
  exp_swap->add_option("--branching", swap_branching, "children per node")->capture_default_str();
  exp_swap->add_option("--depth", swap_depth, "levels, root included")->capture_default_str();
  exp_swap->add_option("--emi-samples", exp_emi_samples, "empirical null sample pairs")
      ->capture_default_str();
  add_common(exp_swap);

  std::string exp_input, exp_scheme = "random";
  std::string permute_measures = "nmi,ami,kendall", rewire_measures = "nmi,emi";
  auto* exp_permute = exp->add_subcommand("permute", "progressive label randomization walk");
  exp_permute->add_option("order", exp_input, "edge-list order file")->required();
  exp_permute->add_option("--scheme", exp_scheme, "visit order")
      ->check(CLI::IsMember({"top-down", "bottom-up", "random"}))
      ->capture_default_str();
  exp_permute->add_option("--measures", permute_measures, "comma list: nmi,ami,emi,kendall")
      ->check([](const std::string& s) { return check_measure_list(s); })
      ->capture_default_str();
  exp_permute->add_option("--grid-step", exp_grid_step, "recording grid step")
      ->capture_default_str();
  exp_permute->add_option("--emi-samples", exp_emi_samples, "empirical null sample pairs")
      ->capture_default_str();
  add_common(exp_permute);

  auto* exp_rewire = exp->add_subcommand("rewire", "progressive link relocation walk");
  exp_rewire->add_option("order", exp_input, "edge-list order file")->required();
  exp_rewire->add_option("--scheme", exp_scheme, "visit order")
      ->check(CLI::IsMember({"top-down", "bottom-up", "random"}))
      ->capture_default_str();
  exp_rewire->add_option("--measures", rewire_measures, "comma list: nmi,ami,emi,kendall")
      ->check([](const std::string& s) { return check_measure_list(s); })
      ->capture_default_str();
  exp_rewire->add_option("--grid-step", exp_grid_step, "recording grid step")
      ->capture_default_str();
  exp_rewire->add_option("--emi-samples", exp_emi_samples, "empirical null sample pairs")
      ->capture_default_str();
  add_common(exp_rewire);

  auto* exp_overlap = exp->add_subcommand("overlap", "overlap integrals of per-f distributions");
  std::string overlap_measure = "ami";
  std::string overlap_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  int overlap_runs = 200, overlap_bins = 40;
  exp_overlap->add_option("order", exp_input, "edge-list order file")->required();
  exp_overlap->add_option("--measure", overlap_measure, "distribution to compare")
      ->check(CLI::IsMember({"kendall", "ami"}))
      ->capture_default_str();
  exp_overlap->add_option("--f-grid", overlap_grid, "comma list of fractions")
      ->check([](const std::string& s) { return check_fraction_list(s); })
      ->capture_default_str();
  exp_overlap->add_option("--runs-per-f", overlap_runs, "samples per fraction")
      ->capture_default_str();
  exp_overlap->add_option("--bins", overlap_bins, "histogram bins")->capture_default_str();
  exp_overlap->add_option("--seed", exp_seed, "RNG seed, or 'random'")
      ->check(seed_check)
      ->capture_default_str();
  exp_overlap->add_option("--threads", exp_threads, "worker threads")->capture_default_str();
  exp_overlap->add_option("-o,--output", exp_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (cmp->parsed()) {
    posim::SimilarityReport rep = build_report(cc);
    if (cc.format == "json")
      std::cout << report_json(rep).dump() << '\n';
    else
      posim::write_report_kv(std::cout, rep);
    return 0;
  }

  if (gen->parsed()) {
    posim::PartialOrder order;
    if (gen_tree->parsed()) {
      order = posim::gen_regular_tree(gen_branching, gen_depth);
    } else if (gen_chain->parsed()) {
      order = posim::gen_total_order(gen_n);
    } else {
      std::vector<int> sizes;
      for (const std::string& item : split_list(gen_sizes)) sizes.push_back(std::stoi(item));
      order = posim::gen_bucket_order(sizes);
    }
    with_output(gen_out, [&](std::ostream& os) { posim::write_order(os, order); });
    return 0;
  }

  if (nul->parsed()) {
    posim::DagNullSpec spec{null_n, null_m, null_samples, parse_seed(null_seed)};
    posim::EmpiricalNull est = posim::empirical_expected_mi(spec, null_threads);
    std::cout << "null_mean=" << posim::detail::fmt_f12(est.mean_I) << '\n';
    std::cout << "null_stderr=" << posim::detail::fmt_f12(est.stderr_I) << '\n';
    std::cout << "null_samples=" << est.samples_used << '\n';
    std::cout << "null_model=random-dag\n";
    return 0;
  }

  // experiment subcommands
  posim::ExperimentOptions opts;
  opts.runs = exp_runs;
  opts.seed = parse_seed(exp_seed);
  opts.grid_step = exp_grid_step;
  opts.emi_null_samples = exp_emi_samples;
  opts.threads = exp_threads;

  if (exp_swap->parsed()) {
    posim::ExperimentTrace trace = posim::swap_experiment(swap_branching, swap_depth, opts);
    with_output(exp_out, [&](std::ostream& os) { posim::write_trace_csv(os, trace); });
    return 0;
  }
  if (exp_permute->parsed() || exp_rewire->parsed()) {
    const bool is_permute = exp_permute->parsed();
    opts.measures = parse_measures(is_permute ? permute_measures : rewire_measures);
    posim::PartialOrder order = posim::load_order(exp_input);
    posim::Scheme scheme = parse_scheme(exp_scheme);
    posim::ExperimentTrace trace = is_permute
                                       ? posim::permutation_randomization(order, scheme, opts)
                                       : posim::rewiring_randomization(order, scheme, opts);
    with_output(exp_out, [&](std::ostream& os) { posim::write_trace_csv(os, trace); });
    return 0;
  }
  if (exp_overlap->parsed()) {
    posim::PartialOrder order = posim::load_order(exp_input);
    std::vector<double> grid;
    for (const std::string& item : split_list(overlap_grid)) grid.push_back(std::stod(item));
    posim::OverlapMeasure measure = overlap_measure == "kendall" ? posim::OverlapMeasure::kendall
                                                                 : posim::OverlapMeasure::ami;
    posim::OverlapMatrix matrix = posim::overlap_matrix(order, grid, overlap_runs, overlap_bins,
                                                        parse_seed(exp_seed), measure, exp_threads);
    with_output(exp_out, [&](std::ostream& os) { posim::write_overlap_csv(os, matrix); });
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const posim::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}
