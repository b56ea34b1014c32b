// Copyright 2026 The skanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line surface for the library: privacy calculators, reference
// table and figure data, the anonymization pipeline, independent
// verification checks, and the composition demo.
//
// Exit codes: 0 success (or help), 1 input error (unreadable or malformed
// files, values missing from the hierarchy), 2 parameter domain error
// (including bad command lines), 3 verification check failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skanon/compose_demo.hpp"
#include "skanon/csv.hpp"
#include "skanon/dataset.hpp"
#include "skanon/errors.hpp"
#include "skanon/hierarchy.hpp"
#include "skanon/oracle.hpp"
#include "skanon/pipeline.hpp"
#include "skanon/privacy.hpp"

namespace {

using json = nlohmann::json;

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Epsilon grid used by the figure emitters: 40 evenly spaced points from
// the feasibility floor plus 0.01 up to 3.0.
std::vector<double> epsilon_grid(double beta) {
  const double lo = skanon::min_epsilon(beta) + 0.01;
  const double hi = 3.0;
  std::vector<double> grid;
  grid.reserve(40);
  for (int i = 0; i < 40; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / 39.0);
  }
  return grid;
}

void print_json(const json& out) { std::cout << out.dump(2) << "\n"; }

int run_calc_delta(std::int64_t k, double beta, double epsilon,
                   std::optional<double> epsilon1) {
  skanon::DeltaResult result =
      epsilon1.has_value()
          ? skanon::delta_esafe(k, beta, epsilon, *epsilon1)
          : skanon::delta_strongly_safe(k, beta, epsilon);
  json out;
  out["delta"] = result.delta;
  out["argmax_n"] = result.argmax_n;
  out["gamma"] = result.gamma;
  out["min_epsilon"] =
      skanon::min_epsilon(beta) + (epsilon1.has_value() ? *epsilon1 : 0.0);
  if (result.cap_hit) out["scan_capped"] = true;
  print_json(out);
  return 0;
}

int run_amplify(double epsilon1, double delta1, double beta1, double beta2) {
  skanon::AmplifiedParams amplified =
      skanon::amplify(epsilon1, delta1, beta1, beta2);
  json out;
  out["epsilon2"] = amplified.epsilon2;
  out["delta2"] = amplified.delta2;
  print_json(out);
  return 0;
}

int run_solve_min_epsilon(std::int64_t k, double beta, double delta_max) {
  std::optional<double> eps = skanon::solve_min_epsilon(k, beta, delta_max);
  json out;
  out["satisfiable"] = eps.has_value();
  if (eps.has_value()) out["epsilon"] = *eps;
  print_json(out);
  return 0;
}

int run_solve_min_k(double beta, double epsilon, double delta_max) {
  std::optional<std::int64_t> k =
      skanon::solve_min_k(beta, epsilon, delta_max);
  json out;
  out["satisfiable"] = k.has_value();
  if (k.has_value()) out["k"] = *k;
  print_json(out);
  return 0;
}

int run_table2() {
  const double betas[] = {0.05, 0.1, 0.2};
  const double epsilons[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  std::cout << "beta,epsilon,delta\n";
  for (double beta : betas) {
    for (double epsilon : epsilons) {
      skanon::DeltaResult r = skanon::delta_strongly_safe(20, beta, epsilon);
      std::cout << fmt_number(beta) << "," << fmt_number(epsilon) << ","
                << fmt_number(r.delta) << "\n";
    }
  }
  return 0;
}

void emit_inverse_delta_series(const std::string& series, std::int64_t k,
                               double beta) {
  for (double epsilon : epsilon_grid(beta)) {
    skanon::DeltaResult r = skanon::delta_strongly_safe(k, beta, epsilon);
    std::cout << fmt_number(epsilon) << "," << series << ","
              << fmt_number(1.0 / r.delta) << "\n";
  }
}

int run_figure_data(std::int64_t figure, double delta_max) {
  std::cout << "x,series,y\n";
  switch (figure) {
    case 2:
      for (std::int64_t k : {5, 10, 20, 30, 50}) {
        emit_inverse_delta_series("k=" + std::to_string(k), k, 0.2);
      }
      return 0;
    case 3:
      for (double beta : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        emit_inverse_delta_series("beta=" + fmt_number(beta), 20, beta);
      }
      return 0;
    case 4:
      for (auto [k, beta] : std::vector<std::pair<std::int64_t, double>>{
               {15, 0.05}, {22, 0.1}, {35, 0.2}, {60, 0.4}}) {
        emit_inverse_delta_series(
            "k=" + std::to_string(k) + " beta=" + fmt_number(beta), k, beta);
      }
      return 0;
    case 5:
      for (std::int64_t k : {1, 2, 3, 4, 5}) {
        emit_inverse_delta_series("k=" + std::to_string(k), k, 0.025);
      }
      return 0;
    case 6:
      // Smallest epsilon meeting the delta budget, per k; class sizes
      // where even the large-epsilon limit exceeds the budget are skipped.
      for (double beta : {0.05, 0.1, 0.2}) {
        for (std::int64_t k = 10; k <= 100; k += 10) {
          std::optional<double> eps =
              skanon::solve_min_epsilon(k, beta, delta_max);
          if (!eps.has_value()) continue;
          std::cout << k << ",beta=" << fmt_number(beta) << ","
                    << fmt_number(*eps) << "\n";
        }
      }
      return 0;
    default:
      throw skanon::DomainError("unknown figure id " +
                                std::to_string(figure) +
                                "; expected 2, 3, 4, 5 or 6");
  }
}

json report_to_json(const skanon::PublishReport& report) {
  json out;
  out["k"] = report.k;
  out["beta"] = report.beta;
  out["epsilon"] = report.epsilon;
  out["epsilon1"] = report.epsilon1;
  out["delta"] = report.delta;
  out["seed"] = report.seed;
  out["input_rows"] = report.input_rows;
  out["sampled_rows"] = report.sampled_rows;
  out["published_rows"] = report.published_rows;
  out["suppressed_classes"] = report.suppressed_classes;
  out["scheme"] = report.scheme.levels;
  out["delta_argmax_n"] = report.delta_argmax_n;
  out["gamma"] = report.gamma;
  out["delta_scan_capped"] = report.delta_scan_capped;
  return out;
}

std::vector<skanon::RecodingScheme> parse_candidates(
    const std::string& text, std::size_t arity) {
  std::vector<skanon::RecodingScheme> candidates;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find(';', start);
    if (stop == std::string::npos) stop = text.size();
    candidates.push_back(skanon::parse_recoding_scheme(
        text.substr(start, stop - start), arity));
    start = stop + 1;
  }
  return candidates;
}

int run_anonymize(const std::string& input_path,
                  const std::string& hierarchy_path,
                  const std::string& levels, const std::string& candidates,
                  std::int64_t k, double beta, double epsilon,
                  std::optional<double> epsilon1, std::uint64_t seed,
                  const std::string& output_path,
                  const std::string& report_path) {
  skanon::Dataset dataset = skanon::load_dataset(input_path);
  skanon::HierarchySpec hierarchy = skanon::load_hierarchy(hierarchy_path);
  std::size_t arity = hierarchy.attributes.size();
  skanon::PublishResult result;
  if (!candidates.empty()) {
    if (!epsilon1.has_value()) {
      throw skanon::DomainError(
          "--candidates requires --epsilon1 (selection budget)");
    }
    result = skanon::esafe_publish(dataset, hierarchy,
                                   parse_candidates(candidates, arity),
                                   *epsilon1, k, beta, seed, epsilon);
  } else {
    if (levels.empty()) {
      throw skanon::DomainError(
          "provide either --levels or --candidates with --epsilon1");
    }
    if (epsilon1.has_value()) {
      throw skanon::DomainError(
          "--epsilon1 only applies to candidate selection; fixed --levels "
          "spends no selection budget");
    }
    result = skanon::strongly_safe_publish(
        dataset, skanon::parse_recoding_scheme(levels, arity), hierarchy, k,
        beta, seed, epsilon);
  }
  skanon::write_dataset(result.data, output_path);
  json report = report_to_json(result.report);
  skanon::write_text_file(report_path, report.dump(2) + "\n");
  print_json(report);
  return 0;
}

int run_verify(const std::string& kind, std::int64_t k, double beta,
               double epsilon, double epsilon1, double ratio,
               std::int64_t n_max, std::int64_t trials, std::uint64_t seed) {
  json out;
  out["check"] = kind;
  bool pass = false;
  if (kind == "oracle") {
    skanon::DeltaResult analytic = skanon::delta_strongly_safe(k, beta,
                                                               epsilon);
    double observed = skanon::worst_case_delta(k, beta, epsilon, n_max);
    out["params"] = {{"k", k}, {"beta", beta}, {"epsilon", epsilon},
                     {"n_max", n_max}};
    out["observed"] = observed;
    out["bound"] = analytic.delta;
    pass = observed <= analytic.delta + 1e-15;
    if (analytic.argmax_n <= n_max) {
      // The scan covered the analytic maximizer, so the two routes must
      // agree tightly, not merely order correctly.
      pass = pass && std::fabs(observed - analytic.delta) <=
                         1e-10 * std::max(analytic.delta, 1e-300);
    }
  } else if (kind == "amplification") {
    skanon::AmplificationCheck check =
        skanon::verify_amplification(k, beta, ratio, epsilon1, n_max);
    out["params"] = {{"k", k}, {"beta1", beta}, {"ratio", ratio},
                     {"epsilon1", epsilon1}, {"n_max", n_max}};
    out["observed"] = check.delta_observed;
    out["bound"] = check.delta_bound;
    out["epsilon2"] = check.epsilon2;
    pass = check.pass;
  } else if (kind == "postprocess") {
    skanon::PropertyCheck check = skanon::check_postprocessing(trials, seed);
    out["params"] = {{"trials", trials}, {"seed", seed}};
    out["observed"] = check.max_violation;
    out["bound"] = check.slack;
    pass = check.pass;
  } else if (kind == "convexity") {
    skanon::PropertyCheck check = skanon::check_convexity(trials, seed);
    out["params"] = {{"trials", trials}, {"seed", seed}};
    out["observed"] = check.max_violation;
    out["bound"] = check.slack;
    pass = check.pass;
  } else {
    throw skanon::DomainError(
        "unknown check '" + kind +
        "'; expected oracle, amplification, postprocess or convexity");
  }
  out["pass"] = pass;
  print_json(out);
  return pass ? 0 : 3;
}

int run_demo_compose(std::int64_t m_per_gender, std::int64_t threshold,
                     double beta, double eps2, std::int64_t trials,
                     std::uint64_t seed) {
  skanon::ComposeDemoParams params;
  params.m_per_gender = m_per_gender;
  params.threshold = threshold;
  params.beta = beta;
  params.eps2 = eps2;
  double p_without = skanon::compose_demo_estimate(params, false, trials,
                                                   seed);
  double p_with = skanon::compose_demo_estimate(params, true, trials, seed);
  auto tolerance = [trials](double p) {
    double variance = std::max(p * (1.0 - p), 1.0 / static_cast<double>(
                                                        trials));
    return std::min(5.0 * std::sqrt(variance / static_cast<double>(trials)),
                    1.0);
  };
  json out;
  out["m_per_gender"] = m_per_gender;
  out["threshold"] = threshold;
  out["beta"] = beta;
  out["eps2"] = eps2;
  out["noise_scale"] = skanon::noise_scale(params);
  out["trials"] = trials;
  out["seed"] = seed;
  out["p_without_target"] = p_without;
  out["p_with_target"] = p_with;
  out["tolerance_without_target"] = tolerance(p_without);
  out["tolerance_with_target"] = tolerance(p_with);
  if (m_per_gender <= 5000) {
    out["exact_without_target"] =
        skanon::compose_demo_event_probability(params, false);
    out["exact_with_target"] =
        skanon::compose_demo_event_probability(params, true);
  }
  if (tolerance(p_without) >= 0.05 || tolerance(p_with) >= 0.05) {
    out["note"] =
        "tolerances are wide at this trial count; increase --trials";
  }
  print_json(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampled k-anonymization with differential privacy bounds"};
  app.require_subcommand(1);

  std::int64_t k = 20;
  double beta = 0.1;
  double epsilon = 1.0;
  std::optional<double> epsilon1;
  double delta_max = 1e-6;
  std::uint64_t seed = 1;

  CLI::App* calc = app.add_subcommand(
      "calc-delta", "Smallest delta for (k, beta, epsilon)");
  calc->add_option("--k", k, "Anonymity threshold")->required();
  calc->add_option("--beta", beta, "Sampling rate")->required();
  calc->add_option("--epsilon", epsilon, "Privacy parameter")->required();
  calc->add_option("--epsilon1", epsilon1,
                   "Scheme-selection budget taken out of epsilon");

  double amp_epsilon1 = 0.0;
  double amp_delta1 = 0.0;
  double amp_beta1 = 1.0;
  double amp_beta2 = 1.0;
  CLI::App* amp = app.add_subcommand(
      "amplify", "Map a guarantee through a lower sampling rate");
  amp->add_option("--epsilon1", amp_epsilon1, "Guarantee at rate beta1")
      ->required();
  amp->add_option("--delta1", amp_delta1, "Delta at rate beta1")->required();
  amp->add_option("--beta1", amp_beta1, "Original sampling rate")
      ->required();
  amp->add_option("--beta2", amp_beta2, "Reduced sampling rate")->required();

  CLI::App* solve_eps = app.add_subcommand(
      "solve-min-epsilon", "Smallest epsilon with delta <= delta-max");
  solve_eps->add_option("--k", k, "Anonymity threshold")->required();
  solve_eps->add_option("--beta", beta, "Sampling rate")->required();
  solve_eps->add_option("--delta-max", delta_max, "Delta budget")
      ->required();

  CLI::App* solve_k = app.add_subcommand(
      "solve-min-k", "Smallest k with delta <= delta-max");
  solve_k->add_option("--beta", beta, "Sampling rate")->required();
  solve_k->add_option("--epsilon", epsilon, "Privacy parameter")->required();
  solve_k->add_option("--delta-max", delta_max, "Delta budget")->required();

  CLI::App* table = app.add_subcommand(
      "table2", "Reference delta grid at k=20 (CSV)");

  std::int64_t figure = 2;
  CLI::App* fig = app.add_subcommand(
      "figure-data", "Reference curve data (CSV: x,series,y)");
  fig->add_option("--figure", figure, "Figure id: 2, 3, 4, 5 or 6")
      ->required();
  fig->add_option("--delta-max", delta_max,
                  "Delta budget for figure 6 (default 1e-6)");

  std::string input_path;
  std::string hierarchy_path;
  std::string levels;
  std::string candidates;
  std::string output_path;
  std::string report_path;
  CLI::App* anon = app.add_subcommand(
      "anonymize", "Sample, generalize and suppress a CSV dataset");
  anon->add_option("--input", input_path, "Input CSV path")->required();
  anon->add_option("--hierarchy", hierarchy_path, "Hierarchy JSON path")
      ->required();
  anon->add_option("--levels", levels,
                   "Fixed per-attribute generalization levels, e.g. 1,0,2");
  anon->add_option("--candidates", candidates,
                   "Candidate level vectors separated by ';', e.g. "
                   "0,0;1,1;2,1");
  anon->add_option("--k", k, "Anonymity threshold")->required();
  anon->add_option("--beta", beta, "Sampling rate")->required();
  anon->add_option("--epsilon", epsilon, "Privacy parameter")->required();
  anon->add_option("--epsilon1", epsilon1,
                   "Selection budget (with --candidates)");
  anon->add_option("--seed", seed, "RNG seed");
  anon->add_option("--output", output_path, "Output CSV path")->required();
  anon->add_option("--report", report_path, "Report JSON path")->required();

  std::string verify_kind;
  double verify_epsilon1 = 1.0;
  double ratio = 0.5;
  std::int64_t n_max = 2000;
  std::int64_t sweep_trials = 500;
  CLI::App* verify = app.add_subcommand(
      "verify", "Independent checks of the analytic bounds");
  verify->add_option("kind", verify_kind,
                     "oracle | amplification | postprocess | convexity")
      ->required();
  verify->add_option("--k", k, "Anonymity threshold");
  verify->add_option("--beta", beta,
                     "Sampling rate (beta1 for amplification)");
  verify->add_option("--epsilon", epsilon, "Privacy parameter");
  verify->add_option("--epsilon1", verify_epsilon1,
                     "Guarantee fed to the amplification map");
  verify->add_option("--ratio", ratio, "beta2/beta1 for amplification");
  verify->add_option("--n-max", n_max, "Class-size scan limit");
  verify->add_option("--trials", sweep_trials,
                     "Random pairs for property sweeps");
  verify->add_option("--seed", seed, "RNG seed for property sweeps");

  std::int64_t demo_m = 1000;
  std::int64_t demo_threshold = 100;
  double demo_beta = 0.5;
  double demo_eps2 = 1.0;
  std::int64_t demo_trials = 100000;
  CLI::App* demo = app.add_subcommand(
      "demo-compose", "Monte Carlo composition demo");
  demo->add_option("--m-per-gender", demo_m, "Population per gender");
  demo->add_option("--threshold", demo_threshold,
                   "Release threshold for A1");
  demo->add_option("--beta", demo_beta, "Sampling rate");
  demo->add_option("--eps2", demo_eps2, "Noise budget for A2");
  demo->add_option("--trials", demo_trials, "Monte Carlo trials");
  demo->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (calc->parsed()) return run_calc_delta(k, beta, epsilon, epsilon1);
    if (amp->parsed()) {
      return run_amplify(amp_epsilon1, amp_delta1, amp_beta1, amp_beta2);
    }
    if (solve_eps->parsed()) return run_solve_min_epsilon(k, beta, delta_max);
    if (solve_k->parsed()) return run_solve_min_k(beta, epsilon, delta_max);
    if (table->parsed()) return run_table2();
    if (fig->parsed()) return run_figure_data(figure, delta_max);
    if (anon->parsed()) {
      return run_anonymize(input_path, hierarchy_path, levels, candidates, k,
                           beta, epsilon, epsilon1, seed, output_path,
                           report_path);
    }
    if (verify->parsed()) {
      return run_verify(verify_kind, k, beta, epsilon, verify_epsilon1,
                        ratio, n_max, sweep_trials, seed);
    }
    if (demo->parsed()) {
      return run_demo_compose(demo_m, demo_threshold, demo_beta, demo_eps2,
                              demo_trials, seed);
    }
  } catch (const skanon::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const skanon::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
