#include "piclab/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "piclab/boolean.hpp"
#include "piclab/bounds.hpp"
#include "piclab/dist.hpp"
#include "piclab/errors.hpp"
#include "piclab/io.hpp"
#include "piclab/oracle.hpp"
#include "piclab/pic.hpp"
#include "piclab/privacy.hpp"

namespace piclab::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string against;      // verify: prior decompose report
  std::string csv_curves;   // privacy: side CSV of region curves
  std::string base = "2";
  double tol = 1e-9;
  std::uint64_t seed = 0x5EED;
  bool all = false;
  bool csv_input = false;
  bool csv_header = false;
  std::size_t M = 0;
  double theta = -1.0;      // bound: override theta; defaults to I(X;Y)
  double t = -1.0;          // privacy: funnel threshold
  std::size_t n = 0;        // boolean: block length
  double delta = 0.1;       // boolean: crossover
  bool literal_min_clamp = false;
  bool transpose = false;   // privacy: input arrives as (X, S) instead of (S, X)
};

double base_value(const std::string& b) {
  if (b == "2") return dist::kBits;
  if (b == "e") return dist::kNats;
  if (b == "10") return 10.0;
  fail(ErrorKind::ParseError, "base must be one of {2, e, 10}");
}

io::LabeledJoint load_input(const RunConfig& cfg) {
  require(!cfg.input.empty(), ErrorKind::ParseError, "--input is required");
  if (cfg.csv_input) {
    auto samples = io::load_csv_samples(cfg.input, cfg.csv_header);
    auto emp = dist::empirical_joint(samples);
    return io::LabeledJoint{std::move(emp.joint), std::move(emp.x_labels),
                            std::move(emp.y_labels)};
  }
  return io::load_joint(cfg.input);
}

void emit(const RunConfig& cfg, const json& report) {
  if (cfg.output.empty())
    std::cout << report.dump(2) << "\n";
  else
    io::write_json_file(cfg.output, report);
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

int cmd_decompose(const RunConfig& cfg) {
  const io::LabeledJoint in = load_input(cfg);
  const double base = base_value(cfg.base);
  pic::PicDecomposition dec = pic::decompose(in.joint, std::max(cfg.tol, 1e-9));

  json report{{"command", "decompose"},
              {"input", cfg.input},
              {"m", in.joint.rows()},
              {"n", in.joint.cols()},
              {"base", cfg.base},
              {"tol", cfg.tol},
              {"decomposition", io::decomposition_to_json(dec)},
              {"maximal_correlation", pic::maximal_correlation(dec)},
              {"chi_squared", dist::chi_squared(in.joint)},
              {"mutual_information", dist::mutual_information(in.joint, base)}};
  json jk = json::array();
  for (std::size_t k = 1; k <= dec.d; ++k) jk.push_back(pic::k_correlation(dec, k));
  report["k_correlation"] = std::move(jk);
  if (cfg.csv_input) {
    report["x_labels"] = in.x_labels;
    report["y_labels"] = in.y_labels;
  }
  emit(cfg, report);
  return 0;
}

int cmd_bound(const RunConfig& cfg) {
  const io::LabeledJoint in = load_input(cfg);
  const dist::JointPmf& j = in.joint;
  const double base = base_value(cfg.base);
  pic::PicDecomposition dec = pic::decompose(j);
  const double rho = pic::maximal_correlation(dec);
  const double mi = dist::mutual_information(j, base);
  const double theta = cfg.theta >= 0.0 ? cfg.theta : mi;
  std::vector<double> p_sorted = sorted_desc(j.p_x());

  json report{{"command", "bound"},
              {"input", cfg.input},
              {"exact", json{{"map_error", bounds::map_error(j)},
                             {"advantage", bounds::advantage(j)}}},
              {"mutual_information", mi},
              {"maximal_correlation", rho},
              {"theta", theta},
              {"base", cfg.base}};

  json all_bounds = json::array();
  all_bounds.push_back(io::bound_to_json(bounds::pic_fano_bound(j.p_x(), dec.lambdas)));
  if (cfg.all) {
    all_bounds.push_back(io::bound_to_json(bounds::maxcorr_bound(j.p_x(), rho)));
    const double uniform_dev =
        std::abs(*std::max_element(p_sorted.begin(), p_sorted.end()) -
                 1.0 / static_cast<double>(j.rows()));
    if (uniform_dev <= 1e-9)
      all_bounds.push_back(
          io::bound_to_json(bounds::chi2_uniform_bound(j.rows(), dist::chi_squared(j))));
    bounds::ErrorBound fano;
    fano.kind = bounds::BoundKind::FanoMI;
    fano.value = bounds::fano_mi_error_rate(j.p_x(), theta, base);
    fano.params.push_back({"theta", theta});
    fano.vacuous = fano.value == 0.0;
    all_bounds.push_back(io::bound_to_json(fano));
    if (j.rows() == 2) {
      bounds::ErrorBound wits;
      wits.kind = bounds::BoundKind::Witsenhausen;
      wits.value = boolean::witsenhausen_bound_minb(p_sorted[1], rho);
      wits.params.push_back({"a", p_sorted[1]});
      wits.params.push_back({"rho", rho});
      all_bounds.push_back(io::bound_to_json(wits));
    }
  }
  report["bounds"] = std::move(all_bounds);

  if (cfg.M >= 2) {
    json fb{{"M", cfg.M},
            {"pem_rho", io::bound_to_json(bounds::pem_bound_rho(j.p_x(), cfg.M, rho))},
            {"pem_mi", io::bound_to_json(
                           bounds::pem_bound_mi(j.p_x(), cfg.M, theta, base, false))},
            {"adv_m", bounds::adv_m_bound(rho, cfg.M)}};
    if (cfg.literal_min_clamp)
      fb["pem_mi_literal"] =
          io::bound_to_json(bounds::pem_bound_mi(j.p_x(), cfg.M, theta, base, true));
    const double maps = std::pow(static_cast<double>(cfg.M), static_cast<double>(j.rows()));
    if (j.rows() <= 10 && maps <= 1e7)
      fb["pem_exact"] = bounds::pem_exact(j, cfg.M);
    else
      fb["pem_exact_skipped"] = "map count exceeds 1e7; rely on the bounds";
    report["function_bounds"] = std::move(fb);
  }
  emit(cfg, report);
  return 0;
}

int cmd_boolean(const RunConfig& cfg) {
  json report{{"command", "boolean"}};
  if (!cfg.input.empty()) {
    const json in = io::read_json_file(cfg.input);
    if (in.is_object() && in.contains("w")) {
      const auto& rows = in.at("w");
      linalg::Matrix w(rows.size(), rows.at(0).size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows.at(i).size(); ++k)
          w(i, k) = rows.at(i).at(k).get<double>();
      boolean::ParityMembership mem = boolean::parity_membership_check(dist::Channel(std::move(w)));
      json jm{{"is_member", mem.is_member}};
      if (mem.is_member) {
        jm["p_z"] = mem.p_z;
        jm["c"] = mem.c;
      }
      report["membership"] = std::move(jm);
    } else {
      const std::vector<double> p_z = io::noise_pmf_from_json(in);
      boolean::NoiseSpectrum s = boolean::noise_spectrum(p_z);
      report["spectrum"] = json{{"n", s.n}, {"c", s.c}, {"p_z", s.p_z}};
      report["pics"] = boolean::additive_channel_pics(p_z, true);
    }
  }
  if (cfg.n >= 1) {
    boolean::ConjectureReport rep = boolean::conjecture_search(cfg.n, cfg.delta);
    report["conjecture"] = json{{"n", cfg.n},
                                {"delta", cfg.delta},
                                {"max_mi", rep.max_mi},
                                {"argmax_mask", rep.argmax_mask},
                                {"bound_1_minus_hb", rep.bound},
                                {"violations", rep.violations}};
  }
  require(report.size() > 1, ErrorKind::ParseError,
          "boolean needs --input (noise pmf or channel) or --n");
  emit(cfg, report);
  return 0;
}

int cmd_privacy(const RunConfig& cfg) {
  io::LabeledJoint in = load_input(cfg);
  const dist::JointPmf j_sx = cfg.transpose ? in.joint.transposed() : in.joint;
  privacy::PrivacyAnalysis a = privacy::analyze(j_sx, cfg.tol, 64, cfg.seed);
  json report = io::privacy_to_json(a);
  report["command"] = "privacy";
  report["input"] = cfg.input;
  report["seed"] = cfg.seed;
  if (cfg.t >= 0.0)
    report["funnel_estimate"] =
        json{{"t", cfg.t}, {"value", privacy::funnel_estimate(j_sx, cfg.t, 16, cfg.seed)}};
  if (!cfg.csv_curves.empty()) {
    std::ostringstream csv;
    csv << "t,lower,upper,estimate\n";
    for (std::size_t i = 0; i < a.region.t.size(); ++i) {
      const double est = privacy::funnel_estimate(j_sx, a.region.t[i], 4, cfg.seed);
      csv << a.region.t[i] << "," << a.region.lower[i] << "," << a.region.upper[i] << ","
          << est << "\n";
    }
    io::write_text_file(cfg.csv_curves, csv.str());
    report["csv_curves"] = cfg.csv_curves;
  }
  emit(cfg, report);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const io::LabeledJoint in = load_input(cfg);
  const dist::JointPmf& j = in.joint;
  pic::PicDecomposition dec = pic::decompose(j);
  const double lambda1 = dec.d > 0 ? dec.lambdas[0] : 0.0;

  json checks = json::array();
  bool all_pass = true;
  auto add_check = [&](const std::string& name, double main, double orc, double tol,
                       std::size_t evals) {
    const bool pass = std::abs(main - orc) <= tol;
    all_pass = all_pass && pass;
    checks.push_back(json{{"name", name},
                          {"main", main},
                          {"oracle", orc},
                          {"tolerance", tol},
                          {"evaluations", evals},
                          {"pass", pass}});
  };

  oracle::OracleResult ace = oracle::maxcorr_by_ace(j, 2000, cfg.seed);
  add_check("maxcorr_ace", lambda1, ace.value * ace.value, 1e-6, ace.evaluations);
  if (dec.d >= 1) {
    oracle::OracleResult var = oracle::variational_pic(j, 1, 6, cfg.seed);
    add_check("lambda1_variational", lambda1, var.value, 1e-6, var.evaluations);
  }
  oracle::OracleResult pe = oracle::pe_exhaustive(j);
  add_check("map_error_exhaustive", bounds::map_error(j), pe.value, 1e-12, pe.evaluations);

  const double rho = std::sqrt(lambda1);
  for (double a : {0.25, 0.5}) {
    oracle::OracleResult zw = oracle::z_bilinear_max(j, a, a, 200, cfg.seed);
    const double cap = boolean::z_upper(a, a, rho);
    const bool pass = zw.value <= cap + 1e-9;
    all_pass = all_pass && pass;
    checks.push_back(json{{"name", "z_upper_witness"},
                          {"a", a},
                          {"oracle", zw.value},
                          {"bound", cap},
                          {"pass", pass}});
  }

  if (!cfg.against.empty()) {
    const json prior = io::read_json_file(cfg.against);
    require(prior.contains("decomposition"), ErrorKind::ParseError,
            "--against file is not a decompose report");
    const std::string before = prior.at("decomposition").at("lambdas").dump();
    const std::string now = json(dec.lambdas).dump();
    const bool pass = before == now;
    all_pass = all_pass && pass;
    checks.push_back(json{{"name", "roundtrip_lambdas"}, {"pass", pass}});
  }

  json report{{"command", "verify"},
              {"input", cfg.input},
              {"seed", cfg.seed},
              {"checks", std::move(checks)},
              {"pass", all_pass}};
  emit(cfg, report);
  return all_pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Principal inertia component decompositions, estimation-error "
               "bounds, Boolean channel spectra, and privacy-funnel analysis"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", cfg.input, "input file (distribution JSON)");
    if (needs_input) in->required();
    sub->add_option("--output", cfg.output, "write the JSON report here (default stdout)");
    sub->add_option("--base", cfg.base, "log base: 2, e, or 10")
        ->check(CLI::IsMember({"2", "e", "10"}));
    sub->add_option("--tol", cfg.tol, "numerical tolerance")
        ->check(CLI::Range(1e-300, 1e-3));
    sub->add_option("--seed", cfg.seed, "seed for randomized routines");
    sub->add_flag("--csv", cfg.csv_input, "input is a CSV sample file (columns x,y)");
    sub->add_flag("--header", cfg.csv_header, "CSV input carries a header line");
  };

  auto* dec = app.add_subcommand("decompose", "principal inertia decomposition");
  add_common(dec, true);
  auto* bnd = app.add_subcommand("bound", "estimation-error bounds");
  add_common(bnd, true);
  bnd->add_flag("--all", cfg.all, "emit every applicable bound");
  bnd->add_option("--M", cfg.M, "also bound estimation of surjective M-ary functions");
  bnd->add_option("--theta", cfg.theta, "dependence budget (default: I(X;Y))");
  bnd->add_flag("--literal-min-clamp", cfg.literal_min_clamp,
                "also emit the literal min{H(U)-theta,0} variant of the MI bound");
  auto* boo = app.add_subcommand("boolean", "binary additive-noise channel analysis");
  add_common(boo, false);
  boo->add_option("--n", cfg.n, "block length for the conjecture search (<= 4)");
  boo->add_option("--delta", cfg.delta, "BSC crossover for the conjecture search");
  auto* prv = app.add_subcommand("privacy", "privacy-funnel analysis (S rows, X columns)");
  add_common(prv, true);
  prv->add_option("--t", cfg.t, "also estimate the funnel value at this threshold");
  prv->add_option("--csv-curves", cfg.csv_curves, "write region curves as CSV here");
  prv->add_flag("--transpose", cfg.transpose, "input table is (X, S); transpose to (S, X)");
  auto* ver = app.add_subcommand("verify", "cross-check against brute-force oracles");
  add_common(ver, true);
  ver->add_option("--against", cfg.against, "decompose report to compare byte-for-byte");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dec->parsed()) return cmd_decompose(cfg);
    if (bnd->parsed()) return cmd_bound(cfg);
    if (boo->parsed()) return cmd_boolean(cfg);
    if (prv->parsed()) return cmd_privacy(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace piclab::cli
