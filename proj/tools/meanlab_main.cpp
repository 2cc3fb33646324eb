// meanlab: generalized means, their limit-theorem parameters, seeded
// Monte Carlo verification runs, structural property suites and
// mean-based congressional apportionment.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meanlab/meanlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitVerificationFailed = 3;

meanlab::Generator parse_generator(const std::string& text) {
  if (text == "identity") return meanlab::generators::identity();
  if (text == "log") return meanlab::generators::log();
  if (text == "reciprocal") return meanlab::generators::reciprocal();
  if (text.rfind("power:", 0) == 0) {
    return meanlab::generators::power(std::stod(text.substr(6)));
  }
  throw std::invalid_argument(
      "unknown generator '" + text +
      "' (expected identity, log, reciprocal or power:<p>)");
}

meanlab::WeightFunction parse_weight(const std::string& text) {
  if (text == "one") return meanlab::weights::one();
  if (text == "identity") return meanlab::weights::identity();
  if (text == "reciprocal") return meanlab::weights::reciprocal();
  if (text.rfind("power:", 0) == 0) {
    return meanlab::weights::power(std::stod(text.substr(6)));
  }
  throw std::invalid_argument("unknown weight '" + text +
                              "' (expected one, identity, reciprocal or "
                              "power:<q>)");
}

struct KindFlags {
  std::string kind;
  std::string generator = "log";
  std::string weight = "one";
  double r = 1.0;
  double s = 0.0;
  double p = 1.0;
};

meanlab::MeanKind build_kind(const KindFlags& flags) {
  if (flags.kind == "quasi-arithmetic") {
    return meanlab::QuasiArithmeticKind{parse_generator(flags.generator)};
  }
  if (flags.kind == "bajraktarevic") {
    return meanlab::BajraktarevicKind{parse_generator(flags.generator),
                                      parse_weight(flags.weight)};
  }
  if (flags.kind == "gini") return meanlab::GiniKind{flags.r, flags.s};
  if (flags.kind == "holder") return meanlab::HolderKind{flags.p};
  if (flags.kind == "exp-cauchy") return meanlab::ExpCauchyKind{};
  if (flags.kind == "log-cauchy") return meanlab::LogCauchyKind{};
  if (flags.kind == "mult-cauchy") return meanlab::MultCauchyKind{};
  throw std::invalid_argument("unknown mean kind: " + flags.kind);
}

meanlab::DistributionSpec parse_distribution(const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) tokens.push_back(item);
  if (tokens.empty()) throw std::invalid_argument("empty distribution spec");
  auto need = [&](std::size_t count) {
    if (tokens.size() != count + 1) {
      throw std::invalid_argument("distribution '" + tokens[0] + "' needs " +
                                  std::to_string(count) + " parameter(s)");
    }
  };
  const std::string& family = tokens[0];
  if (family == "explog") {
    need(1);
    return meanlab::ExpLogDist{std::stod(tokens[1])};
  }
  if (family == "lognormal") {
    need(2);
    return meanlab::LogNormalDist{std::stod(tokens[1]), std::stod(tokens[2])};
  }
  if (family == "shifted-lognormal") {
    need(2);
    return meanlab::ShiftedLogNormalDist{std::stod(tokens[1]),
                                         std::stod(tokens[2])};
  }
  if (family == "uniform") {
    need(2);
    return meanlab::UniformDist{std::stod(tokens[1]), std::stod(tokens[2])};
  }
  if (family == "point-mass") {
    need(1);
    return meanlab::PointMassDist{std::stod(tokens[1])};
  }
  throw std::invalid_argument("unknown distribution family: " + family);
}

meanlab::Sample build_sample(const meanlab::MeanKind& kind,
                             std::vector<double> values) {
  using namespace meanlab;
  if (std::holds_alternative<QuasiArithmeticKind>(kind)) {
    return Sample(std::move(values),
                  std::get<QuasiArithmeticKind>(kind).generator.domain);
  }
  if (std::holds_alternative<BajraktarevicKind>(kind)) {
    return Sample(std::move(values),
                  std::get<BajraktarevicKind>(kind).generator.domain);
  }
  if (std::holds_alternative<LogCauchyKind>(kind) ||
      std::holds_alternative<MultCauchyKind>(kind)) {
    return Sample(std::move(values), DomainTag::greater_than_one);
  }
  return Sample(std::move(values), DomainTag::positive);
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open data file: " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(line, &pos);
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    if (pos != line.size()) {
      throw std::invalid_argument("data file line is not a single real: " + line);
    }
    values.push_back(v);
  }
  return values;
}

void apply_tolerance_overrides(meanlab::ToleranceConfig& config,
                               const std::string& text) {
  if (text.empty()) return;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("tolerance override must be key=value: " + pair);
    }
    config.set(pair.substr(0, eq), std::stod(pair.substr(eq + 1)));
  }
}

void print_17g(double v) {
  std::printf("%.17g\n", v);
}

// --------------------------------------------------------------------------
// verify helpers

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int run_verify_spec(const fs::path& spec_path, const fs::path& out_dir,
                    std::optional<std::uint64_t> seed_override,
                    const std::string& tolerance_overrides, int threads) {
  std::ifstream in(spec_path);
  if (!in) throw std::invalid_argument("cannot open spec: " + spec_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed experiment spec JSON: " +
                                std::string(e.what()));
  }
  meanlab::ExperimentSpec spec = meanlab::parse_experiment_spec(j);
  if (seed_override) spec.seed = *seed_override;
  apply_tolerance_overrides(spec.tolerances, tolerance_overrides);

  const meanlab::ExperimentReport report = run_experiment(spec, threads);

  fs::create_directories(out_dir);
  write_text_file(out_dir / (spec.name + "_report.json"),
                  report.to_json(true).dump(2) + "\n");
  std::ostringstream csv;
  report.write_replicates_csv(csv);
  write_text_file(out_dir / (spec.name + "_replicates.csv"), csv.str());

  std::printf("experiment %-32s mode=%-13s seed=%llu\n", spec.name.c_str(),
              meanlab::experiment_mode_name(spec.mode),
              static_cast<unsigned long long>(spec.seed));
  for (const auto& sr : report.per_n) {
    std::ostringstream line;
    line << "  n=" << sr.n;
    if (sr.mean_z) line << "  mean(Z)=" << *sr.mean_z;
    if (sr.var_z) line << "  var(Z)=" << *sr.var_z;
    if (sr.ks) line << "  KS=" << *sr.ks;
    if (sr.mean_abs_dev) line << "  mean|M-limit|=" << *sr.mean_abs_dev;
    if (sr.lnn_scaled_mean) line << "  ln(n)-scaled mean=" << *sr.lnn_scaled_mean;
    std::printf("%s  [%s]\n", line.str().c_str(), sr.pass ? "PASS" : "FAIL");
  }
  std::printf("%s: %s\n", spec.name.c_str(), report.pass ? "PASS" : "FAIL");
  return report.pass ? kExitOk : kExitVerificationFailed;
}

int run_bisym_suite(const fs::path& out_dir) {
  using namespace meanlab;
  json report;
  report["suite"] = "bisym";
  bool pass = true;

  report["counterexample_L"] = json::array();
  for (int n = 2; n <= 8; ++n) {
    const CounterexampleL c = reproduce_counterexample_L(n);
    json e;
    e["n"] = c.n;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["margin"] = c.margin;
    e["refutes"] = c.refutes;
    report["counterexample_L"].push_back(e);
    pass = pass && c.refutes;
    if (n == 2) {
      std::printf("  L reduction n=2: lhs=%.6f rhs=%.6f  [%s]\n", c.lhs, c.rhs,
                  c.refutes ? "PASS" : "FAIL");
    } else {
      std::printf("  L reduction n=%d: log-margin=%.6f  [%s]\n", n, c.margin,
                  c.refutes ? "PASS" : "FAIL");
    }
  }

  const BisymWitness witness = falsify_bisymmetry_G();
  const bool witness_ok = std::abs(witness.gap) > 1e-6;
  report["witness_G"] = {{"x", witness.q.x}, {"y", witness.q.y},
                         {"s", witness.q.s}, {"t", witness.q.t},
                         {"gap", witness.gap}};
  report["witness_G_pass"] = witness_ok;
  pass = pass && witness_ok;
  std::printf("  G witness: (%g, %g, %g, %g) gap=%.3e  [%s]\n", witness.q.x,
              witness.q.y, witness.q.s, witness.q.t, witness.gap,
              witness_ok ? "PASS" : "FAIL");

  // Quasi-arithmetic two-means must satisfy the bisymmetry equation.
  CounterRng rng(kDefaultSeed, 0xB15);
  double max_gap = 0.0;
  const int quadruples = 2000;
  for (int i = 0; i < quadruples; ++i) {
    const BisymQuadruple q{std::exp(2.0 * rng.next_unit() - 1.0),
                           std::exp(2.0 * rng.next_unit() - 1.0),
                           std::exp(2.0 * rng.next_unit() - 1.0),
                           std::exp(2.0 * rng.next_unit() - 1.0)};
    const double ga = std::abs(bisymmetry_gap(
        [](double a, double b) { return 0.5 * (a + b); }, q));
    const double gg = std::abs(bisymmetry_gap(
        [](double a, double b) { return std::sqrt(a * b); }, q));
    max_gap = std::max({max_gap, ga, gg});
  }
  const bool sweep_ok = max_gap <= 1e-10;
  report["quasi_arithmetic_sweep"] = {{"quadruples", quadruples},
                                      {"max_abs_gap", max_gap},
                                      {"pass", sweep_ok}};
  pass = pass && sweep_ok;
  std::printf("  quasi-arithmetic gap sweep: max=%.3e  [%s]\n", max_gap,
              sweep_ok ? "PASS" : "FAIL");

  report["pass"] = pass;
  fs::create_directories(out_dir);
  write_text_file(out_dir / "bisym_report.json", report.dump(2) + "\n");
  std::printf("bisym suite: %s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_axioms_suite(const fs::path& out_dir, std::uint64_t seed) {
  using namespace meanlab;
  json report;
  report["suite"] = "axioms";
  bool pass = true;

  const std::vector<std::pair<std::string, MeanKind>> kinds = {
      {"quasi_arithmetic[log]", QuasiArithmeticKind{generators::log()}},
      {"bajraktarevic[log,identity]",
       BajraktarevicKind{generators::log(), weights::identity()}},
      {"gini(2,1)", GiniKind{2.0, 1.0}},
      {"holder(-1)", HolderKind{-1.0}},
      {"exp_cauchy", ExpCauchyKind{}},
      {"log_cauchy", LogCauchyKind{}},
      {"mult_cauchy", MultCauchyKind{}},
  };
  const int tuples = 2000;
  report["mean_axioms"] = json::array();
  for (const auto& [label, kind] : kinds) {
    CounterRng rng(seed, std::hash<std::string>{}(label));
    int violations = 0;
    for (int i = 0; i < tuples; ++i) {
      const std::size_t n = 2 + rng.next_u64() % 9;
      std::vector<double> values(n);
      for (auto& v : values) v = 1.0 + 1e-3 + 9.0 * rng.next_unit();
      Sample xs(values, DomainTag::greater_than_one);
      if (!check_mean_axioms(kind, xs, rng).all()) ++violations;
    }
    report["mean_axioms"].push_back(
        {{"kind", label}, {"tuples", tuples}, {"violations", violations}});
    pass = pass && violations == 0;
    std::printf("  axioms %-28s violations=%d  [%s]\n", label.c_str(),
                violations, violations == 0 ? "PASS" : "FAIL");
  }

  {
    CounterRng rng(seed, 0xC4A1);
    int violations = 0;
    for (int i = 0; i < tuples; ++i) {
      const std::size_t n = 2 + rng.next_u64() % 9;
      std::vector<double> ys(n);
      for (auto& y : ys) y = 1e-3 + 20.0 * rng.next_unit();
      if (!mult_cauchy_hull_chain(ys).holds) ++violations;
    }
    report["hull_chain"] = {{"tuples", tuples}, {"violations", violations}};
    pass = pass && violations == 0;
    std::printf("  hull inequality chain: violations=%d  [%s]\n", violations,
                violations == 0 ? "PASS" : "FAIL");
  }

  {
    CounterRng rng(seed, 0xE27);
    int violations = 0;
    for (int i = 0; i < tuples; ++i) {
      const std::size_t n = 2 + rng.next_u64() % 19;
      std::vector<double> raw(n);
      double sum = 0.0;
      for (auto& v : raw) {
        v = 1e-6 + rng.next_unit();
        sum += v;
      }
      for (auto& v : raw) v /= sum;
      if (!entropy_bound(ProbVector(raw)).holds) ++violations;
    }
    report["entropy_bound"] = {{"tuples", tuples}, {"violations", violations}};
    pass = pass && violations == 0;
    std::printf("  entropy bound: violations=%d  [%s]\n", violations,
                violations == 0 ? "PASS" : "FAIL");
  }

  report["pass"] = pass;
  fs::create_directories(out_dir);
  write_text_file(out_dir / "axioms_report.json", report.dump(2) + "\n");
  std::printf("axioms suite: %s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitVerificationFailed;
}

meanlab::MeanKind parse_apportionment_method(const std::string& method,
                                             const std::string& generator,
                                             const std::string& weight) {
  if (method == "arithmetic") {
    return meanlab::QuasiArithmeticKind{meanlab::generators::identity()};
  }
  if (method == "geometric") {
    return meanlab::QuasiArithmeticKind{meanlab::generators::log()};
  }
  if (method == "harmonic") {
    return meanlab::QuasiArithmeticKind{meanlab::generators::reciprocal()};
  }
  if (method == "b2") return meanlab::ExpCauchyKind{};
  if (method.rfind("power:", 0) == 0) {
    return meanlab::QuasiArithmeticKind{
        meanlab::generators::power(std::stod(method.substr(6)))};
  }
  if (method == "bajraktarevic") {
    return meanlab::BajraktarevicKind{parse_generator(generator),
                                      parse_weight(weight)};
  }
  if (method == "quasi-arithmetic") {
    return meanlab::QuasiArithmeticKind{parse_generator(generator)};
  }
  throw std::invalid_argument(
      "unknown method '" + method +
      "' (arithmetic, geometric, harmonic, b2, power:<p>, quasi-arithmetic, "
      "bajraktarevic)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized means: evaluation, limit theory, Monte Carlo "
               "verification and apportionment"};
  app.require_subcommand(1);

  // mean ------------------------------------------------------------------
  KindFlags mean_flags;
  std::vector<double> mean_values;
  std::string mean_data_file;
  auto* cmd_mean = app.add_subcommand("mean", "evaluate a mean of a sample");
  cmd_mean->add_option("--kind", mean_flags.kind, "mean kind")->required();
  cmd_mean->add_option("--generator", mean_flags.generator,
                       "generator for quasi-arithmetic/bajraktarevic");
  cmd_mean->add_option("--weight", mean_flags.weight,
                       "weight for bajraktarevic");
  cmd_mean->add_option("--r", mean_flags.r, "Gini r");
  cmd_mean->add_option("--s", mean_flags.s, "Gini s");
  cmd_mean->add_option("--p", mean_flags.p, "Holder exponent");
  cmd_mean->add_option("--data", mean_data_file,
                       "file with one value per line");
  cmd_mean->add_option("values", mean_values, "inline sample values");

  // theory ----------------------------------------------------------------
  KindFlags theory_flags;
  std::string theory_dist;
  std::string theory_mode = "clt";
  auto* cmd_theory =
      app.add_subcommand("theory", "print limit-theorem parameters");
  cmd_theory->add_option("--kind", theory_flags.kind, "mean kind")->required();
  cmd_theory->add_option("--generator", theory_flags.generator, "generator");
  cmd_theory->add_option("--weight", theory_flags.weight, "weight");
  cmd_theory->add_option("--r", theory_flags.r, "Gini r");
  cmd_theory->add_option("--s", theory_flags.s, "Gini s");
  cmd_theory->add_option("--p", theory_flags.p, "Holder exponent");
  cmd_theory->add_option("--dist", theory_dist, "distribution, e.g. explog:2")
      ->required();
  cmd_theory->add_option("--mode", theory_mode,
                         "slln | clt | mult-constant | mult-clt");

  // verify ----------------------------------------------------------------
  std::string verify_spec_file;
  std::string verify_suite;
  std::string verify_out = "meanlab_out";
  std::string verify_tolerances;
  std::uint64_t verify_seed = 0;
  bool verify_seed_set = false;
  int verify_threads = static_cast<int>(std::thread::hardware_concurrency());
  auto* cmd_verify = app.add_subcommand(
      "verify", "run a JSON experiment spec or a built-in property suite");
  cmd_verify->add_option("spec", verify_spec_file, "experiment spec JSON");
  cmd_verify->add_option("--suite", verify_suite, "bisym | axioms");
  cmd_verify->add_option("--out", verify_out, "output directory");
  cmd_verify
      ->add_option("--seed", verify_seed, "seed override (default 0xB41A)")
      ->each([&](const std::string&) { verify_seed_set = true; });
  cmd_verify->add_option("--threads", verify_threads, "worker thread count");
  cmd_verify->add_option("--tolerance", verify_tolerances,
                         "overrides key=value[,key=value...]");

  // apportion ---------------------------------------------------------------
  std::string census_file;
  std::string apportion_method = "geometric";
  std::string apportion_generator = "log";
  std::string apportion_weight = "one";
  std::string apportion_mode = "one-shot";
  std::string apportion_out = "meanlab_out";
  std::size_t house_size = 435;
  auto* cmd_apportion =
      app.add_subcommand("apportion", "apportion house seats from a census");
  cmd_apportion->add_option("--census", census_file, "census CSV")->required();
  cmd_apportion->add_option("--house", house_size, "house size (default 435)");
  cmd_apportion->add_option("--method", apportion_method, "priority method");
  cmd_apportion->add_option("--generator", apportion_generator,
                            "generator for custom methods");
  cmd_apportion->add_option("--weight", apportion_weight,
                            "weight for bajraktarevic method");
  cmd_apportion->add_option("--mode", apportion_mode, "one-shot | iterative");
  cmd_apportion->add_option("--out", apportion_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  try {
    if (cmd_mean->parsed()) {
      std::vector<double> values = mean_values;
      if (!mean_data_file.empty()) {
        auto file_values = read_values_file(mean_data_file);
        values.insert(values.end(), file_values.begin(), file_values.end());
      }
      const meanlab::MeanKind kind = build_kind(mean_flags);
      const double m =
          evaluate_mean(kind, build_sample(kind, std::move(values)));
      print_17g(m);
      return kExitOk;
    }

    if (cmd_theory->parsed()) {
      const meanlab::MeanKind kind = build_kind(theory_flags);
      const meanlab::DistributionSpec dist = parse_distribution(theory_dist);
      meanlab::ExperimentMode mode = meanlab::ExperimentMode::clt;
      if (theory_mode == "slln") {
        mode = meanlab::ExperimentMode::slln;
      } else if (theory_mode == "mult-constant") {
        mode = meanlab::ExperimentMode::mult_constant;
      } else if (theory_mode == "mult-clt") {
        mode = meanlab::ExperimentMode::mult_clt;
      } else if (theory_mode != "clt") {
        throw std::invalid_argument("unknown theory mode: " + theory_mode);
      }
      const meanlab::TheoryResult theory = theory_for(kind, dist, mode);
      json out = meanlab::clt_params_to_json(theory.params);
      out["mean_kind"] = mean_kind_name(kind);
      out["distribution"] = distribution_name(dist);
      out["moment_provenance"] = theory.moment_provenance;
      std::printf("%s\n", out.dump(2).c_str());
      return kExitOk;
    }

    if (cmd_verify->parsed()) {
      const bool has_spec = !verify_spec_file.empty();
      const bool has_suite = !verify_suite.empty();
      if (has_spec == has_suite) {
        throw std::invalid_argument(
            "verify needs exactly one of: a spec file, or --suite");
      }
      if (has_suite) {
        if (verify_suite == "bisym") return run_bisym_suite(verify_out);
        if (verify_suite == "axioms") {
          return run_axioms_suite(
              verify_out, verify_seed_set ? verify_seed : meanlab::kDefaultSeed);
        }
        throw std::invalid_argument("unknown suite: " + verify_suite);
      }
      return run_verify_spec(
          verify_spec_file, verify_out,
          verify_seed_set ? std::optional<std::uint64_t>(verify_seed)
                          : std::nullopt,
          verify_tolerances, verify_threads);
    }

    if (cmd_apportion->parsed()) {
      std::ifstream in(census_file);
      if (!in) {
        throw std::invalid_argument("cannot open census: " + census_file);
      }
      const std::vector<meanlab::StateRecord> states =
          meanlab::read_census_csv(in);
      meanlab::ApportionmentConfig config;
      config.house_size = house_size;
      config.method = parse_apportionment_method(
          apportion_method, apportion_generator, apportion_weight);
      if (apportion_mode == "one-shot") {
        config.mode = meanlab::AllocationMode::one_shot;
      } else if (apportion_mode == "iterative") {
        config.mode = meanlab::AllocationMode::iterative;
      } else {
        throw std::invalid_argument("unknown mode: " + apportion_mode);
      }
      const meanlab::SeatAllocation alloc = apportion(states, config);
      fs::create_directories(apportion_out);
      {
        std::ofstream csv(fs::path(apportion_out) / "allocation.csv",
                          std::ios::binary);
        meanlab::write_allocation_csv(csv, states, alloc.seats);
      }
      write_text_file(
          fs::path(apportion_out) / "audit.json",
          meanlab::allocation_audit_json(states, alloc, config).dump(2) + "\n");
      std::size_t total = 0;
      for (std::size_t i = 0; i < states.size(); ++i) {
        std::printf("%-24s %12llu %4zu\n", states[i].name.c_str(),
                    static_cast<unsigned long long>(states[i].population),
                    alloc.seats[i]);
        total += alloc.seats[i];
      }
      std::printf("total seats: %zu (%s, %s)\n", total,
                  apportion_method.c_str(), alloc.mode_label.c_str());
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSpecError;
  }
  return kExitOk;
}
