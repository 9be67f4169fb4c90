#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dft/error.hpp"
#include "dft/mc.hpp"
#include "dft/model.hpp"
#include "dft/prob.hpp"
#include "dft/report.hpp"
#include "dft/rewrite.hpp"

namespace dft {

namespace {

/// Errors raised while reading input files; reported with exit 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DftModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

RuleSet load_rules(const std::optional<std::string>& path) {
  RuleSet rules = default_rules();
  if (!path) return rules;
  try {
    for (RewriteRule& r : parse_rules(read_file(*path))) {
      rules.rules.push_back(std::move(r));
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(*path + ": " + e.what());
  }
  return rules;
}

void write_output(const std::string& text, const std::string& path,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

struct ProbArgs {
  std::string model;
  std::vector<double> times;
  std::string method = "analytic";
  std::string mode = "exact";
  double tol = QuadratureConfig{}.tol;
  std::size_t samples = McConfig{}.samples;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double confidence = McConfig{}.confidence;
  std::string format = "json";
  std::string out_path;
};

struct BenchArgs {
  std::vector<double> times;
  std::uint64_t seed = 0;
  std::size_t samples = McConfig{}.samples;
  unsigned workers = 1;
  std::vector<std::string> rates;
  std::string format = "table";
};

DftModel with_rates(DftModel m, const std::vector<std::string>& rates) {
  for (const std::string& spec : rates) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw InputError("expected NAME=RATE, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    double rate = 0.0;
    try {
      rate = std::stod(spec.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("bad rate in '" + spec + "'");
    }
    if (!(rate > 0.0)) throw InputError("rate must be positive in '" + spec + "'");
    try {
      m.set_law(name, Distribution::Exponential(rate));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  return m;
}

AnalysisReport run_prob(const ProbArgs& a) {
  const DftModel m = load_model(a.model);
  const bool analytic = a.method != "mc";
  const bool mc = a.method != "analytic";
  EvalOptions opts;
  opts.quad.tol = a.tol;
  opts.mode = a.mode == "paper" ? IntersectionMode::kPaper
                                : IntersectionMode::kExact;
  opts.workers = a.workers;

  AnalysisReport report;
  report.model_digest = model_digest(m);
  report.seed = a.seed;
  for (double t : a.times) {
    ReportRow row;
    row.t = t;
    row.mode = analytic ? to_string(opts.mode) : "mc";
    if (analytic) {
      const ProbResult r = dft_event_prob(m, t, opts);
      row.analytic = r.value;
      row.quad_error = r.quad_error;
      row.terms = r.terms;
    }
    report.rows.push_back(row);
  }
  if (mc) {
    std::vector<double> grid = a.times;
    std::sort(grid.begin(), grid.end());
    const auto curve = simulate_curve(
        m, grid, {a.samples, a.seed, a.workers, a.confidence});
    for (ReportRow& row : report.rows) {
      const auto it = std::find_if(curve.begin(), curve.end(),
                                   [&](const auto& p) { return p.first == row.t; });
      row.mc = it->second.p_hat;
      row.mc_half_width = it->second.half_width;
    }
  }
  return report;
}

void print_bench_table(const AnalysisReport& r, std::ostream& out) {
  out << "cardiac assist system, model " << r.model_digest << ", seed "
      << r.seed << "\n";
  out << "       t        exact        paper   exact-paper           mc"
         "     halfwidth  terms\n";
  for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2) {
    const ReportRow& ex = r.rows[i];
    const ReportRow& pa = r.rows[i + 1];
    char line[160];
    std::snprintf(line, sizeof line,
                  "%8g %12.9f %12.9f %13.6e %12.9f %13.6e %6zu\n", ex.t,
                  *ex.analytic, *pa.analytic, *ex.analytic - *pa.analytic,
                  *ex.mc, *ex.mc_half_width, *ex.terms);
    out << line;
  }
}

AnalysisReport run_bench(const BenchArgs& a) {
  const DftModel m = with_rates(cas_model(), a.rates);
  AnalysisReport report;
  report.model_digest = model_digest(m);
  report.seed = a.seed;
  std::vector<double> grid = a.times;
  std::sort(grid.begin(), grid.end());
  const auto curve =
      simulate_curve(m, grid, {a.samples, a.seed, a.workers, 0.99});
  for (double t : a.times) {
    const auto it = std::find_if(curve.begin(), curve.end(),
                                 [&](const auto& p) { return p.first == t; });
    for (IntersectionMode mode :
         {IntersectionMode::kExact, IntersectionMode::kPaper}) {
      EvalOptions opts;
      opts.mode = mode;
      opts.workers = a.workers;
      const ProbResult r = dft_event_prob(m, t, opts);
      ReportRow row;
      row.t = t;
      row.analytic = r.value;
      row.quad_error = r.quad_error;
      row.mc = it->second.p_hat;
      row.mc_half_width = it->second.half_width;
      row.mode = to_string(mode);
      row.terms = r.terms;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string describe(const Assignment& a) {
  std::string out;
  for (const auto& [name, t] : a.times()) {
    if (!out.empty()) out += ", ";
    out += name + "=" + to_string(t);
  }
  return out;
}

bool run_verify(const std::string& path, const std::optional<std::string>& rules_path,
                std::size_t trials, std::uint64_t seed, std::ostream& out) {
  const DftModel m = load_model(path);
  const RuleSet rules = load_rules(rules_path);
  const Expr top = m.top_expr();
  SimplifyStats stats;
  const Expr simplified = simplify(top, rules, m.rewrite_context(), &stats);
  bool ok = true;
  for (const auto& [name, count] : stats.fired) {
    const EquivVerdict v = check_rule(*rules.find(name), trials, seed);
    out << "rule " << name << " (fired " << count << "): "
        << (v.equivalent ? "ok" : "COUNTEREXAMPLE " + describe(*v.counterexample))
        << "\n";
    ok = ok && v.equivalent;
  }
  const EquivVerdict v =
      check_equiv(top, simplified, trials, seed, m.sampling_constraints());
  out << "top vs simplified, " << v.trials << " trials: ";
  if (v.equivalent) {
    out << "equivalent\n";
  } else {
    out << "COUNTEREXAMPLE " << describe(*v.counterexample) << " gives "
        << to_string(v.lhs_value) << " vs " << to_string(v.rhs_value) << "\n";
  }
  return ok && v.equivalent;
}

int exit_code_for(const std::exception_ptr& p, std::ostream& err) {
  try {
    std::rethrow_exception(p);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UnmatchedPattern& e) {
    err << "error: " << e.what() << "; try --method mc\n";
    return kExitUnmatched;
  } catch (const TermExplosion& e) {
    err << "error: " << e.what() << "; try --method mc\n";
    return kExitUnmatched;
  } catch (const QuadratureFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuadrature;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Dynamic fault tree algebra: simplification and failure "
               "probabilities",
               "dftool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::vector<std::string> methods{"analytic", "mc", "both"};
  const std::vector<std::string> modes{"exact", "paper"};
  const std::vector<std::string> formats{"json", "csv"};

  ProbArgs prob;
  CLI::App* prob_cmd = app.add_subcommand("prob", "Failure probability by time t");
  prob_cmd->add_option("--model", prob.model, "Model file")->required();
  prob_cmd->add_option("--time", prob.times, "Time points, comma separated")
      ->required()
      ->delimiter(',');
  prob_cmd->add_option("--method", prob.method)->check(CLI::IsMember(methods));
  prob_cmd->add_option("--mode", prob.mode, "Intersection evaluation")
      ->check(CLI::IsMember(modes));
  prob_cmd->add_option("--tol", prob.tol, "Quadrature tolerance")
      ->check(CLI::PositiveNumber);
  prob_cmd->add_option("--samples", prob.samples)->check(CLI::PositiveNumber);
  prob_cmd->add_option("--seed", prob.seed);
  prob_cmd->add_option("--workers", prob.workers)->check(CLI::Range(1u, 256u));
  prob_cmd->add_option("--confidence", prob.confidence)
      ->check(CLI::Range(0.5, 0.999999));
  prob_cmd->add_option("--format", prob.format)->check(CLI::IsMember(formats));
  prob_cmd->add_option("--out", prob.out_path, "Write here instead of stdout");

  std::string simplify_model;
  std::optional<std::string> rules_path;
  bool desugar = false;
  CLI::App* simplify_cmd =
      app.add_subcommand("simplify", "Print the simplified top event");
  simplify_cmd->add_option("--model", simplify_model)->required();
  simplify_cmd->add_option("--rules", rules_path,
                           "Extra rules, appended to the defaults");
  simplify_cmd->add_flag("--desugar", desugar, "Read hsp as and, fdep as or");

  ProbArgs sim;
  sim.method = "mc";
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Monte-Carlo failure probability");
  sim_cmd->add_option("--model", sim.model)->required();
  sim_cmd->add_option("--time", sim.times)->required()->delimiter(',');
  sim_cmd->add_option("--samples", sim.samples)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--workers", sim.workers)->check(CLI::Range(1u, 256u));
  sim_cmd->add_option("--confidence", sim.confidence)
      ->check(CLI::Range(0.5, 0.999999));
  sim_cmd->add_option("--format", sim.format)->check(CLI::IsMember(formats));
  sim_cmd->add_option("--out", sim.out_path);

  std::string verify_model;
  std::optional<std::string> verify_rules;
  std::size_t trials = 1000;
  std::uint64_t verify_seed = 0;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Check the rewrites used on a model by random sampling");
  verify_cmd->add_option("--model", verify_model)->required();
  verify_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed);
  verify_cmd->add_option("--rules", verify_rules);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench-cas", "Cardiac assist system in both modes against Monte Carlo");
  bench_cmd->add_option("--time", bench.times)->required()->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--samples", bench.samples)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench.workers)->check(CLI::Range(1u, 256u));
  bench_cmd->add_option("--rate", bench.rates, "Override a rate, NAME=R");
  bench_cmd->add_option("--format", bench.format)
      ->check(CLI::IsMember({"table", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*prob_cmd || *sim_cmd) {
      const ProbArgs& a = *prob_cmd ? prob : sim;
      const AnalysisReport r = run_prob(a);
      write_output(emit_report(r, a.format == "csv" ? ReportFormat::kCsv
                                                    : ReportFormat::kJson),
                   a.out_path, out);
    } else if (*simplify_cmd) {
      const DftModel m = load_model(simplify_model);
      const RuleSet rules = load_rules(rules_path);
      out << to_source(simplify(m.top_expr(desugar), rules, m.rewrite_context()), m)
          << "\n";
    } else if (*verify_cmd) {
      if (!run_verify(verify_model, verify_rules, trials, verify_seed, out)) {
        return kExitFailure;
      }
    } else if (*bench_cmd) {
      const AnalysisReport r = run_bench(bench);
      if (bench.format == "json") {
        out << emit_report(r, ReportFormat::kJson);
      } else {
        print_bench_table(r, out);
      }
    }
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  return kExitOk;
}

}  // namespace dft
