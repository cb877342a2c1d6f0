#pragma once

// Command-line front end. run() parses arguments, dispatches to one
// subcommand and writes either a human summary or a JSON run record.
// Exit codes: 0 ok, 1 input error, 2 hypothesis or chain failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhcub/hhcub.hpp"
#include "hhcub/report.hpp"

namespace hhcub::cli {

struct Globals {
  bool json = false;
  bool strict = false;
  double tol = 1e-10;
  int max_depth = 40;
  int quad_nodes = 16;
};

struct Common {
  std::string expression;
  std::string corpus_path;
  std::vector<double> rect = {0.0, 1.0, 0.0, 1.0};
  std::optional<double> lambda;
  std::string lambda_named;
  std::vector<double> lambda_grid;
  std::vector<double> q_grid;
};

struct Outcome {
  RunRecord record;
  std::string human;
  int exit_code = 0;
};

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline QuadConfig quad_config(const Globals& g) {
  QuadConfig cfg;
  // Line integrals run 100x tighter than the reporting tolerance.
  cfg.abs_tol = std::max(1e-14, g.tol / 100.0);
  cfg.rel_tol = cfg.abs_tol;
  cfg.max_depth = g.max_depth;
  cfg.nodes_per_panel = g.quad_nodes;
  cfg.validate();
  return cfg;
}

inline Rectangle rectangle(const Common& c) {
  if (c.rect.size() != 4) {
    throw Error(ErrorCode::InvalidConfig, "-r expects a,b,c,d");
  }
  return validate_rectangle(c.rect[0], c.rect[1], c.rect[2], c.rect[3]);
}

inline std::optional<RuleParams> single_lambda(const Common& c) {
  if (!c.lambda_named.empty()) {
    if (c.lambda_named == "simpson") return RuleParams::simpson();
    if (c.lambda_named == "midpoint") return RuleParams::midpoint();
    if (c.lambda_named == "trapezoid") return RuleParams::trapezoid();
    throw Error(ErrorCode::InvalidLambda, "unknown named lambda '" + c.lambda_named + "'");
  }
  if (c.lambda) return RuleParams(*c.lambda);
  return std::nullopt;
}

inline std::vector<RuleParams> lambda_list(const Common& c, std::vector<double> fallback) {
  if (!c.lambda_grid.empty()) fallback = c.lambda_grid;
  if (auto p = single_lambda(c)) return {*p};
  std::vector<RuleParams> out;
  for (double l : fallback) out.emplace_back(l);
  return out;
}

inline std::vector<double> lambda_values(const std::vector<RuleParams>& ps) {
  std::vector<double> out;
  for (const RuleParams& p : ps) out.push_back(p.lambda());
  return out;
}

inline std::vector<double> q_list(const Common& c) {
  if (!c.q_grid.empty()) return c.q_grid;
  return {std::begin(kDefaultQGrid), std::end(kDefaultQGrid)};
}

inline RunInputs base_inputs(const Globals& g, const Common& c) {
  RunInputs in;
  if (!c.expression.empty()) in.expression = c.expression;
  if (c.rect.size() == 4) std::copy(c.rect.begin(), c.rect.end(), in.rect.begin());
  in.tol = g.tol;
  in.max_depth = g.max_depth;
  in.quad_nodes = g.quad_nodes;
  in.strict = g.strict;
  return in;
}

inline Json witness_json(const ConvexityReport& rep) {
  if (!rep.witness) return nullptr;
  const ConvexityWitness& w = *rep.witness;
  Json j = Json::object();
  j["axis"] = to_string(w.axis);
  j["fixed_coord"] = w.fixed_coord;
  j["t1"] = w.t1;
  j["t2"] = w.t2;
  j["violation"] = w.violation;
  return j;
}

inline std::string witness_text(const ConvexityReport& rep) {
  if (!rep.witness) return "";
  const ConvexityWitness& w = *rep.witness;
  const std::string fixed = w.axis == Axis::X ? "y" : "x";
  return " (along " + std::string(to_string(w.axis)) + " at " + fixed + "=" +
         fmt6(w.fixed_coord) + ", t1=" + fmt6(w.t1) + ", t2=" + fmt6(w.t2) +
         ", excess " + fmt6(w.violation) + ")";
}

inline Json bound_json(const BoundReport& b) {
  Json j = Json::object();
  j["theorem"] = to_string(b.theorem);
  j["lambda"] = b.lambda;
  j["p"] = detail::optional_json(b.p);
  j["q"] = detail::optional_json(b.q);
  j["value"] = number_or_null(b.value);
  return j;
}

inline Json certified_json(const CertifiedResult& res, const char* status) {
  Json j = Json::object();
  j["status"] = status;
  j["integral"] = number_or_null(res.integral);
  j["total_certificate"] = number_or_null(res.total_certificate);
  j["line_err_est"] = number_or_null(res.line_err_est);
  j["panels"] = res.panels;
  j["max_depth_reached"] = res.max_depth_reached;
  j["hypothesis_checked"] = res.hypothesis_checked;
  return j;
}

// ---------------------------------------------------------------------------

struct IntegrateOpts {
  bool certify = false;
  bool oracle = false;
  int panel_depth = AdaptiveLimits{}.max_depth;
};

inline Outcome cmd_integrate(const Globals& g, const Common& c, const IntegrateOpts& o) {
  const FunctionModel f = FunctionModel::from_text(c.expression);
  const Rectangle r = rectangle(c);
  const RuleParams params = single_lambda(c).value_or(RuleParams::simpson());
  const std::vector<double> qs = q_list(c);
  const QuadConfig cfg = quad_config(g);

  Outcome out;
  RunRecord& rec = out.record;
  rec.command = "integrate";
  rec.inputs = base_inputs(g, c);
  rec.inputs.lambda = params.lambda();
  rec.inputs.q_grid = qs;
  rec.inputs.certify = o.certify;
  rec.inputs.oracle = o.oracle;
  if (o.certify) rec.inputs.panel_depth = o.panel_depth;

  const auto t0 = std::chrono::steady_clock::now();
  const RuleBreakdown rb = rule_breakdown(f, r, params, cfg);
  const BoundReport best = best_bound(f, r, params, qs);
  const bool convex = is_abs_mixed_power_convex(f.fxy, r, best.q.value_or(1.0)).passed;

  Json& j = rec.outputs;
  j["average"] = number_or_null(rb.estimate());
  j["integral"] = number_or_null(rb.estimate() * r.area());
  j["line_err_est"] = number_or_null(rb.line_err_est);
  Json bj = bound_json(best);
  bj["hypothesis"] = convex ? "OK" : "UNSOUND-HYPOTHESIS";
  j["bound"] = bj;

  std::ostringstream h;
  h << "average   " << fmt6(rb.estimate()) << "\n";
  h << "integral  " << fmt6(rb.estimate() * r.area()) << "\n";
  h << "bound     " << fmt6(best.value) << " (" << to_string(best.theorem)
    << (convex ? "" : ", UNSOUND-HYPOTHESIS") << ")\n";

  bool hypothesis_ok = convex;
  if (o.oracle) {
    const Estimate truth = integrate_2d(f, r, cfg);
    Json t = Json::object();
    t["integral"] = number_or_null(truth.value);
    t["err_est"] = number_or_null(truth.err_est);
    t["actual_error"] = number_or_null(std::abs(truth.value - rb.estimate() * r.area()));
    j["oracle"] = t;
    h << "oracle    " << fmt6(truth.value) << " (error "
      << fmt6(std::abs(truth.value - rb.estimate() * r.area())) << ")\n";
  }
  if (o.certify) {
    AdaptiveLimits limits;
    limits.max_depth = o.panel_depth;
    bool exhausted = false;
    CertifiedResult res;
    try {
      res = integrate_certified(f, r, params, g.tol, limits, cfg);
    } catch (const BudgetExhausted& e) {
      res = e.partial();
      exhausted = true;
    }
    j["certified"] = certified_json(res, exhausted ? "budget_exhausted" : "ok");
    h << "certified " << fmt6(res.integral) << " +- " << fmt6(res.total_certificate) << " ("
      << res.panels << " panels" << (exhausted ? ", budget exhausted" : "")
      << (res.hypothesis_checked ? "" : ", UNSOUND-HYPOTHESIS") << ")\n";
    hypothesis_ok = hypothesis_ok && res.hypothesis_checked && !exhausted;
  }
  rec.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.human = h.str();
  if (g.strict && !hypothesis_ok) out.exit_code = 2;
  return out;
}

inline std::vector<std::string> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read corpus '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "corpus '" + path + "' is empty");
  return out;
}

inline Outcome cmd_verify_identity(const Globals& g, const Common& c) {
  std::vector<std::string> exprs;
  if (!c.corpus_path.empty()) {
    exprs = read_corpus(c.corpus_path);
  } else if (!c.expression.empty()) {
    exprs = {c.expression};
  } else {
    throw Error(ErrorCode::InvalidConfig, "verify-identity needs -f or --corpus");
  }
  const Rectangle r = rectangle(c);
  const std::vector<RuleParams> lambdas = lambda_list(c, {0.0, 1.0 / 3.0, 0.5, 1.0});
  const QuadConfig cfg = quad_config(g);

  Outcome out;
  RunRecord& rec = out.record;
  rec.command = "verify-identity";
  rec.inputs = base_inputs(g, c);
  if (!c.corpus_path.empty()) rec.inputs.corpus = exprs;
  rec.inputs.lambda_grid = lambda_values(lambdas);

  const auto t0 = std::chrono::steady_clock::now();
  Json rows = Json::array();
  double worst = 0.0;
  std::ostringstream h;
  for (const std::string& text : exprs) {
    const FunctionModel f = FunctionModel::from_text(text);
    for (const RuleParams& p : lambdas) {
      const IdentityCheck ic = identity_check(f, r, p, cfg);
      Json row = Json::object();
      row["expression"] = text;
      row["lambda"] = p.lambda();
      row["lhs"] = number_or_null(ic.lhs);
      row["rhs"] = number_or_null(ic.rhs);
      row["residual"] = number_or_null(ic.residual);
      row["err_est"] = number_or_null(ic.err_est);
      rows.push_back(row);
      worst = std::max(worst, std::abs(ic.residual));
      h << text << "  lambda=" << fmt6(p.lambda()) << "  residual " << fmt6(ic.residual) << "\n";
    }
  }
  rec.outputs["rows"] = rows;
  rec.outputs["max_abs_residual"] = number_or_null(worst);
  rec.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  h << "max |residual| " << fmt6(worst) << "\n";
  out.human = h.str();
  return out;
}

inline Outcome cmd_bounds(const Globals& g, const Common& c) {
  const FunctionModel f = FunctionModel::from_text(c.expression);
  const Rectangle r = rectangle(c);
  const std::vector<RuleParams> lambdas = lambda_list(c, {1.0 / 3.0});
  const std::vector<double> qs = q_list(c);
  const QuadConfig cfg = quad_config(g);

  Outcome out;
  RunRecord& rec = out.record;
  rec.command = "bounds";
  rec.inputs = base_inputs(g, c);
  rec.inputs.lambda_grid = lambda_values(lambdas);
  rec.inputs.q_grid = qs;

  const auto t0 = std::chrono::steady_clock::now();
  const Estimate truth = integrate_2d(f, r, cfg);
  const double average = truth.value / r.area();

  // Convexity verdict per exponent, q = 1 first.
  std::vector<double> exps = {1.0};
  for (double q : qs) {
    if (q != 1.0) exps.push_back(q);
  }
  Json conv = Json::array();
  auto convex_for = [&](double q) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == q) return conv[i]["passed"].get<bool>();
    }
    return false;
  };
  for (double q : exps) {
    if (q < 1.0) throw Error(ErrorCode::InvalidExponents, "q must be >= 1");
    const ConvexityReport rep = is_abs_mixed_power_convex(f.fxy, r, q);
    Json cj = Json::object();
    cj["q"] = q;
    cj["passed"] = rep.passed;
    cj["witness"] = witness_json(rep);
    conv.push_back(cj);
  }

  Json rows = Json::array();
  Json estimates = Json::array();
  Json best = Json::array();
  bool unsound = false;
  std::ostringstream h;
  h << "theorem     lambda    q         bound         actual        ratio\n";
  for (const RuleParams& p : lambdas) {
    const Estimate qe = approximate_integral_estimate(f, r, p, cfg);
    const double actual = std::abs(average - qe.value);
    Json ej = Json::object();
    ej["lambda"] = p.lambda();
    ej["estimate"] = number_or_null(qe.value);
    ej["average"] = number_or_null(average);
    ej["actual_error"] = number_or_null(actual);
    ej["quadrature_err_est"] = number_or_null(qe.err_est + truth.err_est / r.area());
    estimates.push_back(ej);

    auto add = [&](const BoundReport& b, double q_conv) {
      const bool ok = convex_for(q_conv);
      unsound = unsound || !ok;
      Json row = bound_json(b);
      row["actual_error"] = number_or_null(actual);
      row["ratio"] = b.value > 0.0 ? number_or_null(actual / b.value) : Json(nullptr);
      row["hypothesis"] = ok ? "OK" : "UNSOUND-HYPOTHESIS";
      rows.push_back(row);
      char line[160];
      std::snprintf(line, sizeof line, "%-11s %-9s %-9s %-13s %-13s %s%s\n",
                    to_string(b.theorem), fmt6(b.lambda).c_str(),
                    b.q ? fmt6(*b.q).c_str() : "-", fmt6(b.value).c_str(),
                    fmt6(actual).c_str(), b.value > 0.0 ? fmt6(actual / b.value).c_str() : "-",
                    ok ? "" : "  UNSOUND-HYPOTHESIS");
      h << line;
    };
    add(bound_t5(corner_data(f.fxy, r), r, p), 1.0);
    for (double q : qs) {
      const CornerData cq = corner_data(f.fxy, r, q);
      add(bound_t7(cq, r, p, q), q);
      if (q > 1.0) {
        add(bound_t6(cq, r, p, HolderExponents::from_q(q)), q);
        add(bound_t6_relaxed(cq, r, p, q), q);
      }
    }
    best.push_back(bound_json(best_bound(f, r, p, qs)));
  }
  rec.outputs["estimates"] = estimates;
  rec.outputs["rows"] = rows;
  rec.outputs["best"] = best;
  rec.outputs["convexity"] = conv;
  rec.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.human = h.str();
  if (g.strict && unsound) out.exit_code = 2;
  return out;
}

inline Outcome cmd_hadamard(const Globals& g, const Common& c) {
  const FunctionModel f = FunctionModel::from_text(c.expression);
  const Rectangle r = rectangle(c);
  const QuadConfig cfg = quad_config(g);

  Outcome out;
  RunRecord& rec = out.record;
  rec.command = "hadamard";
  rec.inputs = base_inputs(g, c);

  const auto t0 = std::chrono::steady_clock::now();
  const ConvexityReport conv = is_coordinate_convex(f.f, r);
  const HadamardChain ch = hadamard_chain(f, r, cfg);
  const double scale = std::max({std::abs(ch.v1), std::abs(ch.v5), 1.0});
  const bool monotone = ch.is_monotone(10.0 * ch.err_est + 1e-14 * scale);
  const bool chain_failed = conv.passed && !monotone;

  Json cj = Json::object();
  cj["passed"] = conv.passed;
  cj["witness"] = witness_json(conv);
  rec.outputs["convexity"] = cj;
  rec.outputs["chain"] = Json::array({number_or_null(ch.v1), number_or_null(ch.v2),
                                      number_or_null(ch.v3), number_or_null(ch.v4),
                                      number_or_null(ch.v5)});
  rec.outputs["err_est"] = number_or_null(ch.err_est);
  rec.outputs["monotone"] = monotone;
  rec.outputs["status"] = chain_failed ? "FAIL" : "PASS";
  rec.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream h;
  h << "convexity " << (conv.passed ? "PASS" : "FAIL") << witness_text(conv) << "\n";
  h << fmt6(ch.v1) << ", " << fmt6(ch.v2) << ", " << fmt6(ch.v3) << ", " << fmt6(ch.v4) << ", "
    << fmt6(ch.v5) << ", " << (chain_failed ? "FAIL" : "PASS") << "\n";
  out.human = h.str();
  if (chain_failed || (g.strict && !conv.passed)) out.exit_code = 2;
  return out;
}

struct ConvexityOpts {
  std::string target = "f";
  double q = 1.0;
  int grid_n = kDefaultConvexityGrid;
};

inline Outcome cmd_convexity(const Globals& g, const Common& c, const ConvexityOpts& o) {
  const FunctionModel f = FunctionModel::from_text(c.expression);
  const Rectangle r = rectangle(c);

  Outcome out;
  RunRecord& rec = out.record;
  rec.command = "convexity-check";
  rec.inputs = base_inputs(g, c);
  rec.inputs.target = o.target;
  rec.inputs.q = o.q;
  rec.inputs.grid_n = o.grid_n;

  const auto t0 = std::chrono::steady_clock::now();
  ConvexityReport rep;
  if (o.target == "f") {
    rep = is_coordinate_convex(f.f, r, o.grid_n);
  } else {
    if (!(o.q >= 1.0)) throw Error(ErrorCode::InvalidExponents, "q must be >= 1");
    rep = is_abs_mixed_power_convex(f.fxy, r, o.q, o.grid_n);
  }
  rec.outputs["passed"] = rep.passed;
  rec.outputs["grid_n"] = rep.grid_n;
  rec.outputs["witness"] = witness_json(rep);
  rec.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.human = std::string(rep.passed ? "PASS" : "FAIL") + witness_text(rep) + "\n";
  if (g.strict && !rep.passed) out.exit_code = 2;
  return out;
}

// ---------------------------------------------------------------------------

inline void add_common(CLI::App* sub, Common& c, bool grids) {
  sub->add_option("-f,--function", c.expression, "expression in x and y");
  sub->add_option("-r,--rect", c.rect, "rectangle a,b,c,d")->delimiter(',')->expected(4);
  auto* l = sub->add_option("--lambda", c.lambda, "rule parameter in [0, 1]");
  auto* n = sub->add_option("--lambda-named", c.lambda_named, "simpson, midpoint or trapezoid")
                ->check(CLI::IsMember({"simpson", "midpoint", "trapezoid"}));
  l->excludes(n);
  if (grids) {
    auto* lg = sub->add_option("--lambda-grid", c.lambda_grid, "comma-separated lambdas")
                   ->delimiter(',');
    lg->excludes(l)->excludes(n);
    sub->add_option("--q-grid", c.q_grid, "comma-separated exponents q >= 1")->delimiter(',');
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lambda-family cubature on rectangles with a-priori error bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "emit a JSON run record");
  app.add_flag("--strict", g.strict, "exit 2 when a convexity hypothesis fails");
  app.add_option("--tol", g.tol, "reporting tolerance, certificate target under --certify")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-depth", g.max_depth, "quadrature bisection depth")
      ->check(CLI::Range(1, 60));
  app.add_option("--quad-nodes", g.quad_nodes, "Gauss-Legendre nodes per panel")
      ->check(CLI::IsMember({8, 16, 32}));
  app.set_version_flag("--version", kVersion);

  Common c;
  IntegrateOpts io;
  ConvexityOpts co;

  auto* integrate = app.add_subcommand("integrate", "rule estimate with its best bound");
  add_common(integrate, c, false);
  integrate->add_option("--q-grid", c.q_grid, "comma-separated exponents q >= 1")->delimiter(',');
  integrate->add_flag("--certify", io.certify, "adaptive integration with a certificate");
  integrate->add_flag("--oracle", io.oracle, "also report the quadrature reference value");
  integrate->add_option("--panel-depth", io.panel_depth, "refinement depth under --certify")
      ->check(CLI::Range(0, 30));

  auto* verify = app.add_subcommand("verify-identity", "residual of the kernel identity");
  add_common(verify, c, true);
  verify->add_option("--corpus", c.corpus_path, "file with one expression per line");

  auto* bounds = app.add_subcommand("bounds", "all bounds against the actual error");
  add_common(bounds, c, true);

  auto* hadamard = app.add_subcommand("hadamard", "the five-term Hadamard chain");
  add_common(hadamard, c, false);

  auto* convexity = app.add_subcommand("convexity-check", "co-ordinated convexity on a grid");
  add_common(convexity, c, false);
  convexity->add_option("--target", co.target, "f or abs-fxy")
      ->check(CLI::IsMember({"f", "abs-fxy"}));
  convexity->add_option("--q", co.q, "exponent for abs-fxy");
  convexity->add_option("--grid-n", co.grid_n, "lattice size per axis")
      ->check(CLI::Range(3, 4097));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c.expression.empty() && !(verify->parsed() && !c.corpus_path.empty())) {
      throw Error(ErrorCode::InvalidConfig, "an expression is required (-f)");
    }
    Outcome res;
    if (integrate->parsed()) {
      res = cmd_integrate(g, c, io);
    } else if (verify->parsed()) {
      res = cmd_verify_identity(g, c);
    } else if (bounds->parsed()) {
      res = cmd_bounds(g, c);
    } else if (hadamard->parsed()) {
      res = cmd_hadamard(g, c);
    } else {
      res = cmd_convexity(g, c, co);
    }
    if (g.json) {
      out << serialize(res.record);
    } else {
      out << res.human;
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"hhcub"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hhcub::cli
