// heistsp: β-numbers, multiscale curves and lemma checks in the Heisenberg group.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heistsp/beta.hpp"
#include "heistsp/builder.hpp"
#include "heistsp/io.hpp"
#include "heistsp/multiscale.hpp"
#include "heistsp/verify.hpp"

using nlohmann::ordered_json;
using namespace heistsp;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string out;
  std::string curve_out;
  std::string ball;
  double r = 0.0;  // 0: command default
  double c1 = 16.0;
  double eps0 = 0.05;
  double A = 4.0;
  double density = 0.0;
  std::optional<int> k_min;
  std::optional<int> k_max;
  std::uint64_t seed = 42;
  int threads = 0;
  int budget = 200;
  int certify = 0;
  bool curve = false;
  std::uint64_t samples = 100000;
  bool tamper = false;
};

BetaBudget budget_of(const Options& o) {
  if (o.budget < 1) throw UsageError("--budget must be >= 1");
  BetaBudget b;
  b.nm_iterations = o.budget;
  return b;
}

BuilderConfig builder_of(const Options& o) {
  BuilderConfig cfg;
  cfg.C1 = o.c1;
  cfg.eps0 = o.eps0;
  cfg.r = o.r == 0.0 ? 3.0 : o.r;
  cfg.A = o.A;
  cfg.k_min = o.k_min;
  cfg.k_max = o.k_max;
  cfg.beta_budget = budget_of(o);
  cfg.threads = o.threads;
  if (!(cfg.r > 2.0 && cfg.r < 4.0)) throw UsageError("--r must lie in (2, 4) for curve construction");
  if (!(cfg.eps0 > 0.0 && cfg.eps0 < 1.0)) throw UsageError("--eps0 must lie in (0, 1)");
  if (!(cfg.C1 > 1.0)) throw UsageError("--c1 must be > 1");
  return cfg;
}

Ball parse_ball(const std::string& spec) {
  std::istringstream in(spec);
  double v[4];
  for (double& x : v) {
    if (!(in >> x)) throw UsageError("--ball expects \"cx cy cz radius\"");
  }
  std::string rest;
  if (in >> rest) throw UsageError("--ball expects exactly 4 numbers");
  try {
    return Ball(HeisPoint(v[0], v[1], v[2]), v[3]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--ball: ") + e.what());
  }
}

ordered_json point_json(const HeisPoint& p) { return ordered_json::array({p.x(), p.y(), p.z()}); }

ordered_json provenance(const std::string& command, const Options& o, const ordered_json& config) {
  ordered_json j;
  j["tool"] = "heistsp";
  j["command"] = command;
  if (!o.input.empty()) j["input"] = o.input;
  j["seed"] = o.seed;
  j["threads"] = o.threads;
  j["config"] = config;
  return j;
}

ordered_json builder_json(const BuilderConfig& c) {
  ordered_json j;
  j["C1"] = c.C1;
  j["eps0"] = c.eps0;
  j["r"] = c.r;
  j["p"] = c.p();
  j["A"] = c.A;
  j["D1"] = c.D1;
  j["k_min"] = c.k_min ? ordered_json(*c.k_min) : ordered_json(nullptr);
  j["k_max"] = c.k_max ? ordered_json(*c.k_max) : ordered_json(nullptr);
  j["beta_nm_iterations"] = c.beta_budget.nm_iterations;
  return j;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw io::FileError("cannot write file: " + o.out);
  f << text;
}

std::vector<HeisPoint> load(const Options& o) {
  if (o.input.empty()) throw UsageError("an input file is required");
  return io::load_point_set(o.input).points;
}

int cmd_beta(const Options& o) {
  const auto E = load(o);
  if (o.ball.empty()) throw UsageError("--ball is required");
  const Ball B = parse_ball(o.ball);
  BetaBudget budget = budget_of(o);
  budget.certify_resolution = o.certify;
  const BetaResult r = beta_heis(E, B, budget);

  ordered_json cfg;
  cfg["ball"] = {B.center().x(), B.center().y(), B.center().z(), B.radius()};
  cfg["beta_nm_iterations"] = budget.nm_iterations;
  cfg["certify_resolution"] = budget.certify_resolution;
  ordered_json j;
  j["provenance"] = provenance("beta", o, cfg);
  j["beta"] = r.beta;
  j["line"] = {{"theta", r.line.theta()}, {"offset", r.line.offset()}, {"height", r.line.height()}};
  j["achieving_point"] = point_json(r.achieving_point);
  j["certified_gap"] = r.certified_gap;
  j["contained"] = r.contained;
  j["vacuous"] = r.vacuous;
  emit(o, j.dump(2) + "\n");
  return kOk;
}

int cmd_build(const Options& o) {
  const auto E = load(o);
  const BuilderConfig cfg = builder_of(o);
  const TheoremAResult t = theorem_a_check(E, cfg);
  const BuildResult& b = t.build;

  ordered_json j;
  j["provenance"] = provenance("build", o, builder_json(cfg));
  j["k_min"] = b.k_min;
  j["k_max"] = b.k_max;
  j["length"] = t.length;
  j["diam"] = t.diam;
  j["carleson"] = t.carleson;
  j["ratio"] = t.ratio;
  j["p4_checks"] = b.p4_checks;
  j["p4_repairs"] = b.p4_repairs;
  j["p5_worst_ratio"] = b.p5_worst_ratio;
  j["scale_lengths"] = b.scale_lengths;
  ordered_json verts = ordered_json::array();
  for (const HeisPoint& p : b.curve.vertices()) verts.push_back(point_json(p));
  j["curve"] = verts;
  ordered_json ledger = ordered_json::array();
  for (const LedgerEntry& e : b.ledger) {
    ledger.push_back({{"k", e.k},
                      {"point", point_json(b.points[e.point_index])},
                      {"ball_center", point_json(e.ball_center)},
                      {"ball_radius", e.ball_radius},
                      {"case", to_string(e.kind)},
                      {"beta", e.beta},
                      {"cost", e.cost}});
  }
  j["ledger"] = ledger;
  emit(o, j.dump(2) + "\n");

  if (!o.curve_out.empty()) {
    io::PointSetFile f{"curve", {{"length", io::format_double(t.length)}}, b.curve.vertices()};
    std::ofstream cf(o.curve_out, std::ios::binary);
    if (!cf) throw io::FileError("cannot write file: " + o.curve_out);
    cf << io::to_text(f);
  }
  return kOk;
}

int cmd_carleson(const Options& o) {
  const auto E = load(o);
  const double r = o.r == 0.0 ? 4.0 : o.r;
  if (!(r > 0.0 && r <= 8.0)) throw UsageError("--r must lie in (0, 8] for carleson");
  if (!(o.A >= 1.0)) throw UsageError("--A must be >= 1");
  const CarlesonOptions copt{budget_of(o), o.threads};

  CarlesonReport rep;
  std::optional<TheoremBResult> curve_result;
  if (o.curve) {
    if (!(o.density > 0.0)) throw UsageError("--density > 0 is required with --curve");
    TheoremBOptions topt;
    topt.A = o.A;
    topt.seed = o.seed;
    topt.carleson = copt;
    curve_result = theorem_b_check(PolygonalCurve(E), o.density, r, topt);
    rep = curve_result->report;
  } else {
    if (E.empty()) throw UsageError("input has no points");
    const double diam = diameter(E);
    const int k_min = o.k_min.value_or(coarsest_scale(diam));
    const int k_max = o.k_max.value_or(o.density > 0.0 ? std::max(k_min, static_cast<int>(std::ceil(std::log2(o.density))))
                                                       : k_min + 6);
    rep = carleson_sum(build_nets(E, k_min, k_max), r, o.A, copt);
  }

  std::string out;
  out += "# tool=heistsp command=carleson\n";
  if (!o.input.empty()) out += "# input=" + o.input + "\n";
  out += "# r=" + io::format_double(r) + " A=" + io::format_double(o.A) +
         " density=" + io::format_double(o.density) + " curve=" + (o.curve ? "1" : "0") +
         " seed=" + std::to_string(o.seed) + " beta_nm_iterations=" + std::to_string(o.budget) + "\n";
  out += "k,P.x,P.y,P.z,beta,contribution\n";
  for (const CarlesonTerm& t : rep.terms) {
    out += std::to_string(t.k) + "," + io::format_double(t.P.x()) + "," + io::format_double(t.P.y()) + "," +
           io::format_double(t.P.z()) + "," + io::format_double(t.beta) + "," + io::format_double(t.contribution) +
           "\n";
  }
  out += "# total=" + io::format_double(rep.total) + "\n";
  if (curve_result) {
    out += "# length=" + io::format_double(curve_result->length) + "\n";
    out += "# ratio=" + io::format_double(curve_result->ratio) + "\n";
  }
  emit(o, out);
  return kOk;
}

int cmd_theorem_a(const Options& o) {
  const auto E = load(o);
  const BuilderConfig cfg = builder_of(o);
  const TheoremAResult t = theorem_a_check(E, cfg);
  ordered_json j;
  j["provenance"] = provenance("theorem-a", o, builder_json(cfg));
  j["length"] = t.length;
  j["diam"] = t.diam;
  j["carleson"] = t.carleson;
  j["bound"] = t.bound;
  j["ratio"] = t.ratio;
  emit(o, j.dump(2) + "\n");
  return kOk;
}

int cmd_theorem_b(const Options& o) {
  const auto E = load(o);
  const double r = o.r == 0.0 ? 4.0 : o.r;
  if (!(r > 0.0 && r <= 8.0)) throw UsageError("--r must lie in (0, 8]");
  if (!(o.density > 0.0)) throw UsageError("--density > 0 is required");
  TheoremBOptions topt;
  topt.A = o.A;
  topt.seed = o.seed;
  topt.carleson = {budget_of(o), o.threads};
  const TheoremBResult t = theorem_b_check(PolygonalCurve(E), o.density, r, topt);
  ordered_json cfg;
  cfg["r"] = r;
  cfg["A"] = o.A;
  cfg["density"] = o.density;
  cfg["beta_nm_iterations"] = o.budget;
  ordered_json j;
  j["provenance"] = provenance("theorem-b", o, cfg);
  j["sum"] = t.sum;
  j["length"] = t.length;
  j["ratio"] = t.ratio;
  j["samples"] = t.samples;
  emit(o, j.dump(2) + "\n");
  return kOk;
}

int cmd_verify(const Options& o) {
  verify::SuiteOptions s;
  s.seed = o.seed;
  s.exact_samples = o.samples;
  s.threads = o.threads;
  s.tamper = o.tamper;
  const verify::SuiteReport rep = verify::run_suite(s);

  ordered_json cfg;
  cfg["exact_samples"] = s.exact_samples;
  cfg["crosscheck_samples"] = s.crosscheck_samples;
  cfg["curvature_samples"] = s.curvature_samples;
  cfg["large_r2_samples"] = s.large_r2_samples;
  cfg["flat_exit_instances"] = s.flat_exit_instances;
  cfg["sharp_turn_instances"] = s.sharp_turn_instances;
  cfg["angle_instances"] = s.angle_instances;
  cfg["tolerance"] = s.tolerance;
  cfg["tamper"] = s.tamper;
  ordered_json j;
  j["provenance"] = provenance("verify", o, cfg);
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json e;
    e["id"] = c.id;
    e["kind"] = verify::to_string(c.kind);
    e["samples"] = c.samples;
    e["violations"] = c.violations;
    e["worst_margin"] = c.worst_margin;
    e["seed"] = c.seed;
    ordered_json emp = ordered_json::object();
    for (const auto& [k, v] : c.empirical) emp[k] = v;
    e["empirical"] = emp;
    e["passed"] = c.passed();
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["exact_ok"] = rep.exact_ok();
  j["all_hard_ok"] = rep.all_hard_ok();

  const std::string text = j.dump(2) + "\n";
  if (!o.out.empty()) {
    emit(o, text);
    for (const auto& c : rep.checks) {
      std::printf("%-22s %-9s samples=%llu violations=%llu %s\n", c.id.c_str(), verify::to_string(c.kind),
                  static_cast<unsigned long long>(c.samples), static_cast<unsigned long long>(c.violations),
                  c.passed() ? "ok" : (c.hard() ? "FAIL" : "recorded"));
    }
  } else {
    std::cout << text;
  }
  return rep.exact_ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-group β-numbers and multiscale curve construction"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", o.input, "point file (text or JSON)")->required();
    sub->add_option("--out", o.out, "output path (default: standard output)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--threads", o.threads, "worker threads (default: HEIS_TSP_THREADS or hardware)");
    sub->add_option("--budget", o.budget, "Nelder-Mead iterations per β start");
  };
  auto scales = [&](CLI::App* sub) {
    sub->add_option("--k-min", o.k_min, "coarsest scale index");
    sub->add_option("--k-max", o.k_max, "finest scale index");
  };
  auto builder = [&](CLI::App* sub) {
    sub->add_option("--r", o.r, "target exponent in (2, 4)");
    sub->add_option("--c1", o.c1, "ball multiplier C1");
    sub->add_option("--eps0", o.eps0, "flatness threshold");
    sub->add_option("--A", o.A, "Carleson ball multiplier");
    scales(sub);
  };

  auto* beta = app.add_subcommand("beta", "β of a point set in a ball");
  common(beta, true);
  beta->add_option("--ball", o.ball, "\"cx cy cz radius\"")->required();
  beta->add_option("--certify", o.certify, "grid oracle resolution for certified_gap (0: off)");

  auto* build = app.add_subcommand("build", "build a curve through the points");
  common(build, true);
  builder(build);
  build->add_option("--curve-out", o.curve_out, "write curve vertices as a point file");

  auto* carleson = app.add_subcommand("carleson", "discrete β Carleson sum as CSV");
  common(carleson, true);
  carleson->add_option("--r", o.r, "exponent in (0, 8] (default 4)");
  carleson->add_option("--A", o.A, "ball multiplier");
  carleson->add_option("--density", o.density, "samples per unit length (curves) / finest scale");
  carleson->add_flag("--curve", o.curve, "treat the input as polygonal curve vertices");
  scales(carleson);

  auto* verify_cmd = app.add_subcommand("verify", "run the seeded lemma checks");
  common(verify_cmd, false);
  verify_cmd->add_option("--samples", o.samples, "samples per exact check");
  verify_cmd->add_flag("--debug-tamper", o.tamper, "tighten one bound so the suite must fail");

  auto* ta = app.add_subcommand("theorem-a", "curve length against diam + Carleson sum");
  common(ta, true);
  builder(ta);

  auto* tb = app.add_subcommand("theorem-b", "Carleson sum of a curve against its length");
  common(tb, true);
  tb->add_option("--r", o.r, "exponent (default 4)");
  tb->add_option("--A", o.A, "ball multiplier");
  tb->add_option("--density", o.density, "samples per unit length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*beta) return cmd_beta(o);
    if (*build) return cmd_build(o);
    if (*carleson) return cmd_carleson(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*ta) return cmd_theorem_a(o);
    if (*tb) return cmd_theorem_b(o);
  } catch (const ResourceError& e) {
    std::cerr << "error: resource budget exceeded: " << e.what() << "\n";
    return kResource;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
