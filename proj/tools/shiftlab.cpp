// Command-line front end: every subcommand is a thin wrapper over the library
// with deterministic JSON/CSV emission (exit 0 ok, 2 input error, 3
// capacity/construction failure).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shiftlab/fcriterion.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/natset.hpp"
#include "shiftlab/report.hpp"
#include "shiftlab/seqspace.hpp"
#include "shiftlab/shiftop.hpp"
#include "shiftlab/spectral.hpp"

namespace {

using namespace shiftlab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

struct CommonOpts {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

void emit(const CommonOpts& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError("cannot open output file '" + c.out + "'", 0);
  f << content;
}

void require_horizon(Nat h) {
  if (h < 10) throw ParseError("horizon must be at least 10", 1);
}

// Set inputs are either a NatSet file or the generated counterexample
// support, named as "paper-support:<horizon>".
NatSet load_set(const std::string& arg) {
  const std::string prefix = "paper-support:";
  if (arg.rfind(prefix, 0) == 0) {
    const auto h = io::parse_int(arg.substr(prefix.size()));
    if (!h || *h < 10) throw ParseError("bad horizon in '" + arg + "'", 1);
    return counterexample::support_set(static_cast<Nat>(*h));
  }
  return io::load_natset(arg);
}

SpaceTag parse_space(const std::string& s) {
  if (s == "c0") return SpaceTag::c0();
  if (s.rfind("lp:", 0) == 0) {
    double p = 0.0;
    try {
      p = std::stod(s.substr(3));
    } catch (const std::exception&) {
      throw ParseError("bad space '" + s + "'", 1);
    }
    return SpaceTag::lp(p);
  }
  throw ParseError("unknown space '" + s + "' (use c0 or lp:<p>)", 1);
}

std::vector<Nat> parse_nat_list(const std::string& s, bool allow_zero) {
  std::vector<Nat> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto v = io::parse_int(io::trim(tok));
    if (!v || *v < (allow_zero ? 0 : 1)) throw ParseError("bad integer list entry '" + tok + "'", 1);
    out.push_back(static_cast<Nat>(*v));
  }
  return out;
}

std::vector<Dyadic> parse_scalar_list(const std::string& s) {
  std::vector<Dyadic> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(io::parse_scalar(tok));
  return out;
}

json natset_json(const NatSet& a) {
  json j;
  j["horizon"] = a.horizon();
  j["count"] = a.size();
  j["elements"] = a.elements();
  return j;
}

// Matrix CSV: one row per line, comma-separated entries.  When every entry is
// an integer literal the exact integer route is used.
struct MatrixInput {
  SquareMatrix<double> real = SquareMatrix<double>(1);
  std::optional<SquareMatrix<std::int64_t>> integer;
};

MatrixInput load_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open matrix file '" + path + "'", 0);
  std::vector<std::vector<Dyadic>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    std::vector<Dyadic> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(io::parse_scalar(cell, lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file '" + path + "'", lineno);
  const Nat d = rows.size();
  MatrixInput m;
  m.real = SquareMatrix<double>(d);
  bool all_int = true;
  for (Nat i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw ParseError("matrix is not square", i + 1);
    for (Nat j = 0; j < d; ++j) {
      m.real(i, j) = rows[i][j].to_double();
      all_int = all_int && rows[i][j].exact() && rows[i][j].exponent() >= 0 && rows[i][j].exponent() <= 32;
    }
  }
  if (all_int) {
    m.integer.emplace(d);
    for (Nat i = 0; i < d; ++i)
      for (Nat j = 0; j < d; ++j)
        (*m.integer)(i, j) = static_cast<std::int64_t>(rows[i][j].mantissa()) << rows[i][j].exponent();
  }
  return m;
}

std::string verdict_name(Verdict v) {
  return v == Verdict::pass ? "pass" : (v == Verdict::fail ? "fail" : "inconclusive");
}

int run(int argc, char** argv) {
  CLI::App app{"shiftlab: weighted backward shifts, return-time combinatorics, criterion checks"};
  app.require_subcommand(1);

  // --- density ---------------------------------------------------------
  auto* density = app.add_subcommand("density", "Density profile of an integer set");
  std::string density_file, density_kind = "lower";
  Nat density_window = 0;
  CommonOpts density_c;
  density->add_option("setfile", density_file, "NatSet file")->required();
  density->add_option("--kind", density_kind, "Density kind")
      ->check(CLI::IsMember({"lower", "upper", "banach-upper"}));
  density->add_option("--window", density_window, "Sample window (default: horizon)");
  add_common(density, density_c);

  // --- ap-profile ------------------------------------------------------
  auto* apcmd = app.add_subcommand("ap-profile", "Longest-AP table per difference k");
  std::string ap_file;
  Nat ap_kmax = 10, ap_min_length = 0;
  CommonOpts ap_c;
  apcmd->add_option("setfile", ap_file, "NatSet file")->required();
  apcmd->add_option("--kmax", ap_kmax, "Largest difference to scan")->check(CLI::PositiveNumber);
  apcmd->add_option("--min-length", ap_min_length,
                    "Report whether the AP score meets this length (diagnostic threshold, not a claim)");
  add_common(apcmd, ap_c);

  // --- shift-orbit -----------------------------------------------------
  auto* orbitcmd = app.add_subcommand("shift-orbit", "Orbit of a vector under the weighted shift");
  std::string orbit_rule = "const:2", orbit_vec;
  Nat orbit_steps = 10;
  CommonOpts orbit_c;
  orbitcmd->add_option("--rule", orbit_rule, "Weight rule (const:<s>, list:@<file>, paper-counterexample)");
  orbitcmd->add_option("--vector", orbit_vec, "Start vector, e.g. 1:1,3:1/2^2")->required();
  orbitcmd->add_option("--steps", orbit_steps, "Number of steps");
  add_common(orbitcmd, orbit_c);

  // --- chaos-check -----------------------------------------------------
  auto* chaoscmd = app.add_subcommand("chaos-check", "Finite-horizon chaos criterion for a weight rule");
  std::string chaos_rule = "const:2", chaos_space = "c0";
  Nat chaos_horizon = 100000;
  double chaos_floor = 20.0;
  CommonOpts chaos_c;
  chaoscmd->add_option("--rule", chaos_rule, "Weight rule");
  chaoscmd->add_option("--space", chaos_space, "c0 or lp:<p>");
  chaoscmd->add_option("--horizon", chaos_horizon, "Horizon (>= 10)");
  chaoscmd->add_option("--growth-floor", chaos_floor, "Exponent growth floor heuristic");
  add_common(chaoscmd, chaos_c);

  // --- periodic-probe --------------------------------------------------
  auto* probecmd = app.add_subcommand("periodic-probe", "Search for a periodic vector near a target");
  std::string probe_rule = "const:2", probe_space = "c0", probe_target, probe_eps = "1/2^4";
  Nat probe_horizon = 4096, probe_cap = 64;
  CommonOpts probe_c;
  probecmd->add_option("--rule", probe_rule, "Weight rule");
  probecmd->add_option("--target", probe_target, "Target vector literal")->required();
  probecmd->add_option("--eps", probe_eps, "Required distance (scalar literal)");
  probecmd->add_option("--space", probe_space, "c0 or lp:<p>");
  probecmd->add_option("--horizon", probe_horizon, "Extension window");
  probecmd->add_option("--period-cap", probe_cap, "Largest period to try");
  add_common(probecmd, probe_c);

  // --- hypercyclic-build -----------------------------------------------
  auto* buildcmd = app.add_subcommand("hypercyclic-build", "Block construction of an orbit-dense vector");
  std::string build_rule = "const:2", build_space = "c0", build_targets, build_tols, build_schedule;
  Nat build_maxpos = 1000000;
  CommonOpts build_c;
  buildcmd->add_option("--rule", build_rule, "Weight rule");
  buildcmd->add_option("--targets", build_targets, "Semicolon-separated vector literals")->required();
  buildcmd->add_option("--tols", build_tols, "Comma-separated positive nonincreasing scalars")->required();
  buildcmd->add_option("--schedule", build_schedule, "Prescribed block positions (comma-separated)");
  buildcmd->add_option("--space", build_space, "c0 or lp:<p>");
  buildcmd->add_option("--max-position", build_maxpos, "Greedy search cap");
  add_common(buildcmd, build_c);

  // --- return-set ------------------------------------------------------
  auto* returncmd = app.add_subcommand("return-set", "Visit times of an orbit to a ball");
  std::string ret_rule = "const:2", ret_space = "c0", ret_vec, ret_center, ret_radius = "1/2^2";
  Nat ret_horizon = 100000;
  CommonOpts ret_c;
  returncmd->add_option("--rule", ret_rule, "Weight rule");
  returncmd->add_option("--vector", ret_vec, "Orbit start vector")->required();
  returncmd->add_option("--center", ret_center, "Ball center vector")->required();
  returncmd->add_option("--radius", ret_radius, "Ball radius (scalar literal)");
  returncmd->add_option("--space", ret_space, "c0 or lp:<p>");
  returncmd->add_option("--horizon", ret_horizon, "Horizon");
  add_common(returncmd, ret_c);

  // --- criterion-check -------------------------------------------------
  auto* critcmd = app.add_subcommand("criterion-check", "Block families and criterion conditions i)-iii)");
  std::string crit_rule = "paper-counterexample", crit_space = "c0", crit_kprimes = "0,1";
  Nat crit_kmax = 2, crit_blocks = 3, crit_horizon = 1000000;
  CommonOpts crit_c;
  critcmd->add_option("--rule", crit_rule, "Weight rule");
  critcmd->add_option("--kmax", crit_kmax, "Number of families")->check(CLI::PositiveNumber);
  critcmd->add_option("--blocks", crit_blocks, "Total blocks, assigned round-robin to k=1..kmax");
  critcmd->add_option("--horizon", crit_horizon, "Horizon");
  critcmd->add_option("--kprimes", crit_kprimes, "Comma-separated k' values");
  critcmd->add_option("--space", crit_space, "c0 or lp:<p>");
  add_common(critcmd, crit_c);

  // --- counterexample-report -------------------------------------------
  auto* reportcmd = app.add_subcommand("counterexample-report",
                                       "Full desk-scale document for the counterexample shift");
  Nat rep_horizon = 1000000, rep_kmax = 2, rep_blocks = 3;
  std::string rep_kprimes = "0,1";
  double rep_floor = 20.0;
  CommonOpts rep_c;
  reportcmd->add_option("--horizon", rep_horizon, "Horizon");
  reportcmd->add_option("--kmax", rep_kmax, "Number of families")->check(CLI::PositiveNumber);
  reportcmd->add_option("--blocks", rep_blocks, "Total blocks");
  reportcmd->add_option("--kprimes", rep_kprimes, "Comma-separated k' values");
  reportcmd->add_option("--growth-floor", rep_floor, "Chaos-criterion growth floor");
  add_common(reportcmd, rep_c);

  // --- binomial-check --------------------------------------------------
  auto* binomcmd = app.add_subcommand("binomial-check", "Binomial-transform identity and sign-change returns");
  std::string binom_matrix, binom_x, binom_xstar;
  Nat binom_n = 10, binom_horizon = 0;
  CommonOpts binom_c;
  binomcmd->add_option("--matrix", binom_matrix, "Square matrix CSV file")->required();
  binomcmd->add_option("--x", binom_x, "Vector entries, comma-separated")->required();
  binomcmd->add_option("--xstar", binom_xstar, "Functional entries, comma-separated")->required();
  binomcmd->add_option("--n", binom_n, "Transform order");
  binomcmd->add_option("--horizon", binom_horizon, "If > 0, also scan sign-change returns up to here");
  add_common(binomcmd, binom_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (density->parsed()) {
    const NatSet a = load_set(density_file);
    const DensityKind kind = density_kind == "lower"
                                 ? DensityKind::lower
                                 : (density_kind == "upper" ? DensityKind::upper : DensityKind::banach_upper);
    const Nat window = density_window == 0 ? a.horizon() : density_window;
    const DensityProfile p = density_profile(a, kind, window);
    for (const auto& s : p.samples)
      if (s.ratio < 0.0 || s.ratio > 1.0) throw std::logic_error("density ratio out of [0,1]");
    if (density_c.format == "csv")
      emit(density_c, io::density_csv(p));
    else
      emit(density_c, report::render(report::density_json(p)));
    if (!density_c.out.empty()) std::cout << "estimate " << io::format_double(p.estimate) << "\n";
    return kExitOk;
  }

  if (apcmd->parsed()) {
    const NatSet a = load_set(ap_file);
    const APProfile p = ap_profile(a, ap_kmax);
    for (const auto& [k, w] : p)
      if (w && !w->verify(a)) throw std::logic_error("ap-profile: witness failed re-validation");
    if (ap_c.format == "csv") {
      emit(ap_c, io::ap_profile_csv(p));
    } else {
      json j = report::ap_profile_json(p);
      if (ap_min_length > 0) j["meets_threshold"] = ap_score(p) >= ap_min_length;
      emit(ap_c, report::render(j));
    }
    return kExitOk;
  }

  if (orbitcmd->parsed()) {
    const WeightRule rule = io::parse_weight_rule(orbit_rule);
    const SeqVector x = io::parse_seqvector(orbit_vec);
    const OrbitRecord rec = orbit(rule, x, orbit_steps);
    if (orbit_c.format == "csv") {
      std::string out = "n,vector\n";
      for (const auto& [n, v] : rec.steps) out += std::to_string(n) + ",\"" + io::format_seqvector(v) + "\"\n";
      emit(orbit_c, out);
    } else {
      json steps = json::array();
      for (const auto& [n, v] : rec.steps) steps.push_back(json::array({n, io::format_seqvector(v)}));
      emit(orbit_c, report::render(json{{"exact", rec.exact}, {"steps", steps}}));
    }
    return kExitOk;
  }

  if (chaoscmd->parsed()) {
    require_horizon(chaos_horizon);
    const ChaosVerdict v =
        chaos_criterion(io::parse_weight_rule(chaos_rule), parse_space(chaos_space), chaos_horizon, chaos_floor);
    emit(chaos_c, report::render(report::chaos_json(v)));
    return kExitOk;
  }

  if (probecmd->parsed()) {
    require_horizon(probe_horizon);
    const ProbeResult r = dense_periodic_probe(io::parse_weight_rule(probe_rule), io::parse_seqvector(probe_target),
                                               io::parse_scalar(probe_eps), parse_space(probe_space), probe_horizon,
                                               probe_cap);
    json j{{"success", r.success}, {"period", r.period}, {"distance", r.distance}, {"reason", r.reason}};
    if (r.success) j["vector_head"] = io::format_seqvector_head(r.x, 16);
    emit(probe_c, report::render(j));
    return kExitOk;
  }

  if (buildcmd->parsed()) {
    const WeightRule rule = io::parse_weight_rule(build_rule);
    std::vector<SeqVector> targets;
    std::stringstream ss(build_targets);
    std::string tok;
    while (std::getline(ss, tok, ';')) targets.push_back(io::parse_seqvector(tok));
    const std::vector<Dyadic> tols = parse_scalar_list(build_tols);
    const SpaceTag space = parse_space(build_space);
    const HypercyclicBuild b =
        build_schedule.empty()
            ? construct_hypercyclic_vector(rule, targets, tols, space, build_maxpos)
            : construct_hypercyclic_vector_at(rule, targets, tols, space, parse_nat_list(build_schedule, false));
    json j;
    j["schedule"] = b.schedule;
    j["vector"] = io::format_seqvector(b.x);
    emit(build_c, report::render(j));
    return kExitOk;
  }

  if (returncmd->parsed()) {
    require_horizon(ret_horizon);
    const WeightRule rule = io::parse_weight_rule(ret_rule);
    const Ball ball(io::parse_seqvector(ret_center), io::parse_scalar(ret_radius), parse_space(ret_space));
    const NatSet n = return_set(rule, io::parse_seqvector(ret_vec), ball, ret_horizon);
    if (ret_c.format == "csv")
      emit(ret_c, io::format_natset(n));  // round-trips back into density / ap-profile
    else
      emit(ret_c, report::render(natset_json(n)));
    return kExitOk;
  }

  if (critcmd->parsed()) {
    require_horizon(crit_horizon);
    const WeightRule rule = io::parse_weight_rule(crit_rule);
    const auto family = build_family(crit_kmax, crit_blocks, crit_horizon);
    const CriterionReport rep =
        full_report(rule, family, parse_nat_list(crit_kprimes, true), parse_space(crit_space), crit_horizon);
    if (crit_c.format == "csv")
      emit(crit_c, io::family_csv(family) + io::criterion_csv(rep));
    else
      emit(crit_c, report::render(
                       json{{"family", report::family_json(family)}, {"criterion", report::criterion_json(rep)}}));
    return kExitOk;
  }

  if (reportcmd->parsed()) {
    require_horizon(rep_horizon);
    const json j =
        report::counterexample_report(rep_horizon, rep_kmax, rep_blocks, parse_nat_list(rep_kprimes, true), rep_floor);
    emit(rep_c, report::render(j));
    return kExitOk;
  }

  if (binomcmd->parsed()) {
    const MatrixInput m = load_matrix_csv(binom_matrix);
    const std::vector<Dyadic> xs = parse_scalar_list(binom_x), fs = parse_scalar_list(binom_xstar);
    json j;
    if (m.integer) {
      bool ints = true;
      for (const Dyadic& v : xs) ints = ints && v.exact() && v.exponent() >= 0;
      for (const Dyadic& v : fs) ints = ints && v.exact() && v.exponent() >= 0;
      if (ints) {
        std::vector<std::int64_t> xi, fi;
        for (const Dyadic& v : xs) xi.push_back(static_cast<std::int64_t>(v.to_double()));
        for (const Dyadic& v : fs) fi.push_back(static_cast<std::int64_t>(v.to_double()));
        const auto r = binomial_transform(*m.integer, xi, fi, binom_n);
        j["exact"] = true;
        j["lhs"] = static_cast<double>(r.lhs);
        j["rhs"] = static_cast<double>(r.rhs);
        j["identity_holds"] = r.exact_equal();
      }
    }
    if (j.empty()) {
      std::vector<double> xd, fd;
      for (const Dyadic& v : xs) xd.push_back(v.to_double());
      for (const Dyadic& v : fs) fd.push_back(v.to_double());
      const auto r = binomial_transform(m.real, xd, fd, binom_n);
      j["exact"] = false;
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      j["relative_defect"] = r.relative_defect();
    }
    if (binom_horizon > 0) {
      std::vector<double> xd, fd;
      for (const Dyadic& v : xs) xd.push_back(v.to_double());
      for (const Dyadic& v : fs) fd.push_back(v.to_double());
      const auto [returns, profile] = return_count_by_sign_change(m.real, xd, fd, binom_horizon);
      j["returns"] = returns.elements();
      json samples = json::array();
      for (const auto& s : profile.samples) samples.push_back(json::array({s.n, s.ratio}));
      j["density_samples"] = samples;
      j["density_estimate"] = profile.estimate;
    }
    emit(binom_c, report::render(j));
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const shiftlab::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const shiftlab::ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const shiftlab::ParseError& e) {
    std::cerr << "error (line " << e.line() << "): " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
