// interdesign: solve experimental-design relaxations, round them to integral
// selections with certified ratios, cross-check against brute-force oracles,
// and run seeded benchmark batteries.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "interdesign/io.hpp"
#include "interdesign/oracle.hpp"
#include "interdesign/round.hpp"

namespace {

using namespace interdesign;
using nlohmann::json;

// Exit codes: 2 parse/validation, 3 infeasible, 4 guarantee violated,
// 5 rank deficient, 6 verification failure, 7 certification failure.
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitGuarantee = 4;
constexpr int kExitRankDeficient = 5;
constexpr int kExitVerify = 6;
constexpr int kExitCertify = 7;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot open output file: " + out_path);
    out << j.dump(2) << '\n';
  }
}

ObjectiveKind kind_from_flags(const InstanceFile& file, const std::string& objective,
                              int l_prime, int l) {
  if (!objective.empty()) return parse_objective(objective, l_prime, l);
  if (file.kind) return *file.kind;
  return ObjectiveKind::D();
}

int cmd_solve(const std::string& path, const std::string& objective, int l_prime,
              int l, double tol, const std::string& out_path) {
  const InstanceFile file = read_instance(path);
  const ObjectiveKind kind = kind_from_flags(file, objective, l_prime, l);
  const auto t0 = std::chrono::steady_clock::now();
  const FractionalSolution frac = solve_relaxation(file.inst, kind, tol);
  json j;
  j["schema"] = 1;
  j["instance_digest"] = instance_digest(file);
  j["objective"] = objective_name(kind);
  if (kind.is_ratio()) {
    j["lprime"] = kind.l_prime;
    j["l"] = kind.l;
  }
  j["fractional"] = fractional_to_json(frac);
  j["timings"] = {{"solve_seconds", seconds_since(t0)}};
  emit(j, out_path);
  return 0;
}

int cmd_round(const std::string& path, const std::string& objective, int l_prime,
              int l, double tol, bool use_given_x, const std::string& out_path) {
  const InstanceFile file = read_instance(path);
  const ObjectiveKind kind = kind_from_flags(file, objective, l_prime, l);

  const auto t0 = std::chrono::steady_clock::now();
  FractionalSolution frac = [&] {
    if (use_given_x) {
      if (!file.x) throw ParseError("--input-x requires an 'x' field in the instance");
      return validate_fractional(file.inst, *file.x, kind);
    }
    return solve_relaxation(file.inst, kind, tol);
  }();
  const double solve_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const RoundingResult result = round_design(file.inst, frac, kind);
  const double round_seconds = seconds_since(t1);

  emit(run_report(file, frac, result, kind, solve_seconds, round_seconds), out_path);
  return certify(result, frac, kind) ? 0 : kExitCertify;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_verify(const std::string& path, double max_leaves,
               const std::string& out_path) {
  const InstanceFile file = read_instance(path);
  const Instance& inst = file.inst;
  const int m = inst.count();

  double total = 1.0;
  for (int i = 0; i < inst.k; ++i) total *= m;
  if (total > max_leaves) {
    std::cerr << "verify: m^k = " << total << " exceeds --max-leaves\n";
    return kExitParse;
  }

  std::vector<double> x = file.x ? *file.x
                                 : std::vector<double>(static_cast<std::size_t>(m),
                                                       static_cast<double>(inst.k) / m);
  const FractionalSolution frac = validate_fractional(inst, x, ObjectiveKind::D());
  FamilyContext ctx(inst.vectors, frac.x, inst.k);
  const LeafTable table = enumerate_leaves(ctx);
  const std::vector<double> p = children_weights(ctx);

  std::vector<Check> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  };

  {  // Probabilities sum to one.
    double sum = 0.0;
    for (const Leaf& leaf : table.leaves) sum += leaf.probability;
    add("leaf-probabilities-sum-to-1", std::abs(sum - 1.0) <= 1e-10,
        "sum = " + std::to_string(sum));
  }

  {  // Root closed form vs brute-force expectation.
    Spectrum sp = sym_eigen(frac.X);
    std::vector<double> eigs(sp.eigenvalues.data(), sp.eigenvalues.data() + inst.d);
    const RealRootedPoly closed = root_poly_closed_form(eigs, inst.k, inst.d);
    const RealRootedPoly exact = exact_expected_poly(table, {});
    double err = 0.0, mag = 0.0;
    for (int i = 0; i <= inst.d; ++i) {
      err = std::max(err, std::abs(closed.coeffs[i] - exact.coeffs[i]));
      mag = std::max(mag, std::abs(exact.coeffs[i]));
    }
    add("root-closed-form", err <= 1e-8 * std::max(1.0, mag),
        "max coefficient error = " + std::to_string(err));
  }

  // Walk every positive-probability internal node.
  bool convex_ok = true, family_ok = true, sandwich_ok = true, roots_ok = true;
  std::string convex_detail, family_detail, sandwich_detail, roots_detail;
  const std::vector<ObjectiveKind> kinds = {
      ObjectiveKind::E(), ObjectiveKind::D(), ObjectiveKind::A()};

  std::vector<std::vector<int>> frontier = {{}};
  for (int depth = 0; depth < inst.k; ++depth) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : frontier) {
      const RealRootedPoly parent = exact_expected_poly(table, prefix);
      std::vector<RealRootedPoly> children;
      children.reserve(static_cast<std::size_t>(m));
      PartialSelection node = PartialSelection::root(inst.d);
      for (int s : prefix) node = node.extended(ctx, s);
      for (int t = 0; t < m; ++t) {
        auto child_prefix = prefix;
        child_prefix.push_back(t);
        RealRootedPoly child =
            conditional_expected_charpoly(ctx, node.extended(ctx, t));
        children.push_back(child);
        if (p[static_cast<std::size_t>(t)] > 0.0) next.push_back(child_prefix);
      }
      // Def. 2.1 property 1: the parent is the p-weighted child combination.
      const RealRootedPoly combo = convex_combination(children, p);
      double mag = 0.0, err = 0.0;
      for (int i = 0; i <= inst.d; ++i) {
        mag = std::max(mag, std::abs(parent.coeffs[i]));
        err = std::max(err, std::abs(parent.coeffs[i] - combo.coeffs[i]));
      }
      if (err > 1e-8 * std::max(1.0, mag)) {
        convex_ok = false;
        convex_detail = "error " + std::to_string(err);
      }
      // Interpolation path agrees with brute force at this node.
      const RealRootedPoly interp = conditional_expected_charpoly(ctx, node);
      double ferr = 0.0;
      for (int i = 0; i <= inst.d; ++i) {
        ferr = std::max(ferr, std::abs(parent.coeffs[i] - interp.coeffs[i]));
      }
      if (ferr > 1e-8 * std::max(1.0, mag)) {
        family_ok = false;
        family_detail = "error " + std::to_string(ferr);
      }
      // Sandwiching per objective.
      for (ObjectiveKind kind : kinds) {
        const ObjectiveScore ps = node_score(parent, kind, inst.d);
        bool some_not_worse = false;
        for (int t = 0; t < m; ++t) {
          if (p[static_cast<std::size_t>(t)] <= 0.0) continue;
          const ObjectiveScore cs = node_score(children[static_cast<std::size_t>(t)], kind, inst.d);
          if (cs.is_infinite && ps.is_infinite) some_not_worse = true;
          if (ps.is_infinite && kind.tag == ObjectiveKind::Tag::A && !cs.is_infinite) continue;
          if (cs.is_infinite && kind.tag == ObjectiveKind::Tag::A) some_not_worse = true;
          if (!cs.is_infinite && !ps.is_infinite) {
            const double slack = 1e-7 * std::max(1.0, std::abs(ps.value));
            const bool maximize = kind.tag != ObjectiveKind::Tag::A;
            if (maximize ? cs.value >= ps.value - slack
                         : cs.value <= ps.value + slack) {
              some_not_worse = true;
            }
          }
        }
        if (!some_not_worse) {
          sandwich_ok = false;
          sandwich_detail = "objective " + objective_name(kind);
        }
      }
      // Real-rootedness evidence: the minimum root is reachable and >= 0.
      try {
        const double r = min_root(parent, 1e-9);
        if (r < -1e-7) {
          roots_ok = false;
          roots_detail = "negative minimum root " + std::to_string(r);
        }
      } catch (const NumericalFailure& e) {
        roots_ok = false;
        roots_detail = e.what();
      }
    }
    frontier = std::move(next);
  }
  add("convex-combination-structure", convex_ok, convex_detail);
  add("interpolation-matches-enumeration", family_ok, family_detail);
  add("children-sandwich-parent", sandwich_ok, sandwich_detail);
  add("nonnegative-real-roots", roots_ok, roots_detail);

  json j;
  j["schema"] = 1;
  j["instance_digest"] = instance_digest(file);
  json arr = json::array();
  bool all = true;
  for (const Check& c : checks) {
    arr.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
              << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
  }
  j["checks"] = std::move(arr);
  j["all_pass"] = all;
  if (!out_path.empty()) emit(j, out_path);
  return all ? 0 : kExitVerify;
}

int cmd_bench(const std::string& generator, const std::string& sizes,
              std::uint64_t seed, double tol, const std::string& out_path) {
  std::vector<std::array<int, 3>> parsed;
  std::stringstream ss(sizes);
  std::string token;
  while (std::getline(ss, token, ',')) {
    int d = 0, k = 0, m = 0;
    if (std::sscanf(token.c_str(), "%d:%d:%d", &d, &k, &m) != 3) {
      throw ParseError("bad --sizes entry '" + token + "', expected d:k:m");
    }
    parsed.push_back({d, k, m});
  }
  if (parsed.empty()) throw ParseError("--sizes is empty");

  json rows = json::array();
  std::printf("%-12s %3s %3s %3s %-5s %12s %12s %10s %10s\n", "generator", "d",
              "k", "m", "obj", "fractional", "integral", "ratio", "bound");
  for (std::size_t idx = 0; idx < parsed.size(); ++idx) {
    const auto [d, k, m] = parsed[idx];
    Instance inst;
    if (generator == "gaussian") {
      inst = make_gaussian(d, k, m, seed + idx);
    } else if (generator == "basis-copies") {
      inst = make_basis_copies(d, k, m);
    } else if (generator == "clustered") {
      inst = make_clustered(d, k, m, seed + idx);
    } else {
      throw ParseError("unknown generator '" + generator + "'");
    }
    for (ObjectiveKind kind :
         {ObjectiveKind::D(), ObjectiveKind::A(), ObjectiveKind::E()}) {
      const FractionalSolution frac = solve_relaxation(inst, kind, tol);
      const RoundingResult result = round_design(inst, frac, kind);
      std::printf("%-12s %3d %3d %3d %-5s %12.6g %12.6g %10.6g %10.6g\n",
                  generator.c_str(), d, k, m, objective_name(kind).c_str(),
                  result.fractional_objective, result.integral_objective,
                  result.certified_ratio, result.theorem_bound);
      rows.push_back({{"generator", generator},
                      {"d", d},
                      {"k", k},
                      {"m", m},
                      {"objective", objective_name(kind)},
                      {"fractional_objective", result.fractional_objective},
                      {"integral_objective", result.integral_objective},
                      {"certified_ratio", result.certified_ratio},
                      {"theorem_bound", result.theorem_bound},
                      {"certified", frac.certified}});
    }
  }
  if (!out_path.empty()) {
    emit(json{{"schema", 1}, {"seed", seed}, {"rows", rows}}, out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interlacing-polynomial rounding for experimental design"};
  app.require_subcommand(1);

  std::string path, objective, out_path, generator = "gaussian", sizes;
  int l_prime = 0, l = 0;
  double tol = 1e-6, max_leaves = 1e6;
  std::uint64_t seed = 1;
  bool use_given_x = false;

  auto* solve = app.add_subcommand("solve", "solve the convex relaxation");
  solve->add_option("input", path, "instance JSON")->required();
  solve->add_option("--objective", objective, "D|A|E|ratio");
  solve->add_option("--lprime", l_prime, "ratio l'");
  solve->add_option("--l", l, "ratio l");
  solve->add_option("--tol", tol, "certificate tolerance");
  solve->add_option("--out", out_path, "write report JSON here");

  auto* round = app.add_subcommand("round", "solve (or take x) and round");
  round->add_option("input", path, "instance JSON")->required();
  round->add_option("--objective", objective, "D|A|E|ratio");
  round->add_option("--lprime", l_prime, "ratio l'");
  round->add_option("--l", l, "ratio l");
  round->add_option("--tol", tol, "certificate tolerance");
  round->add_flag("--input-x", use_given_x, "use the instance's x instead of solving");
  round->add_option("--out", out_path, "write report JSON here");

  auto* verify = app.add_subcommand("verify", "brute-force oracle cross-checks");
  verify->add_option("input", path, "instance JSON")->required();
  verify->add_option("--max-leaves", max_leaves, "enumeration guard (default 1e6)");
  verify->add_option("--out", out_path, "write report JSON here");

  auto* bench = app.add_subcommand("bench", "seeded instance battery");
  bench->add_option("--generator", generator, "gaussian|basis-copies|clustered");
  bench->add_option("--sizes", sizes, "comma list of d:k:m")->required();
  bench->add_option("--seed", seed, "generator seed");
  bench->add_option("--tol", tol, "solver tolerance");
  bench->add_option("--out", out_path, "write table JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(path, objective, l_prime, l, tol, out_path);
    if (round->parsed())
      return cmd_round(path, objective, l_prime, l, tol, use_given_x, out_path);
    if (verify->parsed()) return cmd_verify(path, max_leaves, out_path);
    if (bench->parsed()) return cmd_bench(generator, sizes, seed, tol, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvalidInstance& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Infeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const GuaranteeViolated& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuarantee;
  } catch (const RankDeficient& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRankDeficient;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
