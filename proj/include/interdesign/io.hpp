#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "interdesign/relax.hpp"
#include "interdesign/round.hpp"

namespace interdesign {

/// Deterministic counter-based generator (splitmix64 over seed + counter).
/// All randomness in the artifact flows through this; the core algorithms
/// are deterministic.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller.
  double gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// On-disk instance: schema 1 JSON with d, k, row-major vectors, and optional
/// fractional weights and objective kind.
struct InstanceFile {
  Instance inst;
  std::optional<std::vector<double>> x;
  std::optional<ObjectiveKind> kind;
};

InstanceFile parse_instance(const nlohmann::json& j);
nlohmann::json instance_to_json(const InstanceFile& file);
InstanceFile read_instance(const std::string& path);
void write_instance(const std::string& path, const InstanceFile& file);

std::string objective_name(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string& name, int l_prime, int l);

/// FNV-1a digest of the canonical instance serialization.
std::string instance_digest(const InstanceFile& file);

nlohmann::json fractional_to_json(const FractionalSolution& frac);
/// Full run report: digest, objective, fractional block, selection (1-based),
/// integral objective, certified ratio, theorem bound, timings.
nlohmann::json run_report(const InstanceFile& file, const FractionalSolution& frac,
                          const RoundingResult& result, ObjectiveKind kind,
                          double solve_seconds, double round_seconds);

// Seeded instance generators for benchmarks and test batteries.
Instance make_gaussian(int d, int k, int m, std::uint64_t seed);
Instance make_basis_copies(int d, int k, int m);
Instance make_clustered(int d, int k, int m, std::uint64_t seed);

}  // namespace interdesign
