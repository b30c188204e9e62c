#include "interdesign/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace interdesign {

std::uint64_t CounterRng::next_u64() {
  // splitmix64 over a seed-offset counter stream.
  std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (++counter_);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::string objective_name(ObjectiveKind kind) {
  switch (kind.tag) {
    case ObjectiveKind::Tag::D:
      return "D";
    case ObjectiveKind::Tag::A:
      return "A";
    case ObjectiveKind::Tag::E:
      return "E";
    case ObjectiveKind::Tag::Ratio:
      return "ratio";
  }
  return "?";
}

ObjectiveKind parse_objective(const std::string& name, int l_prime, int l) {
  std::string low = name;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (low == "d") return ObjectiveKind::D();
  if (low == "a") return ObjectiveKind::A();
  if (low == "e") return ObjectiveKind::E();
  if (low == "ratio") return ObjectiveKind::Ratio(l_prime, l);
  throw ParseError("unknown objective '" + name + "'");
}

InstanceFile parse_instance(const nlohmann::json& j) {
  try {
    InstanceFile file;
    if (j.value("schema", 0) != 1) throw ParseError("instance: expected schema 1");
    file.inst.d = j.at("d").get<int>();
    file.inst.k = j.at("k").get<int>();
    const auto& rows = j.at("vectors");
    if (!rows.is_array() || rows.empty()) throw ParseError("instance: vectors must be a nonempty array");
    file.inst.vectors.resize(static_cast<Eigen::Index>(rows.size()), file.inst.d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (static_cast<int>(row.size()) != file.inst.d) {
        throw ParseError("instance: vector row has wrong length");
      }
      for (int c = 0; c < file.inst.d; ++c) {
        file.inst.vectors(static_cast<Eigen::Index>(i), c) = row[static_cast<std::size_t>(c)].get<double>();
      }
    }
    if (j.contains("x")) {
      file.x = j.at("x").get<std::vector<double>>();
    }
    if (j.contains("objective")) {
      file.kind = parse_objective(j.at("objective").get<std::string>(),
                                  j.value("lprime", 0), j.value("l", 0));
    }
    file.inst.validate();
    if (file.kind) file.kind->validate(file.inst.d);
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  } catch (const InvalidInstance& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

nlohmann::json instance_to_json(const InstanceFile& file) {
  nlohmann::json j;
  j["schema"] = 1;
  j["d"] = file.inst.d;
  j["k"] = file.inst.k;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < file.inst.vectors.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < file.inst.vectors.cols(); ++c) {
      row.push_back(file.inst.vectors(i, c));
    }
    rows.push_back(std::move(row));
  }
  j["vectors"] = std::move(rows);
  if (file.x) j["x"] = *file.x;
  if (file.kind) {
    j["objective"] = objective_name(*file.kind);
    if (file.kind->is_ratio()) {
      j["lprime"] = file.kind->l_prime;
      j["l"] = file.kind->l;
    }
  }
  return j;
}

InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  return parse_instance(j);
}

void write_instance(const std::string& path, const InstanceFile& file) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write instance file: " + path);
  out << instance_to_json(file).dump(2) << '\n';
}

std::string instance_digest(const InstanceFile& file) {
  std::ostringstream canon;
  canon.precision(17);
  canon << file.inst.d << '|' << file.inst.k;
  for (Eigen::Index i = 0; i < file.inst.vectors.rows(); ++i) {
    for (Eigen::Index c = 0; c < file.inst.vectors.cols(); ++c) {
      canon << '|' << file.inst.vectors(i, c);
    }
  }
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : canon.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

nlohmann::json fractional_to_json(const FractionalSolution& frac) {
  nlohmann::json j;
  j["x"] = frac.x;
  j["objective_value"] = frac.objective_value;
  j["certified"] = frac.certified;
  j["certificate"] = frac.certificate;
  j["iterations"] = frac.iterations;
  return j;
}

nlohmann::json run_report(const InstanceFile& file, const FractionalSolution& frac,
                          const RoundingResult& result, ObjectiveKind kind,
                          double solve_seconds, double round_seconds) {
  nlohmann::json j;
  j["schema"] = 1;
  j["instance_digest"] = instance_digest(file);
  j["objective"] = objective_name(kind);
  if (kind.is_ratio()) {
    j["lprime"] = kind.l_prime;
    j["l"] = kind.l;
  }
  j["fractional"] = fractional_to_json(frac);
  nlohmann::json sel = nlohmann::json::array();
  for (int s : result.selection) sel.push_back(s + 1);  // 1-based in reports
  j["selection"] = std::move(sel);
  j["integral_objective"] = result.integral_objective;
  j["fractional_objective"] = result.fractional_objective;
  j["certified_ratio"] = result.certified_ratio;
  j["theorem_bound"] = result.theorem_bound;
  j["timings"] = {{"solve_seconds", solve_seconds}, {"round_seconds", round_seconds}};
  return j;
}

Instance make_gaussian(int d, int k, int m, std::uint64_t seed) {
  CounterRng rng(seed);
  Instance inst;
  inst.d = d;
  inst.k = k;
  inst.vectors.resize(m, d);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < d; ++c) inst.vectors(i, c) = rng.gaussian();
  }
  return inst;
}

Instance make_basis_copies(int d, int k, int m) {
  Instance inst;
  inst.d = d;
  inst.k = k;
  inst.vectors = Eigen::MatrixXd::Zero(m, d);
  for (int i = 0; i < m; ++i) inst.vectors(i, i % d) = 1.0;
  return inst;
}

Instance make_clustered(int d, int k, int m, std::uint64_t seed) {
  CounterRng rng(seed);
  const int centers = std::max(d, 2);
  Eigen::MatrixXd dirs(centers, d);
  for (int i = 0; i < centers; ++i) {
    for (int c = 0; c < d; ++c) dirs(i, c) = rng.gaussian();
    dirs.row(i).normalize();
  }
  Instance inst;
  inst.d = d;
  inst.k = k;
  inst.vectors.resize(m, d);
  for (int i = 0; i < m; ++i) {
    inst.vectors.row(i) = dirs.row(i % centers);
    for (int c = 0; c < d; ++c) inst.vectors(i, c) += 0.1 * rng.gaussian();
  }
  return inst;
}

}  // namespace interdesign
