#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "fls/betti.hpp"
#include "fls/filtered.hpp"
#include "fls/quiver.hpp"

namespace fls {

using nlohmann::json;

// scalars: rationals as "p/q" strings, residues as {"mod": p, "val": v}

inline json to_json(const Rat& r) { return r.str(); }
inline json to_json(const Fp& v) {
  return json{{"mod", v.modulus()}, {"val", v.value()}};
}

template <ExactField K>
K scalar_from_json(const json& j);

template <>
inline Rat scalar_from_json<Rat>(const json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  fail_input("expected a rational scalar (string \"p/q\")");
}

template <>
inline Fp scalar_from_json<Fp>(const json& j) {
  if (!j.is_object() || !j.contains("mod") || !j.contains("val"))
    fail_input("expected a finite-field scalar {\"mod\": p, \"val\": v}");
  std::uint64_t p = j.at("mod").get<std::uint64_t>();
  if (p < 3 || p % 2 == 0 || p > (1ull << 31))
    fail_input("modulus must be an odd prime <= 2^31");
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) fail_input("modulus must be prime");
  return Fp(static_cast<std::uint32_t>(p), j.at("val").get<long long>());
}

/// True when the file's scalars are finite-field objects rather than
/// rational strings.
inline bool json_uses_fp(const json& j) {
  if (j.is_object()) {
    if (j.contains("mod") && j.contains("val")) return true;
    for (const auto& [k, v] : j.items())
      if (json_uses_fp(v)) return true;
    return false;
  }
  if (j.is_array()) {
    for (const auto& v : j)
      if (json_uses_fp(v)) return true;
  }
  return false;
}

// matrices: row-major arrays of scalars

template <ExactField K>
json to_json(const Matrix<K>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <ExactField K>
Matrix<K> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) fail_input("expected a matrix (array of rows)");
  std::size_t r = j.size(), c = j[0].size();
  K proto = scalar_from_json<K>(j[0][0]);
  Matrix<K> m(r, c, proto.zero());
  for (std::size_t i = 0; i < r; ++i) {
    if (j[i].size() != c) fail_input("ragged matrix rows");
    for (std::size_t k = 0; k < c; ++k) m.at(i, k) = scalar_from_json<K>(j[i][k]);
  }
  return m;
}

// representations

template <ExactField K>
json to_json(const SurfaceRep<K>& rep) {
  json j;
  j["genus"] = rep.presentation().genus;
  j["punctures"] = rep.presentation().punctures;
  j["rank"] = rep.rank();
  j["A"] = json::array();
  j["B"] = json::array();
  for (const auto& m : rep.A()) j["A"].push_back(to_json(m));
  for (const auto& m : rep.B()) j["B"].push_back(to_json(m));
  j["C"] = json::object();
  for (const auto& x : rep.presentation().punctures) j["C"][x] = to_json(rep.C(x));
  return j;
}

template <ExactField K>
SurfaceRep<K> rep_from_json(const json& j) {
  if (!j.contains("genus") || !j.contains("punctures") || !j.contains("C"))
    fail_input("representation JSON needs genus, punctures, C");
  SurfacePresentation pres(j.at("genus").get<std::size_t>(),
                           j.at("punctures").get<std::vector<std::string>>());
  GeneratorImages<K> gen;
  if (j.contains("A"))
    for (const auto& m : j.at("A")) gen.A.push_back(matrix_from_json<K>(m));
  if (j.contains("B"))
    for (const auto& m : j.at("B")) gen.B.push_back(matrix_from_json<K>(m));
  for (const auto& x : pres.punctures) {
    if (!j.at("C").contains(x)) fail_input("missing C matrix for puncture " + x);
    gen.C.emplace(x, matrix_from_json<K>(j.at("C").at(x)));
  }
  return SurfaceRep<K>(pres, gen);
}

// flags and filtered local systems

template <ExactField K>
json to_json(const WeightedFlag<K>& wf) {
  json steps = json::array();
  for (std::size_t i = 1; i <= wf.flag.num_steps(); ++i)
    steps.push_back(to_json(wf.flag.step(i).basis()));
  json weights = json::array();
  for (const auto& w : wf.weights) weights.push_back(w.str());
  return json{{"steps", steps}, {"weights", weights}};
}

template <ExactField K>
WeightedFlag<K> weighted_flag_from_json(const json& j, std::size_t ambient, const K& proto) {
  if (!j.contains("steps") || !j.contains("weights")) fail_input("flag JSON needs steps and weights");
  std::vector<Subspace<K>> steps;
  for (const auto& s : j.at("steps")) {
    Matrix<K> rows = matrix_from_json<K>(s);
    steps.push_back(Subspace<K>::span_rows(rows, proto));
  }
  std::vector<Rat> weights;
  for (const auto& w : j.at("weights")) weights.push_back(scalar_from_json<Rat>(w));
  if (steps.empty() || !steps.front().is_full()) fail_input("first flag step must span the full space");
  (void)ambient;
  return WeightedFlag<K>(Flag<K>::from_steps(std::move(steps)), std::move(weights));
}

template <ExactField K>
json to_json(const FilteredLocalSystem<K>& fls) {
  json j = to_json(fls.rep());
  j["flags"] = json::object();
  for (const auto& x : fls.punctures()) j["flags"][x] = to_json(fls.flag_at(x));
  return j;
}

template <ExactField K>
FilteredLocalSystem<K> fls_from_json(const json& j) {
  SurfaceRep<K> rep = rep_from_json<K>(j);
  if (!j.contains("flags")) fail_input("filtered local system JSON needs flags");
  std::map<std::string, WeightedFlag<K>> flags;
  for (const auto& x : rep.presentation().punctures) {
    if (!j.at("flags").contains(x)) fail_input("missing flag at puncture " + x);
    flags.emplace(x, weighted_flag_from_json<K>(j.at("flags").at(x), rep.rank(), rep.proto()));
  }
  return FilteredLocalSystem<K>(std::move(rep), std::move(flags));
}

// quiver points

template <ExactField K>
json to_json(const QuiverPoint<K>& pt) {
  json arrows = json::object();
  for (std::size_t i = 0; i < pt.A.size(); ++i) arrows["a" + std::to_string(i + 1)] = to_json(pt.A[i]);
  for (std::size_t i = 0; i < pt.B.size(); ++i) arrows["b" + std::to_string(i + 1)] = to_json(pt.B[i]);
  for (const auto& x : pt.pres.punctures) {
    arrows["c_" + x + "_in"] = to_json(pt.c_in.at(x));
    arrows["c_" + x + "_out"] = to_json(pt.c_out.at(x));
  }
  return json{{"genus", pt.pres.genus}, {"punctures", pt.pres.punctures}, {"arrows", arrows}};
}

template <ExactField K>
QuiverPoint<K> point_from_json(const json& j) {
  if (!j.contains("arrows")) fail_input("quiver point JSON needs arrows");
  QuiverPoint<K> pt;
  std::size_t genus = j.value("genus", 0);
  std::vector<std::string> punctures;
  if (j.contains("punctures")) {
    punctures = j.at("punctures").get<std::vector<std::string>>();
  } else {
    for (const auto& [name, m] : j.at("arrows").items()) {
      if (name.rfind("c_", 0) == 0 && name.size() > 5 && name.substr(name.size() - 3) == "_in")
        punctures.push_back(name.substr(2, name.size() - 5));
    }
  }
  pt.pres = SurfacePresentation(genus, punctures);
  const json& arrows = j.at("arrows");
  for (std::size_t i = 1; i <= genus; ++i) {
    pt.A.push_back(matrix_from_json<K>(arrows.at("a" + std::to_string(i))));
    pt.B.push_back(matrix_from_json<K>(arrows.at("b" + std::to_string(i))));
  }
  for (const auto& x : pt.pres.punctures) {
    pt.c_in.emplace(x, matrix_from_json<K>(arrows.at("c_" + x + "_in")));
    pt.c_out.emplace(x, matrix_from_json<K>(arrows.at("c_" + x + "_out")));
  }
  if (!pt.relation_holds()) fail_pre("quiver point violates the relation");
  return pt;
}

// cocharacters

template <ExactField K>
json to_json(const GradedCocharacter<K>& mu) {
  json weights = json::array(), mults = json::array();
  for (const auto& [w, m] : mu.weight_groups()) {
    weights.push_back(w);
    mults.push_back(m);
  }
  return json{{"weights", weights}, {"mults", mults}, {"basis", to_json(mu.basis())}};
}

template <ExactField K>
GradedCocharacter<K> cocharacter_from_json(const json& j) {
  if (!j.contains("weights") || !j.contains("mults") || !j.contains("basis"))
    fail_input("cocharacter JSON needs weights, mults, basis");
  std::vector<std::pair<long, std::size_t>> wm;
  for (std::size_t i = 0; i < j.at("weights").size(); ++i)
    wm.emplace_back(j.at("weights")[i].get<long>(), j.at("mults")[i].get<std::size_t>());
  return GradedCocharacter<K>(std::move(wm), matrix_from_json<K>(j.at("basis")));
}

template <ExactField K>
GaugeCocharacter<K> gauge_cocharacter_from_json(const json& j,
                                                const std::vector<std::string>& punctures) {
  if (!j.contains("v0")) fail_input("gauge cocharacter JSON needs a v0 entry");
  GaugeCocharacter<K> mu{cocharacter_from_json<K>(j.at("v0")), {}};
  for (const auto& x : punctures) {
    if (!j.contains(x)) fail_input("gauge cocharacter JSON missing vertex " + x);
    mu.vx.emplace(x, cocharacter_from_json<K>(j.at(x)));
  }
  return mu;
}

// weighted-flag data without a representation (theta.json, gamma.json)

template <ExactField K>
std::map<std::string, WeightedFlag<K>> flag_map_from_json(const json& j, const K& proto) {
  std::map<std::string, WeightedFlag<K>> out;
  for (const auto& [x, fj] : j.items()) out.emplace(x, weighted_flag_from_json<K>(fj, 0, proto));
  return out;
}

template <ExactField K>
TypeData<K> type_from_flag_map(const std::map<std::string, WeightedFlag<K>>& flags) {
  TypeData<K> type;
  for (const auto& [x, wf] : flags) type.emplace(x, ParabolicGL<K>(wf.flag));
  return type;
}

// monodromy data: per puncture the diagonal blocks in flag-step order

template <ExactField K>
json to_json(const MonodromyDatum<K>& m, const TypeData<K>& gamma) {
  json j = json::object();
  for (const auto& [x, p] : gamma) {
    Matrix<K> conj = p.adapted_inv() * m.levi.at(x) * p.adapted();
    json blocks = json::array();
    for (std::size_t step = 1; step <= p.num_blocks(); ++step)
      blocks.push_back(to_json(p.block_of_adapted(conj, p.flag().block_of_step(step))));
    j[x] = json{{"blocks", blocks}};
  }
  return j;
}

template <ExactField K>
MonodromyDatum<K> monodromy_from_json(const json& j, const TypeData<K>& gamma) {
  MonodromyDatum<K> m;
  for (const auto& [x, p] : gamma) {
    if (!j.contains(x)) fail_input("monodromy JSON missing puncture " + x);
    const json& blocks = j.at(x).at("blocks");
    if (blocks.size() != p.num_blocks()) fail_input("wrong number of monodromy blocks at " + x);
    std::size_t n = p.ambient();
    const K proto = p.flag().proto();
    Matrix<K> diag(n, n, proto.zero());
    for (std::size_t step = 1; step <= p.num_blocks(); ++step) {
      Matrix<K> blk = matrix_from_json<K>(blocks[step - 1]);
      std::size_t b = p.flag().block_of_step(step);
      std::size_t off = p.block_offset(b);
      if (blk.rows() != p.block_dim(b)) fail_input("monodromy block size mismatch at " + x);
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t k = 0; k < blk.cols(); ++k) diag.at(off + i, off + k) = blk.at(i, k);
    }
    m.levi.emplace(x, p.adapted() * diag * p.adapted_inv());
  }
  return m;
}

// stability verdicts

template <ExactField K>
json to_json(const StabilityVerdict<K>& v) {
  json j;
  j["class"] = v.class_name();
  if (v.witness) {
    j["witness"] = json{{"subspace", to_json(v.witness->basis())},
                        {"degree", v.witness_degree.str()},
                        {"rank", v.witness_rank}};
  } else {
    j["witness"] = nullptr;
  }
  j["certificate"] = v.certificate_complete ? "complete" : "incomplete";
  return j;
}

}  // namespace fls
