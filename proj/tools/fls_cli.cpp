// Command-line front end: exact stability decisions for filtered local
// systems, the quiver-point correspondence, and the agreement-suite
// harness. Exit codes: 0 success/true, 1 negative verdict/false,
// 2 malformed input, 3 precondition failure, 4 incomplete certificate.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "fls/harness.hpp"
#include "fls/json_io.hpp"
#include "fls/rootdatum.hpp"

using namespace fls;

namespace {

int exit_code_of(const Error& e) {
  switch (e.kind()) {
    case errc::bad_input: return 2;
    case errc::precondition: return 3;
    case errc::incomplete: return 4;
  }
  return 3;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_input("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

template <ExactField K>
int run_check_relation(const json& j) {
  try {
    rep_from_json<K>(j);
  } catch (const Error& e) {
    if (e.kind() == errc::precondition &&
        std::string(e.what()).find("relation") != std::string::npos) {
      std::cout << "false\n";
      return 1;
    }
    throw;
  }
  std::cout << "true\n";
  return 0;
}

template <ExactField K>
int run_degree(const json& j) {
  auto fls = fls_from_json<K>(j);
  std::cout << fls.degree().str() << "\n";
  return 0;
}

template <ExactField K>
int run_stability(const json& j, const std::string& method) {
  auto fls = fls_from_json<K>(j);
  StabilityVerdict<K> v;
  if (method == "slope") {
    v = slope_stability(fls);
  } else if (method == "king") {
    v = king_check(rep_to_point(fls), standard_type(fls), chi_theta_of(fls));
  } else if (method == "r") {
    v = r_stability(fls, GroupKind::gl);
  } else {
    fail_input("unknown method " + method + " (expected slope|king|r)");
  }
  std::cout << to_json(v).dump() << "\n";
  return v.cls == StabilityVerdict<K>::Class::unstable ? 1 : 0;
}

template <ExactField K>
int run_lift(const json& j) {
  auto fls = fls_from_json<K>(j);
  std::cout << to_json(rep_to_point(fls)).dump() << "\n";
  return 0;
}

template <ExactField K>
int run_project(const json& j) {
  auto pt = point_from_json<K>(j);
  std::cout << to_json(point_to_rep(pt)).dump() << "\n";
  return 0;
}

template <ExactField K>
int run_pairing(const json& jpoint, const json& jmu, const json& jtheta) {
  auto pt = point_from_json<K>(jpoint);
  auto flags = flag_map_from_json<K>(jtheta, pt.proto());
  auto mu = gauge_cocharacter_from_json<K>(jmu, pt.pres.punctures);
  std::map<std::string, std::vector<Rat>> weights;
  for (const auto& [x, wf] : flags) weights.emplace(x, wf.weights);
  auto chi = chi_theta(weights);
  TypeData<K> type = type_from_flag_map(flags);
  long value = pairing(mu, chi, type);
  json out{{"pairing", value}};
  // cross-check through the degree formula when the flags are compatible
  SurfaceRep<K> rep = point_to_rep(pt);
  std::map<std::string, WeightedFlag<K>> fl;
  for (const auto& [x, wf] : flags) fl.emplace(x, wf);
  try {
    FilteredLocalSystem<K> fls(rep, fl);
    out["degree_formula"] = pairing_via_degree_formula(mu, fls, chi).str();
  } catch (const Error&) {
    out["degree_formula"] = nullptr;
  }
  std::cout << out.dump() << "\n";
  return 0;
}

template <ExactField K>
int run_jh(const json& j) {
  auto fls = fls_from_json<K>(j);
  auto jh = jordan_holder(fls);
  json filt = json::array();
  for (const auto& s : jh.filtration) filt.push_back(to_json(s.basis()));
  json factors = json::array();
  for (const auto& f : jh.factors) factors.push_back(to_json(f));
  std::cout << json{{"filtration", filt}, {"gr", factors}}.dump() << "\n";
  return 0;
}

template <ExactField K>
int run_s_equiv(const json& ja, const json& jb) {
  auto a = fls_from_json<K>(ja);
  auto b = fls_from_json<K>(jb);
  bool eq = s_equivalent(a, b);
  std::cout << (eq ? "true" : "false") << "\n";
  return eq ? 0 : 1;
}

template <ExactField K>
int run_betti(const json& jpoint, const json& jgamma, const json& jm, bool strict) {
  auto pt = point_from_json<K>(jpoint);
  auto flags = flag_map_from_json<K>(jgamma, pt.proto());
  TypeData<K> gamma = type_from_flag_map(flags);
  auto m = monodromy_from_json<K>(jm, gamma);
  bool in = in_betti_locus(pt, gamma, m, strict);
  std::cout << (in ? "true" : "false") << "\n";
  return in ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filtered local systems, quiver points and stability"};
  app.require_subcommand(1);

  std::string file_a, file_b, file_c;
  std::string method = "slope";
  bool strict = false;

  auto* cmd_rel = app.add_subcommand("check-relation", "verify the surface-group relation");
  cmd_rel->add_option("rep", file_a, "representation JSON")->required();

  auto* cmd_deg = app.add_subcommand("degree", "exact parabolic degree");
  cmd_deg->add_option("fls", file_a, "filtered local system JSON")->required();

  auto* cmd_stab = app.add_subcommand("stability", "stability verdict");
  cmd_stab->add_option("fls", file_a, "filtered local system JSON")->required();
  cmd_stab->add_option("--method", method, "slope|king|r")->capture_default_str();

  auto* cmd_lift = app.add_subcommand("lift", "canonical quiver point of a filtered system");
  cmd_lift->add_option("fls", file_a, "filtered local system JSON")->required();

  auto* cmd_proj = app.add_subcommand("project", "surface representation of a quiver point");
  cmd_proj->add_option("point", file_a, "quiver point JSON")->required();

  auto* cmd_pair = app.add_subcommand("pairing", "cocharacter/character pairing + cross-check");
  cmd_pair->add_option("point", file_a, "quiver point JSON")->required();
  cmd_pair->add_option("mu", file_b, "gauge cocharacter JSON")->required();
  cmd_pair->add_option("theta", file_c, "weighted flags JSON")->required();

  auto* cmd_jh = app.add_subcommand("jh", "Jordan-Holder filtration and gr");
  cmd_jh->add_option("fls", file_a, "filtered local system JSON")->required();

  auto* cmd_se = app.add_subcommand("s-equiv", "S-equivalence of two filtered systems");
  cmd_se->add_option("a", file_a, "first system")->required();
  cmd_se->add_option("b", file_b, "second system")->required();

  auto* cmd_bl = app.add_subcommand("betti-locus", "fixed-monodromy Betti locus membership");
  cmd_bl->add_option("point", file_a, "quiver point JSON")->required();
  cmd_bl->add_option("gamma", file_b, "weight data JSON")->required();
  cmd_bl->add_option("M", file_c, "monodromy data JSON")->required();
  cmd_bl->add_flag("--strict-equality", strict, "require literal equality of Levi factors");

  std::string field = "F5";
  std::size_t rank = 2, genus = 0, punctures = 2, samples = 200, pairs = 30;
  std::uint64_t seed = 1;
  double budget = 5e7;
  bool exhaustive = false, timing = false;
  auto* cmd_suite = app.add_subcommand("equivalence-suite", "agreement experiment harness");
  cmd_suite->add_option("--field", field, "F5|F7|Q")->capture_default_str();
  cmd_suite->add_option("--rank", rank)->capture_default_str();
  cmd_suite->add_option("--genus", genus)->capture_default_str();
  cmd_suite->add_option("--punctures", punctures)->capture_default_str();
  cmd_suite->add_flag("--exhaustive", exhaustive, "full scan (rank 2, genus 0, 2 punctures)");
  cmd_suite->add_option("--samples", samples)->capture_default_str();
  cmd_suite->add_option("--pairs", pairs, "S-vs-GIT pair count")->capture_default_str();
  cmd_suite->add_option("--seed", seed)->capture_default_str();
  cmd_suite->add_option("--budget", budget, "orbit enumeration budget")->capture_default_str();
  cmd_suite->add_flag("--timing", timing, "include wall-clock timing in the trailer");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_rel->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_check_relation<Fp>(j);
      return run_check_relation<Rat>(j);
    }
    if (cmd_deg->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_degree<Fp>(j);
      return run_degree<Rat>(j);
    }
    if (cmd_stab->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_stability<Fp>(j, method);
      return run_stability<Rat>(j, method);
    }
    if (cmd_lift->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_lift<Fp>(j);
      return run_lift<Rat>(j);
    }
    if (cmd_proj->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_project<Fp>(j);
      return run_project<Rat>(j);
    }
    if (cmd_pair->parsed()) {
      json jp = load_json(file_a), jm = load_json(file_b), jt = load_json(file_c);
      if (json_uses_fp(jp)) return run_pairing<Fp>(jp, jm, jt);
      return run_pairing<Rat>(jp, jm, jt);
    }
    if (cmd_jh->parsed()) {
      json j = load_json(file_a);
      if (json_uses_fp(j)) return run_jh<Fp>(j);
      return run_jh<Rat>(j);
    }
    if (cmd_se->parsed()) {
      json ja = load_json(file_a), jb = load_json(file_b);
      if (json_uses_fp(ja)) return run_s_equiv<Fp>(ja, jb);
      return run_s_equiv<Rat>(ja, jb);
    }
    if (cmd_bl->parsed()) {
      json jp = load_json(file_a), jg = load_json(file_b), jm = load_json(file_c);
      if (json_uses_fp(jp)) return run_betti<Fp>(jp, jg, jm, strict);
      return run_betti<Rat>(jp, jg, jm, strict);
    }
    if (cmd_suite->parsed()) {
      auto start = std::chrono::steady_clock::now();
      std::vector<harness::SuiteReport> reports;
      if (field == "Q") {
        reports.push_back(harness::suite_stability_equivalence_sampled(Rat(0), rank, genus,
                                                                       punctures, samples, seed));
        reports.push_back(harness::suite_pairing_identity(Rat(0), samples, seed + 1));
      } else if (field == "F5" || field == "F7") {
        std::uint32_t p = field == "F7" ? 7 : 5;
        Fp proto(p, 0);
        if (exhaustive) {
          if (rank != 2 || genus != 0 || punctures != 2)
            fail_input("--exhaustive supports rank 2, genus 0, two punctures");
          reports.push_back(harness::suite_stability_equivalence_exhaustive(p));
        } else {
          reports.push_back(harness::suite_stability_equivalence_sampled(proto, rank, genus,
                                                                         punctures, samples, seed));
        }
        reports.push_back(
            harness::suite_pairing_identity(proto, std::min<std::size_t>(samples, 300), seed + 1));
        reports.push_back(harness::suite_s_vs_git(p, pairs, seed + 2, budget));
      } else {
        fail_input("field must be F5, F7 or Q");
      }
      bool all = true;
      json trailer;
      trailer["reports"] = json::array();
      for (const auto& r : reports) {
        for (const auto& c : r.counterexamples) std::cout << c.dump() << "\n";
        trailer["reports"].push_back(r.summary());
        all = all && r.perfect();
      }
      trailer["all_agree"] = all;
      if (timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        trailer["timing_ms"] = ms;
      }
      std::cout << trailer.dump() << "\n";
      return all ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_of(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
