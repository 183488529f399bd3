#include <catch2/catch_amalgamated.hpp>

#include "fls/surface.hpp"
#include "helpers.hpp"

using namespace fls;
using namespace flstest;

namespace {

/// The rank-two representation from the genus-zero three-puncture example:
/// c_{x1} = [[1,1],[0,1]], c_{x2} = [[1,-1],[0,1]], c_{x3} = id.
SurfaceRep<Rat> example_rep() {
  SurfacePresentation pres(0, {"x1", "x2", "x3"});
  GeneratorImages<Rat> gen;
  gen.C.emplace("x1", matQ({{1, 1}, {0, 1}}));
  gen.C.emplace("x2", matQ({{1, -1}, {0, 1}}));
  gen.C.emplace("x3", Matrix<Rat>::identity(2, Rat(1)));
  return SurfaceRep<Rat>(pres, gen);
}

}  // namespace

TEST_CASE("three-puncture unipotent example satisfies the relation") {
  SurfacePresentation pres(0, {"x1", "x2", "x3"});
  GeneratorImages<Rat> gen;
  gen.C.emplace("x1", matQ({{1, 1}, {0, 1}}));
  gen.C.emplace("x2", matQ({{1, -1}, {0, 1}}));
  gen.C.emplace("x3", Matrix<Rat>::identity(2, Rat(1)));
  REQUIRE(verify_relation(pres, gen));
}

TEST_CASE("genus-one identity representation satisfies the relation") {
  SurfacePresentation pres(1, {});
  GeneratorImages<Rat> gen;
  gen.A.push_back(Matrix<Rat>::identity(2, Rat(1)));
  gen.B.push_back(Matrix<Rat>::identity(2, Rat(1)));
  REQUIRE(verify_relation(pres, gen));
}

TEST_CASE("single puncture forces the puncture matrix to be the identity") {
  SurfacePresentation pres(0, {"x"});
  GeneratorImages<Rat> gen;
  gen.C.emplace("x", matQ({{2, 0}, {0, 1}}));
  REQUIRE_FALSE(verify_relation(pres, gen));
  REQUIRE_THROWS_AS(SurfaceRep<Rat>(pres, gen), Error);
}

namespace {

GeneratorImages<Rat> images_of(const SurfaceRep<Rat>& rep) {
  GeneratorImages<Rat> g;
  g.A = rep.A();
  g.B = rep.B();
  for (const auto& x : rep.presentation().punctures) g.C.emplace(x, rep.C(x));
  return g;
}

}  // namespace

TEST_CASE("relation is invariant under simultaneous conjugation") {
  TestRng rng(13);
  auto rep = example_rep();
  for (int t = 0; t < 10; ++t) {
    auto g = random_invertibleQ(rng, 2);
    auto conj = rep.conjugated(g);
    REQUIRE(verify_relation(conj.presentation(), images_of(conj)));
  }
}

TEST_CASE("restriction to the invariant line of the example") {
  auto rep = example_rep();
  auto w = spanOf(matQ({{1, 0}}));
  auto sub = rep.restrict(w);
  REQUIRE(sub.rank() == 1);
  REQUIRE(sub.C("x1") == Matrix<Rat>::identity(1, Rat(1)));
  REQUIRE(sub.C("x2") == Matrix<Rat>::identity(1, Rat(1)));
  REQUIRE(sub.C("x3") == Matrix<Rat>::identity(1, Rat(1)));
}

TEST_CASE("restriction to the full space reproduces the representation") {
  auto rep = example_rep();
  auto sub = rep.restrict(Subspace<Rat>::full(2, Rat(0)));
  REQUIRE(sub.C("x1") == rep.C("x1"));
}

TEST_CASE("restriction to a non-invariant subspace reports a witness") {
  auto rep = example_rep();
  auto w = spanOf(matQ({{0, 1}}));
  try {
    rep.restrict(w);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    REQUIRE(e.kind() == errc::precondition);
    REQUIRE(std::string(e.what()).find("witness") != std::string::npos);
  }
}

TEST_CASE("restrict-then-verify holds for invariant subspaces") {
  auto rep = example_rep();
  auto sub = rep.restrict(spanOf(matQ({{1, 0}})));
  REQUIRE(verify_relation(sub.presentation(), images_of(sub)));
}

TEST_CASE("the example representation is not irreducible") {
  REQUIRE_FALSE(is_irreducible(example_rep()));
}

TEST_CASE("rank-one representations are irreducible") {
  SurfacePresentation pres(0, {"x1", "x2"});
  GeneratorImages<Rat> gen;
  gen.C.emplace("x1", matQ({{3}}));
  gen.C.emplace("x2", matQs({{"1/3"}}));
  REQUIRE(is_irreducible(SurfaceRep<Rat>(pres, gen)));
}

TEST_CASE("irreducibility over F_5 agrees with the exhaustive subspace scan") {
  // swap + non-scalar diagonal generate with no common invariant line
  SurfacePresentation pres(0, {"x1", "x2", "x3"});
  GeneratorImages<Fp> gen;
  auto swap = matF(5, {{0, 1}, {1, 0}});
  auto diag = matF(5, {{2, 0}, {0, 1}});
  auto rest = inverse(swap * diag);
  gen.C.emplace("x1", swap);
  gen.C.emplace("x2", diag);
  gen.C.emplace("x3", rest);
  SurfaceRep<Fp> rep(pres, gen);

  bool scan_irreducible = true;
  for (const auto& s : all_subspaces(2, Fp(5, 0))) {
    if (s.is_zero() || s.is_full()) continue;
    if (s.is_invariant_under(swap) && s.is_invariant_under(diag) && s.is_invariant_under(rest))
      scan_irreducible = false;
  }
  REQUIRE(is_irreducible(rep) == scan_irreducible);
  REQUIRE(is_irreducible(rep));
}

TEST_CASE("quotient representation satisfies the relation and has complementary rank") {
  auto rep = example_rep();
  auto w = spanOf(matQ({{1, 0}}));
  auto q = rep.quotient(w);
  REQUIRE(q.rank() == 1);
  REQUIRE(q.C("x1") == Matrix<Rat>::identity(1, Rat(1)));
}

TEST_CASE("rank-3 irreducibility over F_3 agrees with the exhaustive scan") {
  SurfacePresentation pres(0, {"x1", "x2", "x3"});
  Fp proto(3, 0);
  // 3-cycle and a transvection generate an irreducible triple
  auto cyc = matF(3, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  auto dia = matF(3, {{1, 1, 0}, {0, 1, 0}, {0, 0, 2}});
  GeneratorImages<Fp> gen;
  gen.C.emplace("x1", cyc);
  gen.C.emplace("x2", dia);
  gen.C.emplace("x3", inverse(cyc * dia));
  SurfaceRep<Fp> rep(pres, gen);
  bool scan = true;
  for (const auto& s : all_subspaces(3, proto)) {
    if (s.is_zero() || s.is_full()) continue;
    if (rep.is_invariant(s)) scan = false;
  }
  REQUIRE(is_irreducible(rep) == scan);
}

TEST_CASE("restriction to the zero subspace yields the empty rank-0 representation") {
  auto rep = example_rep();
  auto sub = rep.restrict(Subspace<Rat>::zero(2, Rat(0)));
  REQUIRE(sub.rank() == 0);
}
