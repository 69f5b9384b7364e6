#include <catch2/catch_amalgamated.hpp>

#include "neron/desing.hpp"
#include "neron/parse.hpp"
#include "test_support.hpp"

using namespace neron;
using Catch::Matchers::ContainsSubstring;

namespace {

Poly<Rat> pp(const RingPtr& r, const std::string& s) { return parse_poly<Rat>(r, s); }

// A = K[x1] localized at the origin, B = A[Y1,Y2]/(Y1Y2 - x1^2), morphism
// Y -> (x1, x1).  Single minor system on the Y1-column: M = Y2, N = 1,
// d = x1, e = 1.  Every expected value in the cases below is frozen from an
// independent hand computation of the construction.
ExtensionInput<Rat> curve_input() {
  auto ring = Ring::make({FieldKind::Rational, 0},
                         {{"x", 1, BlockRole::Base},
                          {"Y", 2, BlockRole::Tower},
                          {"T", 2, BlockRole::Tangent}});
  ExtensionInput<Rat> in;
  in.ring = ring;
  in.xvars = {ring->var("x1")};
  in.yvars = {ring->var("Y1"), ring->var("Y2")};
  in.tvars = {ring->var("T1"), ring->var("T2")};
  in.I = {pp(ring, "Y1*Y2-x1^2")};
  in.f_rows = {0};
  auto jac = jacobian(in.I, in.yvars);
  in.systems = {make_minor_system(ring, jac, {0}, pp(ring, "1"))};
  in.d = pp(ring, "x1");
  in.e = 1;
  in.yprime = {pp(ring, "x1"), pp(ring, "x1")};
  in.ybar = in.yprime;
  in.precision = 12;
  in.target_c = 12;
  return in;
}

// d a unit: B = A[Y1]/(Y1^2 - Y1) with the section Y1 -> 1.  The minor is
// the derivative 2Y1 - 1, a unit at the section, and d = 1 collapses every
// power of d in the construction.
ExtensionInput<Rat> idempotent_input() {
  auto ring = Ring::make({FieldKind::Rational, 0},
                         {{"x", 1, BlockRole::Base},
                          {"Y", 1, BlockRole::Tower},
                          {"T", 1, BlockRole::Tangent}});
  ExtensionInput<Rat> in;
  in.ring = ring;
  in.xvars = {ring->var("x1")};
  in.yvars = {ring->var("Y1")};
  in.tvars = {ring->var("T1")};
  in.I = {pp(ring, "Y1^2-Y1")};
  in.f_rows = {0};
  auto jac = jacobian(in.I, in.yvars);
  in.systems = {make_minor_system(ring, jac, {0}, pp(ring, "1"))};
  in.d = pp(ring, "1");
  in.e = 1;
  in.yprime = {pp(ring, "1")};
  in.ybar = in.yprime;
  in.precision = 8;
  in.target_c = 8;
  return in;
}

}  // namespace

TEST_CASE("tangent slot layout shares the first r columns") {
  CHECK(t_slot(0, 0, 2, 5) == 0);
  CHECK(t_slot(3, 1, 2, 5) == 1);
  CHECK(t_slot(0, 2, 2, 5) == 2);
  CHECK(t_slot(0, 4, 2, 5) == 4);
  CHECK(t_slot(1, 2, 2, 5) == 5);
  CHECK(t_slot(1, 4, 2, 5) == 7);
  CHECK(t_slot(2, 3, 2, 5) == 9);
}

TEST_CASE("curve seed: construction matches the hand computation") {
  auto in = curve_input();
  const auto& R = in.ring;
  auto P = build_smooth_extension(in);

  CHECK(P.r == 1);
  CHECK(P.n == 2);
  CHECK(P.q == 1);
  CHECK(P.p == 2);
  CHECK(P.pP == 1);
  CHECK(P.e == 1);
  CHECK(P.s == pp(R, "1"));
  REQUIRE(P.b.size() == 1);
  CHECK(P.b[0].is_zero());

  REQUIRE(P.W.size() == 2);
  CHECK(P.W[0] == pp(R, "T1-x1*T2"));
  CHECK(P.W[1] == pp(R, "x1*T2"));

  REQUIRE(P.h.size() == 2);
  CHECK(P.h[0] == pp(R, "Y1-x1-x1*T1+x1^2*T2"));
  CHECK(P.h[1] == pp(R, "Y2-x1-x1^2*T2"));

  REQUIRE(P.Q.size() == 1);
  CHECK(P.Q[0] == pp(R, "x1*T1*T2-x1^2*T2^2"));
  REQUIRE(P.g.size() == 1);
  CHECK(P.g[0] == pp(R, "T1+x1*T1*T2-x1^2*T2^2"));

  REQUIRE(P.sprime.has_value());
  CHECK(*P.sprime == pp(R, "1+x1*T2"));
  REQUIRE(P.sdd.has_value());
  CHECK(*P.sdd == pp(R, "1+x1*T2"));

  REQUIRE(P.pi.size() == 2);
  CHECK(P.pi[0] == Poly<Rat>::variable(R, R->var("Y1")));
  CHECK(P.pi[1] == Poly<Rat>::variable(R, R->var("Y2")));

  // canonical point: Y at the section, every tangent coordinate zero
  CHECK(P.point.at(R->var("Y1")).val == pp(R, "x1"));
  CHECK(P.point.at(R->var("Y2")).val == pp(R, "x1"));
  CHECK(P.point.at(R->var("T1")).val.is_zero());
  CHECK(P.point.at(R->var("T2")).val.is_zero());

  // tower: g rows then h rows, three inverted elements with unit evidence 1
  REQUIRE(P.tower.gh.size() == 3);
  CHECK(P.tower.gh[0] == P.g[0]);
  CHECK(P.tower.gh[1] == P.h[0]);
  CHECK(P.tower.gh[2] == P.h[1]);
  REQUIRE(P.tower.C_inverted.size() == 3);
  CHECK(P.tower.C_inverted[0].name == "s");
  CHECK(P.tower.C_inverted[1].name == "s'");
  CHECK(P.tower.C_inverted[2].name == "s''");
  for (const auto& u : P.tower.C_inverted) CHECK(u.evidence == Rat(1));

  for (const auto& hi : P.h)
    CHECK(evaluate_jet(hi, P.point, P.precision).val.is_zero());
  for (const auto& gi : P.g)
    CHECK(evaluate_jet(gi, P.point, P.precision).val.is_zero());
}

TEST_CASE("curve seed: verifier passes and the ledger records the claims") {
  auto in = curve_input();
  auto P = build_smooth_extension(in);
  auto rep = verify_standard_smooth(P);
  CAPTURE(rep.failures);
  CHECK(rep.ok);

  for (const char* name : {"h(point)", "g(point)", "s-congruence", "b[0]",
                           "taylor-split[0]", "kernel[0]", "diagram"}) {
    CAPTURE(name);
    CHECK(P.ledger.find(name) != nullptr);
  }
  CHECK(P.ledger.find("h(point)")->order >= P.precision);
  CHECK(P.ledger.find("g(point)")->order >=
        P.precision - (P.e + 1) * P.d.base_order());
  CHECK(P.ledger.find("diagram")->order >= P.target_c);
}

TEST_CASE("unit parameter collapses the construction") {
  auto in = idempotent_input();
  const auto& R = in.ring;
  auto P = build_smooth_extension(in);

  CHECK(P.p == 2);
  CHECK(P.pP == 1);
  CHECK(P.s == pp(R, "1"));
  CHECK(P.b[0].is_zero());
  CHECK(P.W[0] == pp(R, "T1"));
  CHECK(P.h[0] == pp(R, "Y1-1-T1"));
  CHECK(P.Q[0] == pp(R, "T1^2"));
  CHECK(P.g[0] == pp(R, "T1+T1^2"));
  REQUIRE(P.sprime.has_value());
  CHECK(*P.sprime == pp(R, "1+2*T1"));
  REQUIRE(P.sdd.has_value());
  CHECK(*P.sdd == pp(R, "1+2*T1"));

  auto rep = verify_standard_smooth(P);
  CAPTURE(rep.failures);
  CHECK(rep.ok);
}

TEST_CASE("parameter hypothesis failure is reported") {
  auto in = curve_input();
  in.d = pp(in.ring, "x1^2");
  CHECK_THROWS_WITH(build_smooth_extension(in),
                    ContainsSubstring("parameter hypothesis violated"));
}

TEST_CASE("defect hypothesis failure is reported, or ledgered above the floor") {
  auto in = curve_input();
  in.yprime = {pp(in.ring, "x1"), pp(in.ring, "2*x1")};
  in.ybar = in.yprime;

  SECTION("strict mode throws") {
    CHECK_THROWS_WITH(build_smooth_extension(in),
                      ContainsSubstring("defect hypothesis violated"));
  }
  SECTION("a defect floor converts the failure into a ledgered zero") {
    in.defect_floor = 2;
    auto P = build_smooth_extension(in);
    CHECK(P.b[0].is_zero());
    const auto* claim = P.ledger.find("b-defect[0]");
    REQUIRE(claim != nullptr);
    CHECK(claim->order == 2);
    auto rep = verify_standard_smooth(P);
    CAPTURE(rep.failures);
    CHECK(rep.ok);
  }
  SECTION("a floor above the defect order still throws") {
    in.defect_floor = 3;
    CHECK_THROWS_WITH(build_smooth_extension(in),
                      ContainsSubstring("defect hypothesis violated"));
  }
}

TEST_CASE("a parameter witness that does not reassemble is rejected") {
  auto in = curve_input();
  in.d_witness = {pp(in.ring, "1")};
  CHECK_THROWS_WITH(build_smooth_extension(in),
                    ContainsSubstring("does not reassemble"));
}

TEST_CASE("verifier notices tampering") {
  auto in = curve_input();
  auto P = build_smooth_extension(in);

  SECTION("mutated g row") {
    P.g[0] += pp(in.ring, "x1^5");
    CHECK_FALSE(verify_standard_smooth(P).ok);
  }
  SECTION("mutated adjugate entry") {
    P.systems[0].G[0][1] += pp(in.ring, "x1");
    CHECK_FALSE(verify_standard_smooth(P).ok);
  }
  SECTION("mutated h row") {
    P.h[1] += pp(in.ring, "x1^4");
    CHECK_FALSE(verify_standard_smooth(P).ok);
  }
  SECTION("mutated Q with a linear tangent term") {
    P.Q[0] += pp(in.ring, "x1*T1");
    CHECK_FALSE(verify_standard_smooth(P).ok);
  }
  SECTION("mutated localized element") {
    REQUIRE(P.sprime.has_value());
    *P.sprime += pp(in.ring, "x1");
    CHECK_FALSE(verify_standard_smooth(P).ok);
  }
}

TEST_CASE("an inflated ledger claim is refuted by recomputation") {
  auto in = curve_input();
  in.yprime = {pp(in.ring, "x1"), pp(in.ring, "2*x1")};
  in.ybar = in.yprime;
  in.defect_floor = 2;
  auto P = build_smooth_extension(in);
  for (auto& c : P.ledger.claims)
    if (c.name == "kernel[0]") c.order = P.precision;
  CHECK_FALSE(verify_standard_smooth(P).ok);
}
