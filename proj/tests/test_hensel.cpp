#include <catch2/catch_amalgamated.hpp>

#include "neron/hensel.hpp"
#include "neron/parse.hpp"
#include "test_support.hpp"

using namespace neron;
using neron::testing::Rng;

namespace {

RingPtr line_ring() {
  return Ring::make({FieldKind::Rational, 0},
                    {{"x", 1, BlockRole::Base}, {"Z", 1, BlockRole::Tower}});
}
RingPtr pair_ring() {
  return Ring::make({FieldKind::Rational, 0},
                    {{"x", 1, BlockRole::Base}, {"Z", 2, BlockRole::Tower}});
}

// Independent oracle for the square root of 1 + u: the coefficients of the
// binomial series obey c_0 = 1, c_{k+1} = c_k * (1/2 - k) / (k + 1).
std::vector<Rat> sqrt_series_coeffs(int n) {
  std::vector<Rat> c{Rat(1)};
  for (int k = 0; k + 1 < n; ++k)
    c.push_back(c.back() * (Rat(1, 2) - Rat(k)) / Rat(k + 1));
  return c;
}

// The series with coefficients c composed with u, truncated at base order n.
Poly<Rat> compose_series(const std::vector<Rat>& c, const Poly<Rat>& u, long n) {
  Poly<Rat> acc = Poly<Rat>::zero(u.ring());
  Poly<Rat> upow = Poly<Rat>::constant(u.ring(), Rat(1));
  for (size_t k = 0; k < c.size(); ++k) {
    acc = acc + upow.scaled(c[k]);
    upow = (upow * u).truncate_base(n);
  }
  return acc.truncate_base(n);
}

long residual_order(const std::vector<Poly<Rat>>& g,
                    const std::map<int, Jet<Rat>>& z) {
  long o = kOrdInf;
  for (const auto& f : g) {
    Jet<Rat> r = evaluate_jet(f, z, kOrdInf);
    if (!r.val.is_zero()) o = std::min(o, r.val.base_order());
  }
  return o;
}

}  // namespace

TEST_CASE("binomial series coefficients match their frozen values") {
  auto c = sqrt_series_coeffs(8);
  std::vector<Rat> frozen{Rat(1),       Rat(1, 2),   Rat(-1, 8),
                          Rat(1, 16),   Rat(-5, 128), Rat(7, 256),
                          Rat(-21, 1024), Rat(33, 2048)};
  REQUIRE(c.size() == frozen.size());
  for (size_t k = 0; k < frozen.size(); ++k) CHECK(c[k] == frozen[k]);
}

TEST_CASE("lifting a square root reproduces the binomial series") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1")};
  auto x1 = Poly<Rat>::variable(R, R->var("x1"));

  SECTION("low precision agrees with the closed form") {
    std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))}};
    auto res = newton_lift(g, {zv}, z0, 3);
    CHECK(res.images.at(zv).val == compose_series(sqrt_series_coeffs(3), x1, 3));
  }
  SECTION("eight coefficients agree with the recurrence") {
    std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))}};
    auto res = newton_lift(g, {zv}, z0, 8);
    const Poly<Rat>& z = res.images.at(zv).val;
    CHECK(z == compose_series(sqrt_series_coeffs(8), x1, 8));
    Mono m = mono_one(*R);
    m[R->var("x1")] = 7;
    CHECK(z.coeff_of(m) == Rat(33, 2048));
    CHECK(evaluate_jet(g[0], res.images, 8).val.is_zero());
  }
  SECTION("the negative branch follows the initial term") {
    std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(-1)))}};
    auto res = newton_lift(g, {zv}, z0, 6);
    CHECK(res.images.at(zv).val ==
          compose_series(sqrt_series_coeffs(6), x1, 6).scaled(Rat(-1)));
  }
}

TEST_CASE("residual orders double along the lift") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))}};
  auto res = newton_lift(g, {zv}, z0, 16);
  REQUIRE(res.residual_orders.size() >= 2);
  CHECK(res.residual_orders.front() == 1);
  for (size_t i = 0; i + 1 < res.residual_orders.size(); ++i) {
    long next = res.residual_orders[i + 1];
    CHECK(next >= std::min(2 * res.residual_orders[i], long{16}));
  }
  CHECK(res.residual_orders.back() >= 16);
}

TEST_CASE("an exact starting point is returned unchanged") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1-x1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(parse_poly<Rat>(R, "x1"))}};
  auto res = newton_lift(g, {zv}, z0, 5);
  CHECK(res.images.at(zv).val == parse_poly<Rat>(R, "x1"));
  CHECK(res.residual_orders == std::vector<long>{kOrdInf});
}

TEST_CASE("a linear equation is solved in one step") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1-x1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::zero(R))}};
  auto res = newton_lift(g, {zv}, z0, 5);
  CHECK(res.images.at(zv).val == parse_poly<Rat>(R, "x1"));
  CHECK(res.residual_orders.front() == 1);
}

TEST_CASE("lifting is idempotent and unique at the working precision") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))}};
  auto once = newton_lift(g, {zv}, z0, 8);
  auto again = newton_lift(g, {zv}, once.images, 8);
  CHECK(again.images.at(zv).val == once.images.at(zv).val);
  CHECK(again.residual_orders == std::vector<long>{kOrdInf});
  auto rerun = newton_lift(g, {zv}, z0, 8);
  CHECK(rerun.images.at(zv).val == once.images.at(zv).val);
}

TEST_CASE("passthrough coordinates stay fixed and feed the solved series") {
  auto R = pair_ring();
  int z1 = R->var("Z1"), z2 = R->var("Z2");
  // Z1^2 = 1 + x1*(1 + Z2) with Z2 frozen at x1, so Z1 = sqrt(1 + x1 + x1^2).
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1-x1*Z2")};
  std::map<int, Jet<Rat>> z0{
      {z1, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))},
      {z2, Jet<Rat>::of(parse_poly<Rat>(R, "x1"))}};
  auto res = newton_lift(g, {z1}, z0, 8);
  CHECK(res.images.at(z2).val == parse_poly<Rat>(R, "x1"));
  auto u = parse_poly<Rat>(R, "x1+x1^2");
  CHECK(res.images.at(z1).val == compose_series(sqrt_series_coeffs(8), u, 8));
  CHECK(residual_order(g, res.images) >= 8);
}

TEST_CASE("random radicands still match the composed binomial series") {
  auto R = line_ring();
  int zv = R->var("Z1");
  Rng rng(97);
  int xv = R->var("x1");
  for (int round = 0; round < 5; ++round) {
    // u random with u(0) = 0, so 1 + u has the branch through 1.
    Poly<Rat> u = Poly<Rat>::zero(R);
    for (int d = 1; d <= 3; ++d) {
      long c = static_cast<long>(rng.next() % 7) - 3;
      if (c == 0) continue;
      Mono m = mono_one(*R);
      m[xv] = d;
      u = u + Poly<Rat>::monomial(R, m, Rat(c));
    }
    if (u.is_zero()) u = Poly<Rat>::variable(R, xv);
    auto one = Poly<Rat>::constant(R, Rat(1));
    auto zsq = Poly<Rat>::variable(R, zv) * Poly<Rat>::variable(R, zv);
    auto g = std::vector<Poly<Rat>>{zsq - one - u};
    std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(one)}};
    auto res = newton_lift(g, {zv}, z0, 10);
    CHECK(res.images.at(zv).val == compose_series(sqrt_series_coeffs(10), u, 10));
  }
}

TEST_CASE("a two by two system lifts both coordinates at once") {
  auto R = pair_ring();
  int z1 = R->var("Z1"), z2 = R->var("Z2");
  // Z1 = sqrt(1 + x1) and Z2 = Z1 + x1^2 are coupled through the second row.
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1"),
                                  parse_poly<Rat>(R, "Z2-Z1-x1^2")};
  std::map<int, Jet<Rat>> z0{
      {z1, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))},
      {z2, Jet<Rat>::of(Poly<Rat>::constant(R, Rat(1)))}};
  auto res = newton_lift(g, {z1, z2}, z0, 8);
  auto x1 = Poly<Rat>::variable(R, R->var("x1"));
  auto root = compose_series(sqrt_series_coeffs(8), x1, 8);
  CHECK(res.images.at(z1).val == root);
  CHECK(res.images.at(z2).val == (root + x1 * x1).truncate_base(8));
}

TEST_CASE("a singular selected minor is rejected") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-x1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::zero(R))}};
  CHECK_THROWS_WITH(newton_lift(g, {zv}, z0, 4),
                    Catch::Matchers::ContainsSubstring("IFT hypothesis fails"));
}

TEST_CASE("a residual of order zero is refused") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1-1")};
  std::map<int, Jet<Rat>> z0{{zv, Jet<Rat>::of(Poly<Rat>::zero(R))}};
  CHECK_THROWS_WITH(newton_lift(g, {zv}, z0, 4),
                    Catch::Matchers::ContainsSubstring("insufficient initial precision"));
}

TEST_CASE("variables without an image are reported by name") {
  auto R = pair_ring();
  int z1 = R->var("Z1");
  auto g = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1-Z2")};
  std::map<int, Jet<Rat>> z0{{z1, Jet<Rat>::of(Poly<Rat>::zero(R))}};
  CHECK_THROWS_WITH(newton_lift(g, {z1}, z0, 4),
                    Catch::Matchers::ContainsSubstring("Z2"));
}

TEST_CASE("presentation images lift through the quotient") {
  auto R = line_ring();
  int zv = R->var("Z1");
  auto rel = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1-x1")};
  auto quot = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "x1^3")};

  SECTION("an exact image passes through untouched") {
    std::map<int, Jet<Rat>> zbar{{zv, Jet<Rat>::of(parse_poly<Rat>(R, "x1"))}};
    auto res = lift_presentation_morphism(rel, {zv}, quot, zbar, 6);
    CHECK(res.images.at(zv).val == parse_poly<Rat>(R, "x1"));
  }
  SECTION("a defect inside the quotient is repaired") {
    std::map<int, Jet<Rat>> zbar{{zv, Jet<Rat>::of(parse_poly<Rat>(R, "x1+x1^3"))}};
    auto res = lift_presentation_morphism(rel, {zv}, quot, zbar, 6);
    CHECK(res.images.at(zv).val == parse_poly<Rat>(R, "x1"));
    CHECK(residual_order(rel, res.images) >= 6);
  }
  SECTION("a defect outside the quotient is a precondition error") {
    std::map<int, Jet<Rat>> zbar{{zv, Jet<Rat>::of(parse_poly<Rat>(R, "x1+x1^2"))}};
    CHECK_THROWS_WITH(lift_presentation_morphism(rel, {zv}, quot, zbar, 6),
                      Catch::Matchers::ContainsSubstring("modulo the quotient"));
  }
}

TEST_CASE("quotient lifting accepts curved quotients and deep defects") {
  auto R = line_ring();
  int zv = R->var("Z1");
  // The relation pins Z to the square root branch; the defect sits in (x1^4).
  auto rel = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "Z1^2-1-x1")};
  auto quot = std::vector<Poly<Rat>>{parse_poly<Rat>(R, "x1^4")};
  auto x1 = Poly<Rat>::variable(R, R->var("x1"));
  auto truth = compose_series(sqrt_series_coeffs(8), x1, 8);
  std::map<int, Jet<Rat>> zbar{
      {zv, Jet<Rat>::of(truth.truncate_base(4) + parse_poly<Rat>(R, "x1^5"))}};
  auto res = lift_presentation_morphism(rel, {zv}, quot, zbar, 8);
  CHECK(res.images.at(zv).val == truth);
}
