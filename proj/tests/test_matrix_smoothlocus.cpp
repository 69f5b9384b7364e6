#include <catch2/catch_amalgamated.hpp>

#include "neron/matrix.hpp"
#include "neron/parse.hpp"
#include "neron/smoothlocus.hpp"
#include "test_support.hpp"

using namespace neron;
using neron::testing::Rng;
using neron::testing::random_poly;

namespace {

RingPtr rat_ring(int nbase) {
  return Ring::make({FieldKind::Rational, 0}, {{"x", nbase, BlockRole::Base}});
}
RingPtr fp_ring() {
  return Ring::make({FieldKind::Prime, 101}, {{"x", 2, BlockRole::Base}});
}
RingPtr yring() {
  return Ring::make({FieldKind::Rational, 0},
                    {{"x", 1, BlockRole::Base}, {"Y", 4, BlockRole::Tower}});
}

template <class K>
Grid<Poly<K>> random_grid(const RingPtr& r, Rng& rng, size_t n, int nterms, int maxdeg) {
  Grid<Poly<K>> m(n, std::vector<Poly<K>>(n, Poly<K>::zero(r)));
  for (auto& row : m)
    for (auto& e : row) e = random_poly<K>(r, rng, nterms, maxdeg);
  return m;
}

}  // namespace

TEST_CASE("exact division of polynomials") {
  auto r = rat_ring(2);
  auto q = exact_divide(parse_poly<Rat>(r, "x1^2-x2^2"), parse_poly<Rat>(r, "x1-x2"));
  CHECK(to_string(q) == "x1+x2");
  CHECK(!try_exact_divide(parse_poly<Rat>(r, "x1^2+x2"), parse_poly<Rat>(r, "x1-x2"))
             .has_value());
  // division also works when the local order puts the constant term in front
  auto u = exact_divide(parse_poly<Rat>(r, "1-x1^2"), parse_poly<Rat>(r, "1-x1"));
  CHECK(to_string(u) == "1+x1");
}

TEST_CASE("two by two determinant and adjugate in closed form") {
  auto r = rat_ring(4);
  Grid<Poly<Rat>> m = {{parse_poly<Rat>(r, "x1"), parse_poly<Rat>(r, "x2")},
                       {parse_poly<Rat>(r, "x3"), parse_poly<Rat>(r, "x4")}};
  CHECK(det(m, r) == parse_poly<Rat>(r, "x1*x4-x2*x3"));
  auto a = adjugate(m, r);
  CHECK(to_string(a[0][0]) == "x4");
  CHECK(to_string(a[0][1]) == "-x2");
  CHECK(to_string(a[1][0]) == "-x3");
  CHECK(to_string(a[1][1]) == "x1");
}

TEST_CASE("laplace and fraction-free elimination agree") {
  auto r = rat_ring(3);
  Rng rng(2024);
  for (int round = 0; round < 4; ++round) {
    auto m = random_grid<Rat>(r, rng, 4, 2, 2);
    // plant some zeros so the sparse path has structure to use
    m[0][1] = Poly<Rat>::zero(r);
    m[2][0] = Poly<Rat>::zero(r);
    auto dl = laplace_det(m, Poly<Rat>::zero(r));
    auto db = bareiss_det(m, r);
    CHECK(dl == db);
  }
}

TEST_CASE("adjugate law over a prime field and over the rationals") {
  auto rp = fp_ring();
  auto rq = rat_ring(2);
  Rng rng(99);
  for (int round = 0; round < 5; ++round) {
    auto m = random_grid<Fp>(rp, rng, 3, 2, 2);
    auto a = adjugate(m, rp);
    auto prod = mat_mul(a, m, Poly<Fp>::zero(rp));
    auto d = det(m, rp);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) CHECK(prod[i][j] == (i == j ? d : Poly<Fp>::zero(rp)));
  }
  for (int round = 0; round < 3; ++round) {
    auto m = random_grid<Rat>(rq, rng, 3, 2, 2);
    auto a = adjugate(m, rq);
    auto prod = mat_mul(m, a, Poly<Rat>::zero(rq));
    auto d = det(m, rq);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) CHECK(prod[i][j] == (i == j ? d : Poly<Rat>::zero(rq)));
  }
}

TEST_CASE("jacobian of a presentation") {
  auto r = yring();
  auto f = parse_poly<Rat>(r, "Y1*Y2-Y3*Y4");
  auto vars = r->block_vars("Y");
  auto J = jacobian<Rat>({f}, vars);
  REQUIRE(J.size() == 1);
  CHECK(to_string(J[0][0]) == "Y2");
  CHECK(to_string(J[0][1]) == "Y1");
  CHECK(to_string(J[0][2]) == "-Y4");
  CHECK(to_string(J[0][3]) == "-Y3");
}

TEST_CASE("completing a wide matrix to a square one preserves the chosen minor") {
  auto r = yring();
  auto f = parse_poly<Rat>(r, "Y1*Y2-x1^2");
  auto J = jacobian<Rat>({f}, r->block_vars("Y"));

  auto h1 = complete_to_square(J, {0}, r);
  CHECK(to_string(det(h1, r)) == "Y2");
  auto h2 = complete_to_square(J, {1}, r);
  CHECK(to_string(det(h2, r)) == "Y1");
  // the filled-in unit row carries the sign that keeps the determinant equal
  // to the minor itself, not its negative
  CHECK(to_string(h2[1][0]) == "-1");
  CHECK(to_string(h2[1][1]) == "0");

  Rng rng(7);
  for (int round = 0; round < 6; ++round) {
    Grid<Poly<Rat>> m(2, std::vector<Poly<Rat>>(4, Poly<Rat>::zero(r)));
    for (auto& row : m)
      for (auto& e : row) e = random_poly<Rat>(r, rng, 2, 2);
    std::vector<int> cols = (round % 3 == 0) ? std::vector<int>{0, 2}
                          : (round % 3 == 1) ? std::vector<int>{1, 3}
                                             : std::vector<int>{0, 3};
    auto h = complete_to_square(m, cols, r);
    CHECK(det(h, r) == minor_on_columns(m, cols, r));
  }
}

TEST_CASE("determinants of unit-heavy matrices stay cheap") {
  auto r = yring();
  size_t n = 20;
  Grid<Poly<Rat>> m(n, std::vector<Poly<Rat>>(n, Poly<Rat>::zero(r)));
  Rng rng(13);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = random_poly<Rat>(r, rng, 2, 2);
  for (size_t i = 4; i < n; ++i) m[i][i] = Poly<Rat>::from_long(r, (i % 2) ? 1 : -1);
  auto d = det(m, r);
  Grid<Poly<Rat>> core(4, std::vector<Poly<Rat>>(4, Poly<Rat>::zero(r)));
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) core[i][j] = m[i][j];
  auto expect = laplace_det(core, Poly<Rat>::zero(r));
  // the trailing unit diagonal contributes only its sign
  int sign = 1;
  for (size_t i = 4; i < n; ++i)
    if (i % 2 == 0) sign = -sign;
  CHECK(d == (sign == 1 ? expect : -expect));
}

TEST_CASE("series determinant matches the truncated symbolic determinant") {
  auto r = rat_ring(2);
  Grid<Poly<Rat>> m = {{parse_poly<Rat>(r, "1+x1"), parse_poly<Rat>(r, "x2")},
                       {parse_poly<Rat>(r, "x1*x2"), parse_poly<Rat>(r, "1")}};
  Grid<Jet<Rat>> jm(2, std::vector<Jet<Rat>>(2, Jet<Rat>::of(Poly<Rat>::zero(r), 3)));
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) jm[i][j] = Jet<Rat>::of(m[i][j], 3);
  auto dj = det_jet(jm, r, 3);
  auto sym = Jet<Rat>::of(det(m, r), 3);
  CHECK(dj.val == sym.val);

  // a matrix whose pivots only become units after a row swap
  Grid<Jet<Rat>> sw = {{Jet<Rat>::of(parse_poly<Rat>(r, "x1"), 3),
                        Jet<Rat>::of(parse_poly<Rat>(r, "1+x2"), 3)},
                       {Jet<Rat>::of(parse_poly<Rat>(r, "1"), 3),
                        Jet<Rat>::of(parse_poly<Rat>(r, "x2"), 3)}};
  auto ds = det_jet(sw, r, 3);
  CHECK(ds.val == parse_poly<Rat>(r, "x1*x2-1-x2"));
}

TEST_CASE("matrix application skips structural zeros") {
  auto r = rat_ring(2);
  Grid<Poly<Rat>> m = {{parse_poly<Rat>(r, "x1"), Poly<Rat>::zero(r)},
                       {Poly<Rat>::zero(r), parse_poly<Rat>(r, "x2")}};
  std::vector<Poly<Rat>> v = {parse_poly<Rat>(r, "1+x2"), parse_poly<Rat>(r, "x1")};
  auto out = mat_apply(m, v, Poly<Rat>::zero(r));
  CHECK(to_string(out[0]) == "x1+x1*x2");
  CHECK(to_string(out[1]) == "x1*x2");
}

TEST_CASE("delta ideal of the quadric cone is the irrelevant ideal") {
  auto r = yring();
  auto g = parse_poly<Rat>(r, "Y1*Y2-Y3*Y4");
  Ideal<Rat> I(r, {g});
  auto D = delta_ideal<Rat>(r, {g}, I, r->block_vars("Y"));
  Ideal<Rat> irrelevant(r, {parse_poly<Rat>(r, "Y1"), parse_poly<Rat>(r, "Y2"),
                            parse_poly<Rat>(r, "Y3"), parse_poly<Rat>(r, "Y4")});
  CHECK(ideal_equal(D, irrelevant));
}

TEST_CASE("delta ideal picks up the colon factor and the minor") {
  auto r = Ring::make({FieldKind::Rational, 0},
                      {{"x", 1, BlockRole::Base}, {"Y", 1, BlockRole::Tower}});
  auto y = parse_poly<Rat>(r, "Y1");

  // hypersurface with a critical point: the derivative survives as generator
  auto ysq = parse_poly<Rat>(r, "Y1^2");
  auto D = delta_ideal<Rat>(r, {ysq}, Ideal<Rat>(r, {ysq}), r->block_vars("Y"));
  CHECK(ideal_equal(D, Ideal<Rat>(r, {y})));

  // smooth hypersurface: the whole ring
  auto Ds = delta_ideal<Rat>(r, {y}, Ideal<Rat>(r, {y}), r->block_vars("Y"));
  CHECK(is_member(Poly<Rat>::from_long(r, 1), Ds));
}

TEST_CASE("colon ideals grow when the system grows") {
  auto r = Ring::make({FieldKind::Rational, 0},
                      {{"x", 1, BlockRole::Base}, {"Y", 2, BlockRole::Tower}});
  auto g1 = parse_poly<Rat>(r, "Y1^2");
  auto g2 = parse_poly<Rat>(r, "Y1*Y2");
  Ideal<Rat> I(r, {g1, g2});
  auto c1 = colon(Ideal<Rat>(r, {g1}), I);
  auto c2 = colon(Ideal<Rat>(r, {g1, g2}), I);
  CHECK(ideal_contains(c2, c1));
  CHECK(!ideal_contains(c1, c2));
}

TEST_CASE("minor system satisfies the block identities") {
  auto r = yring();
  auto g = parse_poly<Rat>(r, "Y1*Y2-Y3*Y4");
  auto vars = r->block_vars("Y");
  auto J = jacobian<Rat>({g}, vars);

  auto sys = make_minor_system(r, J, {0}, Poly<Rat>::from_long(r, 1));
  CHECK(to_string(sys.M) == "Y2");
  auto rep = verify_minor_identities(sys, J, r);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
}

TEST_CASE("minor system checks fail on a tampered matrix") {
  auto r = yring();
  auto f1 = parse_poly<Rat>(r, "Y1*Y2-Y3*Y4");
  auto f2 = parse_poly<Rat>(r, "Y1*Y3-x1*Y4");
  auto vars = r->block_vars("Y");
  auto J = jacobian<Rat>({f1, f2}, vars);

  auto sys = make_minor_system(r, J, {1, 2}, parse_poly<Rat>(r, "Y4"));
  CHECK(det(sys.H, r) == sys.M);
  CHECK(verify_minor_identities(sys, J, r).ok);

  sys.G[2][3] += Poly<Rat>::from_long(r, 1);
  auto rep = verify_minor_identities(sys, J, r);
  CHECK(!rep.ok);
  CHECK(!rep.failures.empty());
}

TEST_CASE("minor systems hold for every column choice of a random wide matrix") {
  auto r = yring();
  Rng rng(41);
  for (int round = 0; round < 4; ++round) {
    Grid<Poly<Rat>> J(2, std::vector<Poly<Rat>>(4, Poly<Rat>::zero(r)));
    for (auto& row : J)
      for (auto& e : row) e = random_poly<Rat>(r, rng, 2, 2);
    std::vector<int> cols = (round % 2 == 0) ? std::vector<int>{0, 2}
                                             : std::vector<int>{1, 3};
    auto sys = make_minor_system(r, J, cols, random_poly<Rat>(r, rng, 2, 1));
    CHECK(verify_minor_identities(sys, J, r).ok);
  }
}

TEST_CASE("smooth locus ideal of a smooth pair is the unit ideal") {
  auto r = Ring::make({FieldKind::Rational, 0},
                      {{"x", 1, BlockRole::Base}, {"Y", 2, BlockRole::Tower}});
  std::vector<Poly<Rat>> gens = {parse_poly<Rat>(r, "Y1"), parse_poly<Rat>(r, "Y2")};
  auto H = smooth_locus_ideal<Rat>(r, gens, r->block_vars("Y"));
  CHECK(is_member(Poly<Rat>::from_long(r, 1), H));
}

TEST_CASE("smooth locus ideal of the quadric cone vanishes exactly at the vertex") {
  auto r = yring();
  std::vector<Poly<Rat>> gens = {parse_poly<Rat>(r, "Y1*Y2-Y3*Y4")};
  auto H = smooth_locus_ideal<Rat>(r, gens, r->block_vars("Y"));
  for (const char* name : {"Y1", "Y2", "Y3", "Y4"})
    CHECK(is_member(parse_poly<Rat>(r, name), H));
  CHECK(!is_member(Poly<Rat>::from_long(r, 1), H));
}

TEST_CASE("block adjugate agrees with cofactor expansion on unit-heavy matrices") {
  auto r = yring();
  Rng rng(4242);
  for (int round = 0; round < 6; ++round) {
    size_t n = 5 + static_cast<size_t>(rng.below(2));
    Grid<Poly<Rat>> m(n, std::vector<Poly<Rat>>(n, Poly<Rat>::zero(r)));
    // a few dense rows, the rest unit rows on a random column permutation
    std::vector<size_t> cols(n);
    for (size_t j = 0; j < n; ++j) cols[j] = j;
    for (size_t j = n; j > 1; --j) std::swap(cols[j - 1], cols[rng.below(static_cast<long>(j))]);
    size_t dense = 2 + static_cast<size_t>(rng.below(2));
    for (size_t i = 0; i < n; ++i) {
      if (i < dense) {
        for (size_t j = 0; j < n; ++j)
          m[i][j] = random_poly<Rat>(r, rng, 2, 2);
      } else {
        long sg = rng.below(2) ? 1 : -1;
        m[i][cols[i]] = Poly<Rat>::from_long(r, sg);
      }
    }
    Grid<Poly<Rat>> fast = adjugate(m, r);
    Grid<Poly<Rat>> slow = detail::cofactor_adjugate(m, r);
    CHECK(fast == slow);
    Poly<Rat> dm = det(m, r);
    Grid<Poly<Rat>> prod = mat_mul(fast, m, Poly<Rat>::zero(r));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        CHECK(prod[i][j] == (i == j ? dm : Poly<Rat>::zero(r)));
  }
}

TEST_CASE("block adjugate handles repeated unit columns and pure permutations") {
  auto r = rat_ring(1);
  // two unit rows sharing a column: the matrix is singular but the adjugate law holds
  Grid<Poly<Rat>> shared = {
      {Poly<Rat>::from_long(r, 1), Poly<Rat>::zero(r), Poly<Rat>::zero(r)},
      {Poly<Rat>::from_long(r, 1), Poly<Rat>::zero(r), Poly<Rat>::zero(r)},
      {Poly<Rat>::zero(r), parse_poly<Rat>(r, "x1"), Poly<Rat>::from_long(r, 2)}};
  CHECK(adjugate(shared, r) == detail::cofactor_adjugate(shared, r));
  // pure signed permutation: the core is empty
  Grid<Poly<Rat>> perm = {
      {Poly<Rat>::zero(r), Poly<Rat>::from_long(r, 1)},
      {Poly<Rat>::from_long(r, -1), Poly<Rat>::zero(r)}};
  CHECK(adjugate(perm, r) == detail::cofactor_adjugate(perm, r));
}
