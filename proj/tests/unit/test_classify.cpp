#include <random>

#include "doctest.h"
#include "subprod/classify.hpp"
#include "test_util.hpp"

using namespace subprod;
using testutil::close;

namespace {

bool collinear(const CVec2& a, const CVec2& b) {
  return 1.0 - std::abs(inner(normalized(a), normalized(b))) <= 1e-10;
}

}  // namespace

TEST_CASE("product structure of the range of beta_{1,1}") {
  SUBCASE("fourth family fixes the second factor") {
    const auto g = generate_canonical(SystemSpec::e4(), 1, 2);
    const auto ps = product_directions(g.system.beta(1, 1));
    REQUIRE(ps.kind == ProductStructure::Kind::SecondFactorFixed);
    CHECK(collinear(ps.fixed, CVec2(1, 0)));

    // oracle: every image of a random domain vector is a product vector
    // sharing the second factor
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const CVec2 v = testutil::random_unit_vec2(rng);
      const CVec4 img = apply(g.system.beta(1, 1), v);
      CHECK(std::abs(reshape_det(img)) <= 1e-14);
      CVec2 u, w;
      CHECK(factor_split(img, u, w) <= 1e-12);
      CHECK(collinear(w, ps.fixed));
    }
  }

  SUBCASE("fifth family fixes the first factor") {
    const auto g = generate_canonical(SystemSpec::e5(), 1, 2);
    const auto ps = product_directions(g.system.beta(1, 1));
    REQUIRE(ps.kind == ProductStructure::Kind::FirstFactorFixed);
    CHECK(collinear(ps.fixed, CVec2(1, 0)));
  }

  SUBCASE("first family has two product lines with collinear factors") {
    const auto g = generate_canonical(SystemSpec::e1(0.4), 1, 2);
    const auto ps = product_directions(g.system.beta(1, 1));
    REQUIRE(ps.kind == ProductStructure::Kind::GenericPair);
    const CVec4 xx = kron(g.basis.x(1), g.basis.x(1));
    const CVec4 yy = normalized(kron(g.basis.y(1), g.basis.y(1)));
    const double m11 = std::abs(inner(ps.dir1, xx));
    const double m12 = std::abs(inner(ps.dir1, yy));
    CHECK((close(m11, 1.0, 1e-10) || close(m12, 1.0, 1e-10)));
    const double m21 = std::abs(inner(ps.dir2, xx));
    const double m22 = std::abs(inner(ps.dir2, yy));
    CHECK((close(m21, 1.0, 1e-10) || close(m22, 1.0, 1e-10)));
    CHECK(ps.discriminant_margin > 1e-3);
  }

  SUBCASE("third family has a double root along x tensor x") {
    const auto g = generate_canonical(SystemSpec::e3(Complex(2, 0)), 1, 2);
    const auto ps = product_directions(g.system.beta(1, 1));
    REQUIRE(ps.kind == ProductStructure::Kind::DoubleRoot);
    CHECK(close(std::abs(inner(ps.dir1, kron(g.basis.x(1), g.basis.x(1)))), 1.0, 1e-10));
  }

  SUBCASE("non-isometric input is rejected") {
    Isometry42 m;
    m.set_column(0, CVec4(0.5, 0, 0, 0));
    m.set_column(1, CVec4(0, 0.5, 0, 0));
    CHECK_THROWS_AS(product_directions(m), Error);
  }
}

TEST_CASE("classification recovers type and parameters") {
  SUBCASE("smallest first-family case") {
    const auto g = generate_canonical(SystemSpec::e1(0.0), 1, 2);
    const auto cls = classify(g.system);
    CHECK(cls.spec.type == SystemType::E1);
    CHECK(cls.spec.a == 0.0);
  }

  SUBCASE("scrambled third family") {
    const auto g = generate_canonical(SystemSpec::e3(Complex(2, 0)), 1, 4);
    const auto cls = classify(scramble(g.system, 404).system);
    REQUIRE(cls.spec.type == SystemType::E3);
    CHECK(std::abs(*cls.spec.lambda - Complex(2, 0)) <= 1e-9);
  }

  SUBCASE("scrambled second family disambiguated from the first") {
    const auto g = generate_canonical(SystemSpec::e2(0.4), 1, 4);
    const auto cls = classify(scramble(g.system, 405).system);
    REQUIRE(cls.spec.type == SystemType::E2);
    CHECK(std::abs(cls.spec.a - 0.4) <= 1e-9);
  }

  SUBCASE("parameter recovery is exact on unscrambled input") {
    const auto e1 = classify(generate_canonical(SystemSpec::e1(0.37), 1, 4).system);
    CHECK(std::abs(e1.spec.a - 0.37) <= 1e-12);
    const auto e3 =
        classify(generate_canonical(SystemSpec::e3(Complex(-0.5, 0.1)), 1, 4).system);
    CHECK(std::abs(*e3.spec.lambda - Complex(-0.5, 0.1)) <= 1e-12);
  }

  SUBCASE("rational grids recover the real-time magnitude and character") {
    const auto g = generate_canonical(SystemSpec::e3_rational(2.0, 1.0), 6, 12);
    const auto cls = classify(g.system);
    REQUIRE(cls.spec.type == SystemType::E3);
    REQUIRE(cls.rational_c.has_value());
    CHECK(close(*cls.rational_c, 2.0, 1e-10));
    REQUIRE(static_cast<int>(cls.eta.size()) == 12);
    for (int k = 1; k <= 12; ++k)
      CHECK(close(cls.eta[static_cast<size_t>(k - 1)],
                  Complex(std::cos(k / 6.0), std::sin(k / 6.0)), 1e-10));
  }

  SUBCASE("minimal horizon suffices for every family") {
    for (const auto& spec :
         {SystemSpec::e1(0.7), SystemSpec::e2(0.7), SystemSpec::e3(Complex(2, 0)),
          SystemSpec::e4(), SystemSpec::e5()}) {
      const auto g = generate_canonical(spec, 1, 2);
      const auto cls = classify(scramble(g.system, 9).system);
      CHECK(cls.spec.type == spec.type);
    }
  }

  SUBCASE("second family on a finer grid is still a single-level object") {
    const auto g = generate_canonical(SystemSpec::e2(0.4), 2, 6);
    const auto cls = classify(g.system);
    CHECK(cls.spec.type == SystemType::E2);
    CHECK(std::abs(cls.spec.a - 0.4) <= 1e-12);
    CHECK_FALSE(cls.rational_c.has_value());
  }

  SUBCASE("corrupted data is refused with a diagnostic") {
    auto g = generate_canonical(SystemSpec::e1(0.3), 1, 4);
    std::mt19937_64 rng(6);
    g.system.maps[{2, 1}] = testutil::random_isometry42(rng);
    CHECK_THROWS_AS(classify(g.system), Error);
  }
}

TEST_CASE("classification is basis independent") {
  const SystemSpec specs[] = {SystemSpec::e1(0.3), SystemSpec::e2(0.55),
                              SystemSpec::e3(Complex(1, -2)), SystemSpec::e4(),
                              SystemSpec::e5()};
  for (const auto& spec : specs) {
    const auto g = generate_canonical(spec, 1, 5);
    const auto base = classify(g.system);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto cls = classify(scramble(g.system, seed).system);
      CHECK(cls.spec.type == spec.type);
      if (spec.type == SystemType::E1 || spec.type == SystemType::E2)
        CHECK(std::abs(cls.spec.a - base.spec.a) <= 1e-9);
      if (spec.type == SystemType::E3)
        CHECK(std::abs(*cls.spec.lambda - *base.spec.lambda) <= 1e-9);
    }
  }
}

TEST_CASE("coefficient ratio for the third family is phase invariant") {
  const auto g = generate_canonical(SystemSpec::e3(Complex(0.7, 1.1)), 1, 3);
  const Isometry42& b11 = g.system.beta(1, 1);
  const CVec2 x1 = g.basis.x(1);
  const CVec2 y1(0.0, 1.0);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(0.0, 6.28318);
  Complex first = 0.0;
  double spread = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Complex px(std::cos(angle(rng)), std::sin(angle(rng)));
    const Complex py(std::cos(angle(rng)), std::sin(angle(rng)));
    const CVec2 xs = px * x1;
    const CVec2 ys = py * y1;
    const CVec4 w = b11.column(1);
    const Complex lam = inner(w, kron(xs, ys)) / inner(w, kron(ys, xs));
    if (trial == 0)
      first = lam;
    else
      spread = std::max(spread, std::abs(lam - first));
  }
  CHECK(spread <= 1e-12);
  CHECK(close(first, Complex(0.7, 1.1), 1e-12));
}

TEST_CASE("restriction compatibility with the type table") {
  const SystemSpec specs[] = {SystemSpec::e1(0.6), SystemSpec::e2(0.6),
                              SystemSpec::e3(Complex(0, 1)), SystemSpec::e4(),
                              SystemSpec::e5()};
  for (const auto& spec : specs) {
    const auto g = generate_canonical(spec, 1, 8);
    for (const int m : {2, 3}) {
      const auto cls = classify(restrict_system(g.system, m));
      switch (spec.type) {
        case SystemType::E1:
          CHECK(cls.spec.type == SystemType::E1);
          CHECK(close(cls.spec.a, std::pow(0.6, m), 1e-9));
          break;
        case SystemType::E2:
          CHECK(cls.spec.type == (m % 2 == 0 ? SystemType::E1 : SystemType::E2));
          CHECK(close(cls.spec.a, std::pow(0.6, m), 1e-9));
          break;
        case SystemType::E3:
          CHECK(cls.spec.type == SystemType::E3);
          CHECK(close(*cls.spec.lambda, std::pow(Complex(0, 1), m), 1e-9));
          break;
        default:
          CHECK(cls.spec.type == spec.type);
      }
    }
  }
}

TEST_CASE("isomorphism decision") {
  SUBCASE("scramble produces an isomorphic copy with a verified witness") {
    const auto a = generate_canonical(SystemSpec::e1(0.3), 1, 5);
    const auto b = scramble(a.system, 808);
    const auto iso = decide_isomorphic(a.system, b.system);
    REQUIRE(iso.isomorphic);
    CHECK(iso.residual <= 1e-10);
  }

  SUBCASE("nearby parameters are not isomorphic") {
    const auto a = generate_canonical(SystemSpec::e1(0.3), 1, 4);
    const auto b = generate_canonical(SystemSpec::e1(0.31), 1, 4);
    CHECK_FALSE(decide_isomorphic(a.system, b.system).isomorphic);
  }

  SUBCASE("fourth and fifth families differ") {
    const auto a = generate_canonical(SystemSpec::e4(), 1, 4);
    const auto b = generate_canonical(SystemSpec::e5(), 1, 4);
    const auto iso = decide_isomorphic(a.system, b.system);
    CHECK_FALSE(iso.isomorphic);
    CHECK(!iso.reason.empty());
  }

  SUBCASE("grids must match") {
    const auto a = generate_canonical(SystemSpec::e4(), 1, 4);
    const auto b = generate_canonical(SystemSpec::e4(), 1, 5);
    CHECK_THROWS_AS(decide_isomorphic(a.system, b.system), Error);
  }
}
