#include "doctest.h"
#include "subprod/classify.hpp"
#include "subprod/tower.hpp"
#include "test_util.hpp"

using namespace subprod;
using testutil::close;

TEST_CASE("spec refinement inverts the restriction table") {
  SUBCASE("first family takes the positive real root") {
    const auto r = refine_spec(SystemSpec::e1(0.25), 2);
    CHECK(r.type == SystemType::E1);
    CHECK(close(r.a, 0.5, 1e-15));
  }

  SUBCASE("third family enumerates roots") {
    const auto r = refine_spec(SystemSpec::e3(Complex(4, 0)), 2, 1);
    REQUIRE(r.type == SystemType::E3);
    CHECK(close(*r.lambda, Complex(-2, 0), 1e-12));
    CHECK(close(std::pow(*r.lambda, 2), Complex(4, 0), 1e-12));
  }

  SUBCASE("second family has no refinement") {
    CHECK_THROWS_AS(refine_spec(SystemSpec::e2(0.3), 2), Error);
  }

  SUBCASE("round trip with the restriction table") {
    for (const int m : {2, 3, 4}) {
      const auto e1 = refine_spec(SystemSpec::e1(0.6), m);
      CHECK(close(std::pow(e1.a, m), 0.6, 1e-12));
      for (int root = 0; root < m; ++root) {
        const auto e3 = refine_spec(SystemSpec::e3(Complex(-1, 2)), m, root);
        CHECK(close(std::pow(*e3.lambda, m), Complex(-1, 2), 1e-12));
      }
      CHECK(refine_spec(SystemSpec::e4(), m).type == SystemType::E4);
      CHECK(refine_spec(SystemSpec::e5(), m).type == SystemType::E5);
    }
  }

  SUBCASE("root choice bounds") {
    CHECK_THROWS_AS(refine_spec(SystemSpec::e3(Complex(1, 0)), 2, 2), Error);
    CHECK_THROWS_AS(refine_spec(SystemSpec::e3(Complex(1, 0)), 2, -1), Error);
  }
}

TEST_CASE("factorial towers are level compatible") {
  SUBCASE("fourth family is a fixed point") {
    const auto t = build_tower(SystemSpec::e4(), 3, {}, 2);
    REQUIRE(t.levels.size() == 3);
    CHECK(t.levels[2].denominator == 6);
    CHECK(tower_compatibility_residual(t) <= 1e-13);
  }

  SUBCASE("unit-magnitude third family realizes the linear norm law") {
    const auto t = build_tower(SystemSpec::e3(Complex(1, 0)), 3, {}, 2);
    const auto& level = t.levels[2];
    for (int k = 1; k <= level.system.horizon; ++k)
      CHECK(close(std::real(inner(level.basis.y(k), level.basis.y(k))), k / 6.0, 1e-12));
    CHECK(tower_compatibility_residual(t) <= 1e-11);
  }

  SUBCASE("first family refines through real roots") {
    const auto t = build_tower(SystemSpec::e1(0.5), 2, {}, 2);
    const auto cls = classify(t.levels[1].system);
    CHECK(cls.spec.type == SystemType::E1);
    CHECK(close(cls.spec.a, std::sqrt(0.5), 1e-9));
  }

  SUBCASE("both square roots of the third family give compatible towers") {
    for (const int root : {0, 1}) {
      const auto t = build_tower(SystemSpec::e3(Complex(4, 0)), 3, {root, 0}, 2);
      CHECK(tower_compatibility_residual(t) <= 1e-11);
      const auto cls = classify(restrict_system(t.levels[1].system, 2));
      CHECK(close(*cls.spec.lambda, Complex(4, 0), 1e-9));
      CHECK(close(*t.levels[1].step_spec.lambda, Complex(root == 0 ? 2.0 : -2.0, 0), 1e-12));
    }
  }

  SUBCASE("level classifications restrict onto each other") {
    const auto t = build_tower(SystemSpec::e3(Complex(0, 1)), 3, {}, 2);
    for (size_t n = 0; n + 1 < t.levels.size(); ++n) {
      const auto coarse = classify(t.levels[n].system);
      const auto fine =
          classify(restrict_system(t.levels[n + 1].system, static_cast<int>(n) + 2));
      CHECK(coarse.spec.type == fine.spec.type);
      CHECK(std::abs(*coarse.spec.lambda - *fine.spec.lambda) <= 1e-9);
    }
  }

  SUBCASE("second family towers stop at depth one") {
    CHECK_NOTHROW(build_tower(SystemSpec::e2(0.3), 1, {}, 2));
    CHECK_THROWS_AS(build_tower(SystemSpec::e2(0.3), 2, {}, 2), Error);
  }
}

TEST_CASE("norm propagation rule on every grid") {
  for (const double c : {0.5, 1.0, 2.0}) {
    const auto t = build_tower(SystemSpec::e3_rational(c, 0.3), 3, {}, 2);
    const auto& level = t.finest();
    const long long den = level.denominator;
    for (int s = 1; s + 1 <= level.system.horizon; ++s)
      for (int k = 1; s + k <= level.system.horizon; ++k) {
        const double lhs = y_norm_law(c, Time(s + k, den));
        const double rhs = y_norm_law(c, Time(s, den)) +
                           std::pow(c, 2.0 * s / static_cast<double>(den)) *
                               y_norm_law(c, Time(k, den));
        CHECK(close(lhs, rhs, 1e-12));
        CHECK(close(std::real(inner(level.basis.y(s + k), level.basis.y(s + k))), lhs,
                    1e-12));
      }
  }
}

TEST_CASE("character families from towers") {
  SUBCASE("principal roots of the trivial character") {
    const auto t = build_tower(SystemSpec::e3(Complex(1, 0)), 3, {}, 2);
    const auto eta = eta_from_tower(t);
    CHECK(eta.descriptor == EtaFamily::Descriptor::Exponential);
    CHECK(eta.b == 0.0);
    for (const auto& v : eta.values) CHECK(close(v, Complex(1, 0), 1e-12));
  }

  SUBCASE("principal roots of a unit-argument character") {
    const Complex lam(std::cos(1.0), std::sin(1.0));
    const auto t = build_tower(SystemSpec::e3(lam), 2, {}, 2);
    const auto eta = eta_from_tower(t);
    CHECK(eta.descriptor == EtaFamily::Descriptor::Exponential);
    CHECK(close(eta.b, 1.0, 1e-12));
    for (int k = 1; k <= 4; ++k)
      CHECK(close(eta.at_step(k), Complex(std::cos(k / 2.0), std::sin(k / 2.0)), 1e-12));
  }

  SUBCASE("a flipped root is recorded symbolically") {
    const auto t = build_tower(SystemSpec::e3(Complex(1, 0)), 2, {1}, 2);
    const auto eta = eta_from_tower(t);
    CHECK(eta.descriptor == EtaFamily::Descriptor::RootChoices);
    CHECK(close(eta.at_step(1), Complex(-1, 0), 1e-12));
    CHECK(close(eta.at_step(2), Complex(1, 0), 1e-12));
  }

  SUBCASE("unit modulus and multiplicativity") {
    const auto t = build_tower(SystemSpec::e3(Complex(2, 1)), 3, {1, 2}, 2);
    const auto eta = eta_from_tower(t);
    CHECK(eta.multiplicativity_residual() <= 1e-12);
  }

  SUBCASE("only the third family carries a character") {
    const auto t = build_tower(SystemSpec::e4(), 2, {}, 2);
    CHECK_THROWS_AS(eta_from_tower(t), Error);
  }
}
