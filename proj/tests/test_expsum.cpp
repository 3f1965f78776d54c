#include <doctest.h>

#include <cmath>

#include "exppoly/expsum.hpp"
#include "test_support.hpp"

using exppoly::Cx;
using exppoly::ExpSum;
using testsup::dist;

TEST_CASE("make: merging, cancellation, single term") {
  SUBCASE("e^z + e^{-z} stays two terms") {
    const ExpSum f = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(1.0), Cx(-1.0), 0}});
    REQUIRE(f.terms.size() == 2);
    CHECK(f.terms[0].freq == Cx(-1.0));  // sorted by (Re, Im)
    CHECK(f.terms[1].freq == Cx(1.0));
  }
  SUBCASE("exact cancellation gives the empty sum") {
    const ExpSum f = exppoly::make({{Cx(1.0), Cx(0.0), 0}, {Cx(-1.0), Cx(0.0), 0}});
    CHECK(f.terms.empty());
  }
  SUBCASE("2 z e^{3z}") {
    const ExpSum f = exppoly::make({{Cx(2.0), Cx(3.0), 1}});
    REQUIRE(f.terms.size() == 1);
    CHECK(f.terms[0].poly.degree() == 1);
    CHECK(std::abs(f.terms[0].poly.coeffs[1] - Cx(2.0)) < 1e-15);
  }
}

TEST_CASE("add: cancellation and frequency merging") {
  const ExpSum ez = exppoly::make({{Cx(1.0), Cx(1.0), 0}});
  CHECK(exppoly::add(ez, exppoly::scale(ez, Cx(-1.0))).terms.empty());

  const ExpSum f = exppoly::add(exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(2.0), Cx(0.0), 0}}),
                                exppoly::make({{Cx(1.0), Cx(-1.0), 0}, {Cx(-2.0), Cx(0.0), 0}}));
  CHECK(f.terms.size() == 2);  // e^z + e^{-z}, the constants cancel

  const ExpSum g = exppoly::add(exppoly::make({{Cx(1.0), Cx(1.0), 1}}),
                                exppoly::make({{Cx(1.0), Cx(1.0), 0}}));
  REQUIRE(g.terms.size() == 1);  // (z + 1) e^z
  CHECK(g.terms[0].poly.degree() == 1);
}

TEST_CASE("mul examples") {
  const ExpSum p = exppoly::add(exppoly::make({{Cx(1.0), Cx(1.0), 0}}), exppoly::from_const(Cx(2.0)));
  const ExpSum q = exppoly::add(exppoly::make({{Cx(1.0), Cx(1.0), 0}}), exppoly::from_const(Cx(-2.0)));
  const ExpSum prod = exppoly::mul(p, q);  // e^{2z} - 4
  CHECK(dist(prod, exppoly::add(exppoly::make({{Cx(1.0), Cx(2.0), 0}}),
                                exppoly::from_const(Cx(-4.0)))) < 1e-14);

  CHECK(exppoly::mul(p, ExpSum{}).terms.empty());

  const ExpSum cosh2 = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(1.0), Cx(-1.0), 0}});
  const ExpSum sq = exppoly::mul(cosh2, cosh2);  // e^{2z} + 2 + e^{-2z}
  CHECK(dist(sq, exppoly::make({{Cx(1.0), Cx(2.0), 0}, {Cx(2.0), Cx(0.0), 0}, {Cx(1.0), Cx(-2.0), 0}})) <
        1e-14);
}

TEST_CASE("pow examples") {
  const ExpSum base = exppoly::add(exppoly::make({{Cx(1.0), Cx(1.0), 0}}), exppoly::from_const(Cx(2.0)));
  const ExpSum cube = exppoly::pow(base, 3);  // e^{3z} + 6 e^{2z} + 12 e^z + 8
  CHECK(dist(cube, exppoly::make({{Cx(1.0), Cx(3.0), 0},
                                  {Cx(6.0), Cx(2.0), 0},
                                  {Cx(12.0), Cx(1.0), 0},
                                  {Cx(8.0), Cx(0.0), 0}})) < 1e-13);
  CHECK(dist(exppoly::pow(base, 1), base) == 0.0);
  CHECK(dist(exppoly::pow(base, 0), exppoly::from_const(Cx(1.0))) == 0.0);
}

TEST_CASE("derivative examples") {
  const ExpSum f = exppoly::make({{Cx(1.0), Cx(2.0), 1}});  // z e^{2z}
  const ExpSum df = exppoly::derivative(f, 1);              // (1 + 2z) e^{2z}
  CHECK(dist(df, exppoly::make({{Cx(1.0), Cx(2.0), 0}, {Cx(2.0), Cx(2.0), 1}})) < 1e-14);

  CHECK(exppoly::derivative(exppoly::from_const(Cx(5.0)), 1).terms.empty());

  const ExpSum cosh2 = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(1.0), Cx(-1.0), 0}});
  CHECK(dist(exppoly::derivative(cosh2, 2), cosh2) < 1e-14);  // f'' = f
}

TEST_CASE("is_zero") {
  CHECK(exppoly::is_zero(ExpSum{}, 1.0, 1e-8));
  CHECK_FALSE(exppoly::is_zero(exppoly::make({{Cx(1.0), Cx(1.0), 0}}), 1.0, 1e-8));
  testsup::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const ExpSum f = testsup::random_expsum(rng);
    const ExpSum diff = exppoly::add(f, exppoly::scale(f, Cx(-1.0)));
    CHECK(exppoly::is_zero(diff, exppoly::sup_scale(f), 1e-10));
  }
}

TEST_CASE("eval examples") {
  const ExpSum cosh2 = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(1.0), Cx(-1.0), 0}});
  CHECK(std::abs(exppoly::eval(cosh2, Cx(0.0)) - Cx(2.0)) < 1e-15);
  CHECK(std::abs(exppoly::eval(ExpSum{}, Cx(3.0, 4.0))) == 0.0);
  // at z = ln 2 the value is 2 + 1/2
  CHECK(std::abs(exppoly::eval(cosh2, Cx(std::log(2.0))) - Cx(2.5)) < 1e-14);
}

TEST_CASE("eval overflow raises numeric_error") {
  const ExpSum f = exppoly::make({{Cx(1.0), Cx(1.0), 0}});
  CHECK_THROWS_AS(exppoly::eval(f, Cx(1e6)), exppoly::numeric_error);
}

TEST_CASE("degree and term caps fail loudly") {
  const ExpSum high = exppoly::make({{Cx(1.0), Cx(1.0), 33}});
  CHECK_THROWS_AS(exppoly::mul(high, high), exppoly::numeric_error);
  CHECK_THROWS_AS(exppoly::make({{Cx(1.0), Cx(0.0), 70}}), exppoly::numeric_error);
}

TEST_CASE("ring axioms on random triples") {
  testsup::Rng rng(99);
  for (int i = 0; i < 15; ++i) {
    const ExpSum f = testsup::random_expsum(rng, 4);
    const ExpSum g = testsup::random_expsum(rng, 4);
    const ExpSum h = testsup::random_expsum(rng, 4);
    const double s = std::max({exppoly::sup_scale(f), exppoly::sup_scale(g), exppoly::sup_scale(h)});
    const double tol = 1e-10 * s * s * s;  // two nested products on each side
    CHECK(dist(exppoly::add(f, g), exppoly::add(g, f)) <= tol);
    CHECK(dist(exppoly::mul(f, g), exppoly::mul(g, f)) <= tol);
    CHECK(dist(exppoly::add(exppoly::add(f, g), h), exppoly::add(f, exppoly::add(g, h))) <= tol);
    CHECK(dist(exppoly::mul(exppoly::mul(f, g), h), exppoly::mul(f, exppoly::mul(g, h))) <= tol);
    // distributivity
    CHECK(dist(exppoly::mul(f, exppoly::add(g, h)),
               exppoly::add(exppoly::mul(f, g), exppoly::mul(f, h))) <= tol);
  }
}

TEST_CASE("eval is a homomorphism at random points") {
  testsup::Rng rng(1234);
  for (int i = 0; i < 8; ++i) {
    const ExpSum f = testsup::random_expsum(rng, 4);
    const ExpSum g = testsup::random_expsum(rng, 4);
    const ExpSum sum = exppoly::add(f, g);
    const ExpSum prod = exppoly::mul(f, g);
    for (int p = 0; p < 16; ++p) {
      const Cx z = rng.unit_disk();
      const Cx fv = exppoly::eval(f, z);
      const Cx gv = exppoly::eval(g, z);
      CHECK(std::abs(exppoly::eval(sum, z) - (fv + gv)) <=
            1e-9 * (1.0 + std::abs(fv) + std::abs(gv)));
      CHECK(std::abs(exppoly::eval(prod, z) - fv * gv) <=
            1e-9 * (1.0 + std::abs(fv) * std::abs(gv)));
    }
  }
}

TEST_CASE("Leibniz rule at the coefficient level") {
  testsup::Rng rng(2024);
  for (int i = 0; i < 30; ++i) {
    const ExpSum f = testsup::random_expsum(rng, 4);
    const ExpSum g = testsup::random_expsum(rng, 4);
    const ExpSum lhs = exppoly::derivative(exppoly::mul(f, g), 1);
    const ExpSum rhs = exppoly::add(exppoly::mul(exppoly::derivative(f, 1), g),
                                    exppoly::mul(f, exppoly::derivative(g, 1)));
    const double scale = exppoly::sup_scale(lhs);
    CHECK(exppoly::is_zero(exppoly::sub(lhs, rhs), scale, 1e-12));
  }
}

TEST_CASE("derivative agrees with the central finite difference") {
  testsup::Rng rng(77);
  const double h = 1e-5;
  for (int i = 0; i < 10; ++i) {
    ExpSum f = testsup::random_expsum(rng, 4);
    f = exppoly::scale(f, Cx(1.0 / exppoly::sup_scale(f)));  // unit scale
    const ExpSum df = exppoly::derivative(f, 1);
    for (int p = 0; p < 8; ++p) {
      const Cx z = rng.unit_disk();
      const Cx fd = (exppoly::eval(f, z + Cx(h)) - exppoly::eval(f, z - Cx(h))) / Cx(2.0 * h);
      const Cx exact = exppoly::eval(df, z);
      CHECK(std::abs(fd - exact) <= 1e-8 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("canonicalization is idempotent") {
  testsup::Rng rng(31337);
  for (int i = 0; i < 20; ++i) {
    const ExpSum f = testsup::random_expsum(rng);
    const ExpSum again = exppoly::canonicalize(std::vector<exppoly::ExpTerm>(f.terms));
    REQUIRE(again.terms.size() == f.terms.size());
    CHECK(dist(f, again) == 0.0);
  }
}

TEST_CASE("sup_scale of the empty sum is one") {
  CHECK(exppoly::sup_scale(ExpSum{}) == 1.0);
  CHECK(exppoly::coeff_sup(ExpSum{}) == 0.0);
}

TEST_CASE("nearby frequencies merge") {
  const ExpSum f = exppoly::make({{Cx(1.0), Cx(1.0), 0}, {Cx(1.0), Cx(1.0 + 1e-12), 0}});
  REQUIRE(f.terms.size() == 1);
  CHECK(std::abs(f.terms[0].poly.coeffs[0] - Cx(2.0)) < 1e-12);
}
