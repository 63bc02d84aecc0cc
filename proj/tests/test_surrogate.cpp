#include "aucopt/surrogate.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "aucopt/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using aucopt::SurrogateKind;
using aucopt::surrogate_grad;
using aucopt::surrogate_value;

TEST_CASE("surrogate values match their closed forms") {
  CHECK(surrogate_value(SurrogateKind::PairwiseExponential, 0.0) == 1.0);
  CHECK(surrogate_value(SurrogateKind::PairwiseHinge, 1.0) == 0.0);
  CHECK(surrogate_value(SurrogateKind::PairwiseSquared, -1.0) == 4.0);
  CHECK(surrogate_value(SurrogateKind::PairwiseLogistic, 0.0) ==
        doctest::Approx(0.6931471805599453).epsilon(1e-15));
}

TEST_CASE("surrogate derivatives match their closed forms") {
  CHECK(surrogate_grad(SurrogateKind::PairwiseExponential, 0.0) == -1.0);
  CHECK(surrogate_grad(SurrogateKind::PairwiseSquared, 1.0) == 0.0);
  CHECK(surrogate_grad(SurrogateKind::PairwiseLogistic, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(surrogate_grad(SurrogateKind::PairwiseHinge, 0.999) == -1.0);
  // Kink convention: the flat side.
  CHECK(surrogate_grad(SurrogateKind::PairwiseHinge, 1.0) == 0.0);
  CHECK(surrogate_grad(SurrogateKind::PairwiseHinge, 1.001) == 0.0);
}

TEST_CASE("logistic surrogate is overflow-free at large |t|") {
  CHECK(surrogate_value(SurrogateKind::PairwiseLogistic, -1000.0) == doctest::Approx(1000.0));
  CHECK(surrogate_value(SurrogateKind::PairwiseLogistic, 1000.0) == 0.0);
  CHECK(surrogate_grad(SurrogateKind::PairwiseLogistic, -1000.0) == doctest::Approx(-1.0));
  CHECK(std::isfinite(surrogate_grad(SurrogateKind::PairwiseLogistic, 1000.0)));
}

TEST_CASE("all four surrogates are non-negative and non-increasing on [-1,1]") {
  for (const SurrogateKind kind : aucopt::kAllSurrogates) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double t = -1.0 + 2.0 * i / 2000.0;
      const double v = surrogate_value(kind, t);
      CHECK(v >= 0.0);
      CHECK(v <= prev);
      prev = v;
    }
    CHECK(surrogate_value(kind, 0.0) >= surrogate_value(kind, 1.0));
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (const SurrogateKind kind : aucopt::kAllSurrogates) {
    int checked = 0;
    while (checked < 1000) {
      const double t = dist(rng);
      if (kind == SurrogateKind::PairwiseHinge && std::abs(t - 1.0) < 1e-3) continue;
      const double fd = testutil::central_diff(
          [kind](double x) { return surrogate_value(kind, x); }, t);
      CHECK(testutil::rel_err(surrogate_grad(kind, t), fd) < 1e-6);
      ++checked;
    }
  }
}

TEST_CASE("non-finite arguments are rejected") {
  for (const SurrogateKind kind : aucopt::kAllSurrogates) {
    CHECK_THROWS_AS(surrogate_value(kind, std::nan("")), aucopt::DomainError);
    CHECK_THROWS_AS(surrogate_value(kind, std::numeric_limits<double>::infinity()),
                    aucopt::DomainError);
    CHECK_THROWS_AS(surrogate_grad(kind, std::nan("")), aucopt::DomainError);
  }
}

TEST_CASE("surrogate names round-trip") {
  for (const SurrogateKind kind : aucopt::kAllSurrogates) {
    CHECK(aucopt::parse_surrogate(aucopt::surrogate_name(kind)) == kind);
  }
  CHECK_THROWS_AS(aucopt::parse_surrogate("squared"), aucopt::ConfigError);
}
