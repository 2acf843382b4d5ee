#include "pcqkd/errors.hpp"
#include "pcqkd/truncated_series.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcqkd;
using E = TruncatedSeries::Exponents;

namespace {
double fact(int n) { return std::tgamma(n + 1.0); }
}  // namespace

TEST(TruncatedSeries, ExpOfOneVariable) {
  const E caps{8, 8, 8, 8, 8, 8, 8, 8};
  const auto x = TruncatedSeries::variable(8, caps, 2);
  const auto e = x.exp();
  for (int k = 0; k <= 8; ++k) {
    E ex{};
    ex[2] = k;
    EXPECT_NEAR(std::abs(e.coefficient(ex) - 1.0 / fact(k)), 0.0, 1e-15) << k;
  }
  EXPECT_EQ(e.max_stored_degree(), 8);
}

TEST(TruncatedSeries, ExpOfLinearFormFactorises) {
  const E caps{3, 3, 0, 0, 0, 0, 0, 0};
  const std::complex<double> a{0.7, -0.2}, b{-1.1, 0.4};
  auto q = TruncatedSeries::variable(6, caps, 0) * a + TruncatedSeries::variable(6, caps, 1) * b;
  q += TruncatedSeries::constant(6, caps, 0.3);
  const auto e = q.exp();
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      const auto want = std::exp(0.3) * std::pow(a, i) * std::pow(b, j) / (fact(i) * fact(j));
      EXPECT_NEAR(std::abs(e.coefficient(E{i, j, 0, 0, 0, 0, 0, 0}) - want), 0.0, 1e-14);
    }
  }
}

TEST(TruncatedSeries, ProductDropsOutsideBox) {
  const E caps{1, 1, 0, 0, 0, 0, 0, 0};
  const auto x = TruncatedSeries::variable(2, caps, 0);
  const auto y = TruncatedSeries::variable(2, caps, 1);
  const auto one = TruncatedSeries::constant(2, caps, 1.0);
  const auto p = (x + one) * (y + one) * (x + one);  // x^2 is capped away
  EXPECT_NEAR(std::abs(p.coefficient(E{1, 1, 0, 0, 0, 0, 0, 0}) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.coefficient(E{1, 0, 0, 0, 0, 0, 0, 0}) - 2.0), 0.0, 1e-15);
  EXPECT_FALSE(p.retains(E{2, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_THROW(p.coefficient(E{2, 0, 0, 0, 0, 0, 0, 0}), IntegrityError);
}

TEST(TruncatedSeries, DegreeBound) {
  const auto x = TruncatedSeries::variable(3, E{3, 3, 3, 3, 3, 3, 3, 3}, 0);
  const auto y = TruncatedSeries::variable(3, E{3, 3, 3, 3, 3, 3, 3, 3}, 5);
  const auto p = x * x * y;
  EXPECT_NEAR(std::abs(p.coefficient(E{2, 0, 0, 0, 0, 1, 0, 0}) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(p.nonzero_count(), 1u);
  EXPECT_TRUE((p * x).nonzero_count() == 0u);
}

TEST(TruncatedSeries, MismatchedShapesRejected) {
  const auto a = TruncatedSeries::variable(2, E{2, 2, 2, 2, 2, 2, 2, 2}, 0);
  const auto b = TruncatedSeries::variable(3, E{2, 2, 2, 2, 2, 2, 2, 2}, 0);
  EXPECT_ANY_THROW(a * b);
}
