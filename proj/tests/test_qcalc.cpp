#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qbessel/qcalc.hpp"
#include "qbessel/summation.hpp"

using namespace qbessel;

namespace {

const std::vector<double> kQs{0.3, 0.5, 0.8};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

struct Cubic {
  double c0, c1, c2, c3;
  double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
};

}  // namespace

TEST(CompensatedSum, RecoversCancelledLowBits) {
  CompensatedSum<double> s;
  s += 1.0;
  s += 1e-17;
  s += -1.0;
  EXPECT_DOUBLE_EQ(s.value(), 1e-17);
  EXPECT_DOUBLE_EQ(s.abs_sum(), 2.0 + 1e-17);
}

TEST(CompensatedSum, ConvergedAtRoundingFloorOfCancellingSum) {
  CompensatedSum<double> s;
  s += 1.0;
  s += -1.0;
  // Zero partial sum: the relative test can never pass, the floor test does.
  EXPECT_FALSE(s.converged(1e-20, 1e-12));
  EXPECT_TRUE(s.converged(1e-33, 1e-12));
}

TEST(QPochhammer, FiniteProductStep) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (double q : kQs) {
    for (std::size_t k = 0; k < 12; ++k) {
      const double a = u(rng);
      EXPECT_DOUBLE_EQ(qpochhammer(a, q, k + 1), qpochhammer(a, q, k) * (1 - a * std::pow(q, double(k))));
    }
  }
}

TEST(QPochhammer, InfiniteProductAgainstOracle) {
  const QContext<double> ctx(0.5, 1e-15);
  EXPECT_NEAR(qpochhammer_inf(0.5, ctx).value, oracle::kQPochInfHalf, 1e-15);
}

TEST(QPochhammer, InfiniteRatioMatchesQuotient) {
  for (double q : kQs) {
    const QContext<double> ctx(q, 1e-15);
    const double num = qpochhammer_inf(std::pow(q, 0.7), ctx).value;
    const double den = qpochhammer_inf(std::pow(q, 1.9), ctx).value;
    EXPECT_LT(rel(qpochhammer_inf_ratio(0.7, 1.9, q, ctx).value, num / den), 1e-13);
  }
}

TEST(QPochhammer, RatioWithNonPositiveIntegerDenominatorThrows) {
  const QContext<double> ctx(0.5);
  try {
    qpochhammer_inf_ratio(0.5, -2.0, 0.5, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDenominator);
  }
}

TEST(QContext, RejectsBaseOutsideUnitInterval) {
  for (double q : {0.0, 1.0, -0.5, 1.5}) {
    try {
      QContext<double> ctx(q);
      FAIL() << q;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    }
  }
}

TEST(BasicHypergeometric, TerminatingSeriesStopsAtDegree) {
  // 2phi1(q^{-n}, b; c; q, q) = (c/b; q)_n b^n / (c; q)_n  (q-Chu-Vandermonde)
  for (double q : kQs) {
    const QContext<double> ctx(q, 1e-15);
    for (int n = 0; n <= 6; ++n) {
      SeriesSpec<double> spec;
      const double b = 0.3, c = 0.7;
      spec.num_params = {std::pow(q, -n), b};
      spec.den_params = {c};
      spec.base = q;
      spec.arg = q;
      const auto r = basic_hypergeometric(spec, ctx);
      const double closed = qpochhammer(c / b, q, n) * std::pow(b, n) / qpochhammer(c, q, n);
      EXPECT_LT(std::abs(r.value - closed), 1e-12 * r.scale) << "q=" << q << " n=" << n;
      EXPECT_EQ(r.terms_used, std::size_t(n + 1));
    }
  }
}

TEST(BasicHypergeometric, QBinomialTheorem) {
  // 1phi0(a; -; q, t) = (at; q)_inf / (t; q)_inf
  for (double q : kQs) {
    const QContext<double> ctx(q, 1e-15);
    SeriesSpec<double> spec;
    spec.num_params = {0.4};
    spec.base = q;
    spec.arg = 0.3;
    const double closed = qpochhammer_inf(0.12, ctx).value / qpochhammer_inf(0.3, ctx).value;
    EXPECT_LT(rel(basic_hypergeometric(spec, ctx).value.real(), closed), 1e-13);
  }
}

TEST(BasicHypergeometric, VanishingDenominatorThrows) {
  const QContext<double> ctx(0.5);
  SeriesSpec<double> spec;
  spec.num_params = {0.3};
  spec.den_params = {4.0};  // (4; 1/2)_k vanishes from k = 3 on
  spec.base = 0.5;
  spec.arg = 0.1;
  try {
    basic_hypergeometric(spec, ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDenominator);
  }
}

// q-calculus axioms on random cubics, relative 1e-10.
class QCalculusAxioms : public ::testing::TestWithParam<double> {};

TEST_P(QCalculusAxioms, FundamentalTheorem) {
  const double q = GetParam();
  const QContext<double> ctx(q);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const Cubic f{u(rng), u(rng), u(rng), u(rng)};
    for (double z : {0.5, 1.0, 2.0}) {
      auto df = [&](double x) { return q_derivative(f, x, q); };
      const auto integral = q_integral(df, z, ctx);
      EXPECT_LE(std::abs(integral.value - (f(z) - f(0))), 1e-10 * integral.scale);
    }
  }
}

TEST_P(QCalculusAxioms, ProductRule) {
  const double q = GetParam();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Cubic f{u(rng), u(rng), u(rng), u(rng)};
    const Cubic g{u(rng), u(rng), u(rng), u(rng)};
    const double x = 0.1 + std::abs(u(rng));
    auto fg = [&](double t) { return f(t) * g(t); };
    const double t1 = f(x) * q_derivative(g, x, q);
    const double t2 = g(q * x) * q_derivative(f, x, q);
    const double size = std::max({std::abs(t1), std::abs(t2), 1e-300});
    EXPECT_LE(std::abs(q_derivative(fg, x, q) - (t1 + t2)), 1e-10 * size);
  }
}

TEST_P(QCalculusAxioms, PartialIntegration) {
  const double q = GetParam();
  const QContext<double> ctx(q);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const Cubic f{u(rng), u(rng), u(rng), u(rng)};
    const Cubic g{u(rng), u(rng), u(rng), u(rng)};
    const double z = 1.5;
    auto left = [&](double x) { return f(q * x) * q_derivative(g, x, q); };
    auto right = [&](double x) { return q_derivative(f, x, q) * g(x); };
    const auto lhs = q_integral(left, z, ctx);
    const auto other = q_integral(right, z, ctx);
    const double boundary = f(z) * g(z) - f(0) * g(0);
    const double size = std::max({lhs.scale, other.scale, std::abs(f(z) * g(z)), std::abs(f(0) * g(0))});
    EXPECT_LE(std::abs(lhs.value - (boundary - other.value)), 1e-10 * size);
  }
}

INSTANTIATE_TEST_SUITE_P(Bases, QCalculusAxioms, ::testing::ValuesIn(kQs));

TEST(QIntegral, IndexedNodesMatchPlainForm) {
  const QContext<double> ctx(0.6);
  auto f = [](double x) { return x * x + 1; };
  const double plain = q_integral(f, 1.3, ctx).value;
  const double indexed =
      q_integral_indexed([&](std::size_t, double x) { return f(x); }, 1.3, ctx).value;
  EXPECT_EQ(plain, indexed);
  // int_0^z x^2 d_qx = (1 - q) z^3 / (1 - q^3)
  const double exact = 0.4 * std::pow(1.3, 3) / (1 - std::pow(0.6, 3)) + 1.3;
  EXPECT_LT(rel(plain, exact), 1e-11);
}

TEST(QIntegral, NonPositiveUpperLimitThrows) {
  const QContext<double> ctx(0.6);
  EXPECT_THROW(q_integral([](double x) { return x; }, 0.0, ctx), Error);
}
