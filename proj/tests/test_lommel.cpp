#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <tuple>

#include "oracle.hpp"
#include "qbessel/lommel.hpp"
#include "qbessel/verify.hpp"

using namespace qbessel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

template <typename V>
void expect_coeffs(const V& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(got.size()), want.size());
  double size = 0;
  for (double w : want) size = std::max(size, std::abs(w));
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_LE(std::abs(got(i) - want[i]), tol * size) << "index " << i;
}

bool nonpositive_integer(double nu) { return is_integer_order(nu) && nearest_integer(nu) <= 0; }

}  // namespace

TEST(LommelR, OracleCoefficients) {
  expect_coeffs(lommel_R(3, Order(0.3), 0.5).coeffs, oracle::kR3, 1e-14);
  expect_coeffs(lommel_R(5, Order(1.5), 0.6).coeffs, oracle::kR5, 1e-14);
}

TEST(LommelR, DegreeZeroAndOne) {
  const auto r0 = lommel_R(0, Order(0.3), 0.5);
  ASSERT_EQ(r0.coeffs.size(), 1);
  EXPECT_EQ(r0.coeffs(0), 1.0);
  const auto r1 = lommel_R(1, Order(0.3), 0.5);
  EXPECT_DOUBLE_EQ(r1.coeffs(0), 1 - std::pow(0.5, 0.3));
  EXPECT_EQ(r1.coeffs(1), 1.0);
}

TEST(LommelR, NegativeDegreeRejected) {
  EXPECT_THROW(lommel_R(-1, Order(0.3), 0.5), Error);
}

TEST(LommelR, ExplicitFormRejectsNonPositiveIntegerOrder) {
  try {
    lommel_R_explicit(3, Order(-1.0), QContext<double>(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidOrder);
  }
}

TEST(LommelR, ExplicitFormContinuesAcrossIntegerOrder) {
  const QContext<double> ctx(0.5);
  for (double n : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    double previous = INFINITY;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      for (double nu : {n - eps, n + eps}) {
        const auto near = lommel_R_explicit(6, Order(nu), ctx).coeffs;
        EXPECT_LT(detail::max_rel_diff(near, lommel_R(6, Order(nu), 0.5).coeffs), 1e-9) << nu;
        const auto at = lommel_R(6, Order(n), 0.5).coeffs;
        const double gap = (near - at).cwiseAbs().maxCoeff() / at.cwiseAbs().maxCoeff();
        EXPECT_LT(gap, 100 * eps) << nu;
        if (nu > n) {
          EXPECT_LT(gap, previous) << nu;
          previous = gap;
        }
      }
    }
  }
}

class FamilyOneGrid : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(FamilyOneGrid, RecurrenceMatchesExplicitForm) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  if (nonpositive_integer(nu)) {
    EXPECT_THROW(lommel_R_explicit(3, Order(nu), ctx), Error);
    return;
  }
  for (long m = 0; m <= 20; ++m) {
    EXPECT_LT(detail::max_rel_diff(lommel_R(m, Order(nu), q).coeffs, lommel_R_explicit(m, Order(nu), ctx).coeffs),
              1e-10)
        << "m=" << m;
  }
}

TEST_P(FamilyOneGrid, GeneratingFunctionCoefficients) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  for (double x : default_x_grid()) {
    const auto g = generating_coeffs(Order(nu), x, 12, ctx);
    for (long m = 0; m <= 12; ++m) {
      const double p = p_poly(m, Order(nu), q)(x);
      EXPECT_LT(rel(g[m], p), 1e-10) << "x=" << x << " m=" << m;
      EXPECT_LT(rel(p, std::pow(x, double(m)) * lommel_R(m, Order(nu), q)(x)), 1e-13);
    }
  }
}

TEST_P(FamilyOneGrid, BesselConnectionAndCasoratian) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  for (double x : default_x_grid()) {
    for (long m = 1; m <= 8; ++m) {
      const auto r = bessel_connection_residual(m, Order(nu), x, ctx);
      EXPECT_LE(r.res_J, 1e-10) << "x=" << x << " m=" << m;
      EXPECT_LE(r.res_calJ, 1e-10) << "x=" << x << " m=" << m;
      EXPECT_LE(order_recurrence_residual(m, Order(nu), x, q), 1e-11);
      if (!is_integer_order(nu)) {
        const auto c = casoratian_R_eval(m, Order(nu), x, ctx);
        const double R = lommel_R(m, Order(nu), q)(x);
        EXPECT_LE(std::abs(c.value - std::complex<double>(R)), 1e-9 * std::max(c.scale, std::abs(R)));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(DefaultGrid, FamilyOneGrid,
                         ::testing::Combine(::testing::ValuesIn(default_nu_grid()),
                                            ::testing::ValuesIn(default_q_grid())));

TEST(LommelR, CasoratianNeedsNonIntegerOrder) {
  try {
    casoratian_R(2, Order(1.0), 0.5, QContext<double>(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IntegerOrder);
  }
}

TEST(TildeR, OracleCoefficients) {
  expect_coeffs(tilde_r(4, Order(0.3), 0.5).coeffs, oracle::kTildeR4, 1e-13);
  expect_coeffs(r_family(3, Order(0.8), 0.5).htilde.coeffs, oracle::kTildeH3, 1e-14);
}

class FamilyTwoGrid : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(FamilyTwoGrid, CoefficientIdentities) {
  const auto [nu, q] = GetParam();
  const auto o = q_order(Order(nu), q);
  EXPECT_LE(a_recurrence_vs_explicit(o, 15), 1e-12);
  EXPECT_LE(b_table_check(o, 10), 1e-12);
  EXPECT_LE(a_shift_check(o, 10), 1e-12);
  const auto r = r_family_check(o, 12);
  EXPECT_LE(r.r_recurrence, 1e-11);
  EXPECT_LE(r.htilde_closed_form, 1e-11);
  EXPECT_LE(r.h_vs_htilde, 1e-11);
}

TEST_P(FamilyTwoGrid, ExplicitTildeR) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  if (nonpositive_integer(nu)) {
    EXPECT_THROW(tilde_r_explicit(3, Order(nu), ctx), Error);
    return;
  }
  for (long m = 0; m <= 12; ++m) {
    EXPECT_LE(detail::max_rel_diff(tilde_r(m, Order(nu), q).coeffs, tilde_r_explicit(m, Order(nu), ctx).coeffs),
              1e-10)
        << "m=" << m;
  }
}

TEST_P(FamilyTwoGrid, DecompositionAndRecurrences) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  for (double x : default_x_grid()) {
    for (long m = 1; m <= 8; ++m) {
      if (m <= 7) {
        EXPECT_LE(decomposition_residual(Order(nu), m, x, ctx), 1e-9) << "x=" << x << " m=" << m;
      }
      EXPECT_LE(r_order_recurrence_residual(m, Order(nu), x, q), 1e-10);
      EXPECT_LE(tilde_r_recurrence_residual(m, Order(nu), x, q), 1e-10);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(DefaultGrid, FamilyTwoGrid,
                         ::testing::Combine(::testing::ValuesIn(default_nu_grid()),
                                            ::testing::ValuesIn(default_q_grid())));

TEST(TildeR, ScaledRecurrenceMatchesUnscaled) {
  const auto o = q_order(Order(0.7), 0.6);
  for (long m = 0; m <= 12; ++m) {
    const auto plain = tilde_r(m, o);
    const auto scaled = scaled_tilde_r(m, o);
    ASSERT_EQ(plain.coeffs.size(), scaled.size());
    // scaled coefficient i carries the factor q^{m(m+nu)}.
    const double factor = std::pow(0.6, double(m) * (m + 0.7));
    for (long i = 0; i < scaled.size(); ++i) EXPECT_LT(rel(scaled(i), factor * plain.coeffs(i)), 1e-12);
  }
}

TEST(Hurwitz, TracesDecreaseBelowCalibratedBounds) {
  const auto ms = hurwitz_m_list();
  for (const auto& s : hurwitz_R_samples()) {
    const auto t = hurwitz_R(Order(s.nu), s.x, ms, QContext<double>(s.q));
    EXPECT_TRUE(t.strictly_decreasing());
    EXPECT_LE(t.deviations.back(), s.bound);
  }
  for (const auto& s : hurwitz_tilde_r_samples()) {
    const auto t = hurwitz_tilde_r(Order(s.nu), s.x, ms, QContext<double>(s.q));
    EXPECT_TRUE(t.strictly_decreasing());
    EXPECT_LE(t.deviations.back(), s.bound);
  }
}

TEST(Hurwitz, EarlyDeviationsMatchOracle) {
  const auto ms = hurwitz_m_list();
  const auto t = hurwitz_R(Order(1.5), 0.3, ms, QContext<double>(0.5));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(rel(t.deviations[i], oracle::kHurwitzR[i]), 1e-6) << i;
  const auto u = hurwitz_tilde_r(Order(0.5), 0.3, ms, QContext<double>(0.5));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(rel(u.deviations[i], oracle::kHurwitzTildeR[i]), 1e-6) << i;
}

TEST(Hurwitz, ArgumentOutsideUnitIntervalRejected) {
  EXPECT_THROW(hurwitz_R(Order(0.5), 1.2, hurwitz_m_list(), QContext<double>(0.5)), Error);
}
