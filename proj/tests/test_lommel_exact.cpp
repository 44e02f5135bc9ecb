#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "qbessel/lommel.hpp"

using namespace qbessel;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

namespace {

// q = 1/2 and w = q^nu = 3/7 keep every coefficient rational.
QOrder<Rational> order() { return {Rational(1, 2), Rational(3, 7)}; }

}  // namespace

TEST(ExactLommel, SecondPolynomial) {
  const auto r = lommel_R(2, order());
  ASSERT_EQ(r.coeffs.size(), 3);
  EXPECT_EQ(r.coeffs(0), Rational(22, 49));
  EXPECT_EQ(r.coeffs(1), Rational(5, 14));
  EXPECT_EQ(r.coeffs(2), Rational(1));
}

TEST(ExactLommel, CoefficientIdentitiesHoldExactly) {
  const auto o = order();
  EXPECT_EQ(a_recurrence_vs_explicit(o, 12), Rational(0));
  EXPECT_EQ(b_table_check(o, 10), Rational(0));
  EXPECT_EQ(a_shift_check(o, 10), Rational(0));
  const auto r = r_family_check(o, 10);
  EXPECT_EQ(r.r_recurrence, Rational(0));
  EXPECT_EQ(r.htilde_closed_form, Rational(0));
  EXPECT_EQ(r.h_vs_htilde, Rational(0));
}

TEST(ExactLommel, ScaledTildeRMatchesTildeR) {
  const auto o = order();
  for (long m = 0; m <= 8; ++m) {
    const auto plain = tilde_r(m, o);
    const auto scaled = scaled_tilde_r(m, o);
    // q^{m(m+nu)} = q^{m^2} w^m
    const Rational factor = detail::ipow(o.q, m * m) * detail::ipow(o.w, m);
    ASSERT_EQ(plain.coeffs.size(), scaled.size());
    for (long i = 0; i < scaled.size(); ++i) EXPECT_EQ(scaled(i), factor * plain.coeffs(i)) << m << " " << i;
  }
}

TEST(ExactLommel, GeneratingPolynomialMatchesScaledR) {
  const auto o = order();
  const Rational x(5, 3);
  for (long m = 0; m <= 8; ++m) {
    EXPECT_EQ(p_poly(m, o)(x), detail::ipow(x, m) * lommel_R(m, o)(x)) << m;
  }
}
