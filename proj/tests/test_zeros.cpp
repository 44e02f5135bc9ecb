#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "oracle.hpp"
#include "qbessel/verify.hpp"
#include "qbessel/zeros.hpp"

using namespace qbessel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

void expect_zeros(double nu, double q, const std::vector<double>& expected, double tol) {
  const auto t = find_zeros(Order(nu), expected.size(), QContext<double>(q));
  ASSERT_EQ(t.zeros.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_LT(rel(t.zeros[i].location, expected[i]), tol) << "nu=" << nu << " q=" << q << " n=" << i + 1;
  }
}

}  // namespace

TEST(FindZeros, OracleLocations) {
  expect_zeros(0.5, 0.8, oracle::kZerosHalf08, 1e-12);
  expect_zeros(0.0, 0.6, oracle::kZerosZero06, 1e-12);
  expect_zeros(-0.5, 0.5, oracle::kZerosMinusHalf05, 1e-12);
  expect_zeros(1.5, 0.5, oracle::kZeros15Half, 1e-12);
}

TEST(FindZeros, FarZerosResolvedByOffset) {
  // For q = 0.3 the sixth zero sits within 1e-30 (relative) of its anchor.
  const auto t = find_zeros(Order(0.5), 6, QContext<double>(0.3));
  ASSERT_EQ(t.validate(), "");
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_LT(rel(t.zeros[i].location, oracle::kZerosHalf03[i]), 1e-14) << i + 1;
  }
}

TEST(FindZeros, FirstZeroBelowBound) {
  const auto t = find_zeros(Order(0.5), 5, QContext<double>(0.8));
  ASSERT_EQ(t.zeros.size(), 5u);
  EXPECT_LT(t.zeros[0].location, first_zero_bound(Order(0.5), 0.8));
  for (std::size_t i = 1; i < 5; ++i) EXPECT_GT(t.zeros[i].location, t.zeros[i - 1].location);
}

TEST(FindZeros, OrderAtOrBelowMinusOneRejected) {
  for (double nu : {-1.0, -1.5}) {
    try {
      find_zeros(Order(nu), 3, QContext<double>(0.5));
      FAIL() << nu;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::OrderOutOfRange);
    }
  }
}

TEST(FindZeros, ScanBudgetExhaustionIsReported) {
  ZeroOptions<double> opt;
  opt.max_scan_steps = 10;
  try {
    find_zeros(Order(0.5), 3, QContext<double>(0.5), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BracketingFailed);
  }
}

TEST(ZeroTable, ValidateCatchesBrokenOrdering) {
  auto t = find_zeros(Order(0.0), 3, QContext<double>(0.5));
  ASSERT_EQ(t.validate(), "");
  std::swap(t.zeros[0], t.zeros[1]);
  EXPECT_NE(t.validate(), "");
}

// Table invariants for every (nu, q) of the default grid with nu > -1.
class ZeroGrid : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(ZeroGrid, SixZerosValidate) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  const auto t = find_zeros(Order(nu), 6, ctx);
  EXPECT_EQ(t.validate(), "");
  for (const auto& z : t.zeros) {
    EXPECT_LE(z.residual, 1e-9 * z.scale);
    EXPECT_LT(rel(z.norm_direct, z.norm_closed), 1e-9) << "zero " << z.n;
  }
}

TEST_P(ZeroGrid, SignChangeAroundEachZero) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  for (const auto& z : find_zeros(Order(nu), 6, ctx).zeros) {
    const double h = 10 * 1e-12 * (1 + z.location);
    const double lo = jq_regular(Order(nu), z.location - h, q * q, ctx).value;
    const double hi = jq_regular(Order(nu), z.location + h, q * q, ctx).value;
    EXPECT_LT(lo * hi, 0.0) << "zero " << z.n;
  }
}

TEST_P(ZeroGrid, HalvingToleranceMovesZerosByLessThanOldTolerance) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  ZeroOptions<double> coarse, fine;
  coarse.tol_x = 1e-10;
  fine.tol_x = coarse.tol_x / 2;
  const auto a = find_zeros(Order(nu), 6, ctx, coarse);
  const auto b = find_zeros(Order(nu), 6, ctx, fine);
  for (std::size_t i = 0; i < 6; ++i) {
    const double x = a.zeros[i].location;
    EXPECT_LE(std::abs(x - b.zeros[i].location), coarse.tol_x * (1 + x)) << "zero " << i + 1;
  }
}

TEST_P(ZeroGrid, ShiftIdentityAndNoCommonZero) {
  const auto [nu, q] = GetParam();
  const auto rep = no_common_zero_check(Order(nu), 6, QContext<double>(q));
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.first_positive);
  EXPECT_LT(rep.max_shift_residual, 1e-9);
}

TEST_P(ZeroGrid, Interlacing) {
  const auto [nu, q] = GetParam();
  const auto rep = interlacing_check(Order(nu), 6, QContext<double>(q));
  EXPECT_TRUE(rep.chain_ok);
  EXPECT_TRUE(rep.prev_chain_ok);
  EXPECT_TRUE(rep.sign_changes_ok);
}

TEST_P(ZeroGrid, CrossIntegralAtRandomPoints) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ab(0.2, 3.0), zz(0.2, 2.0);
  for (int k = 0; k < 20; ++k) {
    const auto r = cross_integral(Order(nu), ab(rng), ab(rng), zz(rng), ctx);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-10 * r.scale);
  }
}

INSTANTIATE_TEST_SUITE_P(DefaultGrid, ZeroGrid,
                         ::testing::Combine(::testing::Values(-0.5, 0.0, 0.3, 1.0, 1.5, 2.7),
                                            ::testing::ValuesIn(default_q_grid())));

TEST(Orthogonality, GramMatrixAndNormForms) {
  const auto rep = ortho_report(Order(0.5), 4, QContext<double>(0.8));
  const double diag = rep.gram.diagonal().cwiseAbs().maxCoeff();
  EXPECT_LE(rep.max_offdiag, 1e-8 * diag);
  EXPECT_LT(rep.max_diag_spread, 1e-9);
  EXPECT_LT(rep.max_diag_mismatch, 1e-9);
}

TEST(Orthogonality, NormAgainstOracle) {
  const auto rep = ortho_report(Order(0.0), 3, QContext<double>(0.6));
  EXPECT_LT(rel(rep.gram(0, 0), oracle::kNormZero06), 1e-11);
  for (int c = 0; c < 4; ++c) EXPECT_LT(rel(rep.diag_forms(0, c), oracle::kNormZero06), 1e-9);
}

TEST(Orthogonality, NormFormsRejectNonZero) {
  try {
    norm_forms(Order(0.5), AnchoredArg<double>::nearest(1.0, 0.25), QContext<double>(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAZero);
  }
}

TEST(DqZeros, OracleAndNormIdentity) {
  const auto t = dq_zero_table(Order(1.0), 2, QContext<double>(0.6));
  ASSERT_EQ(t.validate(), "");
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(rel(t.zeros[i].location, oracle::kDqZerosOne06[i]), 1e-12);
  }
  const auto u = dq_zero_table(Order(0.5), 3, QContext<double>(0.8));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(rel(u.zeros[i].location, oracle::kDqZerosHalf08[i]), 1e-12);
  }
}

class DqGrid : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(DqGrid, ThreeSimpleZeros) {
  const auto [nu, q] = GetParam();
  const QContext<double> ctx(q);
  const auto t = dq_zero_table(Order(nu), 3, ctx);
  EXPECT_EQ(t.validate(), "");
  for (const auto& z : t.zeros) {
    EXPECT_LT(rel(z.norm_direct, z.norm_closed), 1e-9);
    // J_nu(a) (D_q J_nu)'(a) < 0 at every zero a.
    EXPECT_LT(jq(Order(nu), z.point(), q * q, ctx).value * z.derivative, 0.0);
    const double lo = dq_jq_eval(Order(nu), AnchoredArg<double>{z.anchor, z.offset_lo}, ctx).value;
    const double hi = dq_jq_eval(Order(nu), AnchoredArg<double>{z.anchor, z.offset_hi}, ctx).value;
    EXPECT_NE(std::signbit(lo), std::signbit(hi));
    EXPECT_LE(z.bracket_lo, z.bracket_hi);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, DqGrid,
                         ::testing::Combine(::testing::Values(0.5, 1.0, 2.0), ::testing::Values(0.5, 0.8)));

TEST(DqZeros, NonPositiveOrderRejected) {
  EXPECT_THROW(dq_zero_table(Order(0.0), 2, QContext<double>(0.5)), Error);
}
