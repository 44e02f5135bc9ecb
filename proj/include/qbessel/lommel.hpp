#pragma once

// q-Lommel polynomials.
//
// Family 1 (base q) connects J_{nu+m}(x; q) to J_nu and J_{nu-1}:
//   J_{nu+m} = R_{m,nu} J_nu - R_{m-1,nu+1} J_{nu-1}.
// Family 2 (base q^2) does the same with shifted arguments:
//   J_{nu+m}(x q^m) = sum_i a_i(nu,m) x^{2i-m} J_nu(x q^i)
//                   + sum_j b_j(nu,m) x^{2j-m+1} J_{nu-1}(x q^j).
//
// Coefficient constructions take a QOrder {q, w = q^nu} and only ever
// multiply, add and divide, so they run unchanged on exact rationals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "qbessel/hahn_exton.hpp"

namespace qbessel {

template <typename T>
using CoeffVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using CoeffMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename T>
T ipow(const T& x, long k) {
  T result(1);
  T factor = k < 0 ? T(1) / x : x;
  for (long e = k < 0 ? -k : k; e > 0; e >>= 1) {
    if (e & 1) result *= factor;
    factor *= factor;
  }
  return result;
}

template <typename T>
CoeffVector<T> zeros(long n) {
  CoeffVector<T> v(n);
  for (long i = 0; i < n; ++i) v(i) = T(0);
  return v;
}

template <typename T>
CoeffMatrix<T> zeros(long rows, long cols) {
  CoeffMatrix<T> v(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) v(i, j) = T(0);
  return v;
}

/// |a - b| / max(|a|, |b|), and exactly 0 when a == b.
template <typename T>
T rel_diff(const T& a, const T& b) {
  using std::abs;
  if (a == b) return T(0);
  const T size = abs(a) > abs(b) ? abs(a) : abs(b);
  return abs(a - b) / size;
}

template <typename T>
T max_rel_diff(const CoeffVector<T>& a, const CoeffVector<T>& b) {
  if (a.size() != b.size()) fail(ErrorKind::DomainError, "coefficient vectors differ in length");
  T worst(0);
  for (long i = 0; i < a.size(); ++i) {
    const T d = rel_diff(a(i), b(i));
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace detail

/// An order nu together with a base q, held as (q, w = q^nu).
template <typename T>
struct QOrder {
  T q;
  T w;

  T qpow(long k) const { return detail::ipow(q, k); }
  /// q^{nu + k}
  T shifted_power(long k) const { return w * qpow(k); }
  QOrder shifted(long k) const { return {q, shifted_power(k)}; }
};

template <typename Scalar>
QOrder<Scalar> q_order(const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  using std::pow;
  require_base(q);
  return {q, pow(q, nu.nu())};
}

/// value(x) = sum_n coeffs(n) x^{2n - m}.
template <typename T>
struct LaurentPoly {
  long m = 0;
  CoeffVector<T> coeffs;

  template <typename X>
  X operator()(const X& x) const {
    X sum(0);
    for (long n = 0; n < coeffs.size(); ++n) sum += X(coeffs(n)) * detail::ipow(x, 2 * n - m);
    return sum;
  }
};

/// value(x) = sum_k coeffs(k) x^{2k}.
template <typename T>
struct PolyEven {
  long m = 0;
  CoeffVector<T> coeffs;

  template <typename X>
  X operator()(const X& x) const {
    X sum(0);
    for (long k = coeffs.size() - 1; k >= 0; --k) sum = sum * x * x + X(coeffs(k));
    return sum;
  }
};

/// value(x) = sum_k coeffs(k) x^k.
template <typename T>
struct Polynomial {
  CoeffVector<T> coeffs;

  template <typename X>
  X operator()(const X& x) const {
    X sum(0);
    for (long k = coeffs.size() - 1; k >= 0; --k) sum = sum * x + X(coeffs(k));
    return sum;
  }
};

template <typename Scalar = double>
struct HurwitzTrace {
  std::vector<long> m_list;
  std::vector<Scalar> approximants;
  Scalar target{0};
  std::vector<Scalar> deviations;

  bool strictly_decreasing() const {
    for (std::size_t i = 1; i < deviations.size(); ++i) {
      if (!(deviations[i] < deviations[i - 1])) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Family 1

/// R_{m,nu}(x; q) from R_{k+1} = (x + (1 - q^{nu+k})/x) R_k - R_{k-1}.
template <typename T>
LaurentPoly<T> lommel_R(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  CoeffVector<T> prev;
  CoeffVector<T> cur = detail::zeros<T>(1);
  cur(0) = T(1);
  for (long k = 0; k < m; ++k) {
    CoeffVector<T> next = detail::zeros<T>(k + 2);
    const T c = T(1) - o.shifted_power(k);
    for (long n = 0; n <= k; ++n) {
      next(n + 1) += cur(n);  // x * x^{2n-k} = x^{2(n+1)-(k+1)}
      next(n) += c * cur(n);  // x^{2n-k-1}
    }
    for (long n = 0; n < prev.size(); ++n) next(n + 1) -= prev(n);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {m, cur};
}

template <typename Scalar>
LaurentPoly<Scalar> lommel_R(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  return lommel_R(m, q_order(nu, q));
}

/// Coefficient n of R_{m,nu}: (q^{n+1})_inf (q^nu)_inf / ((q)_inf (q^{nu+m-n})_inf)
/// times 2phi1(q^{-n}, q^{nu+m-n}; q^nu; q, q^{n+1}).
template <typename Scalar>
LaurentPoly<Scalar> lommel_R_explicit(long m, const Order<Scalar>& nu,
                                      const QContext<Scalar>& ctx) {
  using std::pow;
  using std::real;
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  const Scalar v = nu.nu();
  if (is_integer_order(v) && nearest_integer(v) <= 0) {
    fail(ErrorKind::InvalidOrder, "q^nu is a pole of the explicit coefficient formula");
  }
  const Scalar q = ctx.q();
  LaurentPoly<Scalar> out{m, CoeffVector<Scalar>::Zero(m + 1)};
  for (long n = 0; n <= m; ++n) {
    const Scalar pre = qpochhammer_inf_ratio(Scalar(n + 1), Scalar(1), q, ctx).value *
                       qpochhammer_inf_ratio(v, v + Scalar(m - n), q, ctx).value;
    SeriesSpec<Scalar> spec;
    spec.num_params = {pow(q, Scalar(-n)), pow(q, v + Scalar(m - n))};
    spec.den_params = {pow(q, v)};
    spec.base = q;
    spec.arg = pow(q, Scalar(n + 1));
    out.coeffs(n) = pre * real(basic_hypergeometric(spec, ctx).value);
  }
  return out;
}

/// p_m(x) = x^m R_{m,nu}(x) from (x^2 + 1 - q^{nu+m}) p_m = p_{m+1} + x^2 p_{m-1}.
template <typename T>
PolyEven<T> p_poly(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  CoeffVector<T> prev;
  CoeffVector<T> cur = detail::zeros<T>(1);
  cur(0) = T(1);
  for (long k = 0; k < m; ++k) {
    CoeffVector<T> next = detail::zeros<T>(k + 2);
    const T c = T(1) - o.shifted_power(k);
    for (long n = 0; n <= k; ++n) {
      next(n + 1) += cur(n);
      next(n) += c * cur(n);
    }
    for (long n = 0; n < prev.size(); ++n) next(n + 1) -= prev(n);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {m, cur};
}

template <typename Scalar>
PolyEven<Scalar> p_poly(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  return p_poly(m, q_order(nu, q));
}

/// Taylor coefficients in t, through t^M, of
///   G(x, t) = sum_j q^{j nu} q^{j(j-1)/2} (-t)^j / ((t; q)_{j+1} (t x^2; q)_{j+1}),
/// each 1/(c t; q)_{j+1} expanded as sum_k (q^{j+1}; q)_k / (q; q)_k (c t)^k.
/// Coefficient m equals p_m(x).
template <typename Scalar>
std::vector<Scalar> generating_coeffs(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                                      long M, const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  if (M < 0) fail(ErrorKind::DomainError, "M must be >= 0");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  if (static_cast<std::size_t>(M) > ctx.max_terms()) {
    fail(ErrorKind::TruncationBudgetExceeded, "generating function order exceeds max_terms");
  }
  const Scalar q = ctx.q();
  const Scalar x2 = x * x;
  std::vector<Scalar> g(M + 1, Scalar(0));
  std::vector<Scalar> a(M + 1);
  std::vector<Scalar> b(M + 1);
  Scalar largest(0);
  for (long j = 0; j <= M; ++j) {
    const long len = M - j + 1;
    a[0] = Scalar(1);
    b[0] = Scalar(1);
    for (long k = 0; k + 1 < len; ++k) {
      a[k + 1] = a[k] * (Scalar(1) - pow(q, Scalar(j + 1 + k))) / (Scalar(1) - pow(q, Scalar(k + 1)));
      b[k + 1] = a[k + 1] * pow(x2, Scalar(k + 1));
    }
    const Scalar weight = (j % 2 ? Scalar(-1) : Scalar(1)) * pow(q, Scalar(j) * nu.nu()) *
                          pow(q, Scalar(j) * Scalar(j - 1) / Scalar(2));
    Scalar contribution(0);
    for (long k = 0; k < len; ++k) {
      Scalar c(0);
      for (long i = 0; i <= k; ++i) c += a[i] * b[k - i];
      g[k + j] += weight * c;
      contribution = std::max(contribution, abs(weight * c));
    }
    for (const Scalar& v : g) largest = std::max(largest, abs(v));
    if (j > 0 && contribution < ctx.eps() * largest) break;
  }
  return g;
}

template <typename Scalar = double>
struct ConnectionResidual {
  Scalar res_J{0};
  Scalar res_calJ{0};
};

/// Residuals of J_{nu+m} = R_{m,nu} J_nu - R_{m-1,nu+1} J_{nu-1} and of the
/// same relation for calJ, each relative to its largest term. Base q.
template <typename Scalar>
ConnectionResidual<Scalar> bessel_connection_residual(long m, const Order<Scalar>& nu,
                                                      std::type_identity_t<Scalar> x,
                                                      const QContext<Scalar>& ctx) {
  using std::abs;
  if (m < 1) fail(ErrorKind::DomainError, "m must be >= 1");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar q = ctx.q();
  const Scalar r = lommel_R(m, nu, q)(x);
  const Scalar s = lommel_R(m - 1, nu.shifted(Scalar(1)), q)(x);
  const Order<Scalar> top = nu.shifted(Scalar(m));
  const Order<Scalar> low = nu.shifted(Scalar(-1));
  auto residual = [&](auto lhs, auto t1, auto t2) {
    const Scalar size = std::max({Scalar(abs(lhs)), Scalar(abs(t1)), Scalar(abs(t2))});
    return Scalar(abs(lhs - (t1 - t2))) / size;
  };
  ConnectionResidual<Scalar> out;
  out.res_J = residual(jq(top, x, q, ctx).value, r * jq(nu, x, q, ctx).value,
                       s * jq(low, x, q, ctx).value);
  out.res_calJ = residual(jq_second(top, x, q, ctx).value, r * jq_second(nu, x, q, ctx).value,
                          s * jq_second(low, x, q, ctx).value);
  return out;
}

/// C_nu(x; q) {J_{nu-1} calJ_{nu+m} - J_{nu+m} calJ_{nu-1}} with
///   C_nu = x e^{-i nu pi} q^{-nu(nu-1)/2} (q; q)_inf^2 / ((q^nu; q)_inf (q^{1-nu}; q)_inf).
/// For non-integer nu this reproduces R_{m,nu}(x; q). The scale is |C_nu| times
/// the sum of the magnitudes of the two products.
template <typename Scalar>
SeriesResult<std::complex<Scalar>> casoratian_R_eval(long m, const Order<Scalar>& nu,
                                                     std::type_identity_t<Scalar> x,
                                                     const QContext<Scalar>& ctx) {
  using std::abs;
  using std::conj;
  using std::pow;
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  if (nu.is_integer()) {
    fail(ErrorKind::IntegerOrder, "the Casoratian form needs a non-integer order; use lommel_R");
  }
  const Scalar q = ctx.q();
  const Scalar v = nu.nu();
  const Scalar qq = qpochhammer_inf(q, q, ctx).value;
  const Scalar c_real = x * pow(q, -v * (v - Scalar(1)) / Scalar(2)) * qq * qq /
                        (qpochhammer_inf(pow(q, v), q, ctx).value *
                         qpochhammer_inf(pow(q, Scalar(1) - v), q, ctx).value);
  const std::complex<Scalar> c = c_real * conj(detail::unit_phase(v));
  const Order<Scalar> top = nu.shifted(Scalar(m));
  const Order<Scalar> low = nu.shifted(Scalar(-1));
  const auto p1 = jq(low, x, q, ctx).value * jq_second(top, x, q, ctx).value;
  const auto p2 = jq(top, x, q, ctx).value * jq_second(low, x, q, ctx).value;
  SeriesResult<std::complex<Scalar>> out;
  out.value = c * (p1 - p2);
  out.scale = abs(c_real) * (abs(p1) + abs(p2));
  return out;
}

template <typename Scalar>
std::complex<Scalar> casoratian_R(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                                  const QContext<Scalar>& ctx) {
  return casoratian_R_eval(m, nu, x, ctx).value;
}

/// Residual of R_{m+1,nu} = (x + (1 - q^nu)/x) R_{m,nu+1} - R_{m-1,nu+2}.
template <typename Scalar>
Scalar order_recurrence_residual(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                      std::type_identity_t<Scalar> q) {
  using std::abs;
  using std::pow;
  if (m < 1) fail(ErrorKind::DomainError, "m must be >= 1");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar lhs = lommel_R(m + 1, nu, q)(x);
  const Scalar t1 = (x + (Scalar(1) - pow(q, nu.nu())) / x) * lommel_R(m, nu.shifted(Scalar(1)), q)(x);
  const Scalar t2 = lommel_R(m - 1, nu.shifted(Scalar(2)), q)(x);
  return abs(lhs - (t1 - t2)) / std::max({abs(lhs), abs(t1), abs(t2)});
}

/// x^m R_{m,nu}(x; q) against (q; q)_inf / (x^2; q)_inf x^{1-nu} J_{nu-1}(x; q).
template <typename Scalar>
HurwitzTrace<Scalar> hurwitz_R(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                               const std::vector<long>& m_list, const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  if (!(x > Scalar(0) && x < Scalar(1))) fail(ErrorKind::DomainError, "Hurwitz limit needs 0 < x < 1");
  const Scalar q = ctx.q();
  const auto fine = machine_precision(ctx);
  HurwitzTrace<Scalar> out;
  out.target = qpochhammer_inf(q, q, fine).value / qpochhammer_inf(x * x, q, fine).value *
               pow(x, Scalar(1) - nu.nu()) * jq(nu.shifted(Scalar(-1)), x, q, fine).value;
  for (long m : m_list) {
    if (!out.m_list.empty() && m <= out.m_list.back()) {
      fail(ErrorKind::DomainError, "m_list must be strictly increasing");
    }
    const Scalar approx = p_poly(m, nu, q)(x);
    out.m_list.push_back(m);
    out.approximants.push_back(approx);
    out.deviations.push_back(abs(approx - out.target) / abs(out.target));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family 2 (base q^2)

/// a_i(nu, m) for 0 <= i <= m/2 and b_j(nu, m) for 0 <= j <= (m-1)/2.
/// Entries outside those ranges are zero.
template <typename T>
struct CoeffTable {
  QOrder<T> order;
  long m_max = 0;
  CoeffMatrix<T> a_values;  // (i, m)
  CoeffMatrix<T> b_values;  // (j, m)

  T a(long i, long m) const {
    if (m < 0 || m > m_max || i < 0 || 2 * i > m) return T(0);
    return a_values(i, m);
  }
  T b(long j, long m) const {
    if (m < 1 || m > m_max || j < 0 || 2 * j > m - 1) return T(0);
    return b_values(j, m);
  }
};

namespace detail {

/// a_i(nu, m+1) = q^{-(nu+1)-2m} (1 - q^{2(nu+m)}) a_i(nu, m) - q^{-nu+2(i-1-m)} a_{i-1}(nu, m-1).
template <typename T>
CoeffMatrix<T> a_by_recurrence(const QOrder<T>& o, long m_max) {
  CoeffMatrix<T> a = zeros<T>(m_max / 2 + 1, m_max + 1);
  a(0, 0) = T(1);
  auto get = [&](long i, long m) { return (m < 0 || i < 0 || 2 * i > m) ? T(0) : a(i, m); };
  for (long m = 0; m < m_max; ++m) {
    const T s = o.shifted_power(m);
    const T lead = (T(1) - s * s) / o.shifted_power(1 + 2 * m);
    for (long i = 0; 2 * i <= m + 1; ++i) {
      a(i, m + 1) = lead * get(i, m) - o.qpow(2 * (i - 1 - m)) / o.w * get(i - 1, m - 1);
    }
  }
  return a;
}

}  // namespace detail

/// a from its recurrence; b(nu, m+1) = -q^{2j-m-nu-1} a_j(nu+1, m).
template <typename T>
CoeffTable<T> coeff_table(const QOrder<T>& o, long m_max) {
  if (m_max < 0) fail(ErrorKind::DomainError, "m_max must be >= 0");
  CoeffTable<T> t;
  t.order = o;
  t.m_max = m_max;
  t.a_values = detail::a_by_recurrence(o, m_max);
  t.b_values = detail::zeros<T>(std::max<long>((m_max + 1) / 2, 1), m_max + 1);
  if (m_max >= 1) {
    const CoeffMatrix<T> up = detail::a_by_recurrence(o.shifted(1), m_max - 1);
    for (long m = 0; m + 1 <= m_max; ++m) {
      for (long j = 0; 2 * j <= m; ++j) {
        t.b_values(j, m + 1) = -o.qpow(2 * j - m - 1) / o.w * up(j, m);
      }
    }
  }
  return t;
}

template <typename Scalar>
CoeffTable<Scalar> coeff_table(const Order<Scalar>& nu, long m_max, std::type_identity_t<Scalar> q) {
  return coeff_table(q_order(nu, q), m_max);
}

/// b_j(nu, m) from the recurrence obtained by inserting the relation between
/// J_{nu+m+1}(x q^{m+1}) and J_{nu+m}(x q^m) into the decomposition:
///   b_j(m+1) = q^{-nu-1-2m} (1 - q^{2(nu+m)}) b_j(m) - q^{-nu-1-2m+2j} b_{j-1}(m-1),
/// started from b_0(nu, 1) = -q^{-nu-1}.
template <typename T>
CoeffMatrix<T> b_by_recurrence(const QOrder<T>& o, long m_max) {
  CoeffMatrix<T> b = detail::zeros<T>(std::max<long>((m_max + 1) / 2, 1), m_max + 1);
  if (m_max < 1) return b;
  b(0, 1) = T(-1) / o.shifted_power(1);
  auto get = [&](long j, long m) { return (m < 1 || j < 0 || 2 * j > m - 1) ? T(0) : b(j, m); };
  for (long m = 1; m < m_max; ++m) {
    const T s = o.shifted_power(m);
    const T scale = T(1) / o.shifted_power(1 + 2 * m);
    for (long j = 0; 2 * j <= m; ++j) {
      b(j, m + 1) = scale * (T(1) - s * s) * get(j, m) - scale * o.qpow(2 * j) * get(j - 1, m - 1);
    }
  }
  return b;
}

/// a_i(nu, m) = q^{-m(m+nu)} q^{i(3i+nu-1)} (-1)^i (q^{2nu}; q^2)_{m-i} (q^2; q^2)_{m-i}
///              / ((q^2; q^2)_i (q^{2nu}; q^2)_i (q^2; q^2)_{m-2i}).
template <typename T>
T a_explicit(const QOrder<T>& o, long i, long m) {
  if (i < 0 || 2 * i > m) return T(0);
  const T big_q = o.q * o.q;
  const T w2 = o.w * o.w;
  T value = detail::ipow(o.q, -m * m + 3 * i * i - i) * detail::ipow(o.w, i - m);
  value *= qpochhammer(w2, big_q, m - i) * qpochhammer(big_q, big_q, m - i);
  value /= qpochhammer(big_q, big_q, i) * qpochhammer(w2, big_q, i) *
           qpochhammer(big_q, big_q, m - 2 * i);
  return i % 2 ? -value : value;
}

/// Largest relative difference between the recurrence and closed form of a_i(nu, m).
template <typename T>
T a_recurrence_vs_explicit(const QOrder<T>& o, long m_max) {
  const auto t = coeff_table(o, m_max);
  T worst(0);
  for (long m = 0; m <= m_max; ++m) {
    for (long i = 0; 2 * i <= m; ++i) {
      const T d = detail::rel_diff(t.a(i, m), a_explicit(o, i, m));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

/// b from the shifted-order table against b from its own recurrence.
template <typename T>
T b_table_check(const QOrder<T>& o, long m_max) {
  const auto t = coeff_table(o, m_max);
  const auto b = b_by_recurrence(o, m_max);
  T worst(0);
  for (long m = 1; m <= m_max; ++m) {
    for (long j = 0; 2 * j <= m - 1; ++j) {
      const T d = detail::rel_diff(t.b(j, m), b(j, m));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

/// a_i(nu, m+1) = q^{i-m-nu-1} (1 - q^{2nu}) a_i(nu+1, m) + q^{2i-m-1} b_{i-1}(nu+1, m).
template <typename T>
T a_shift_check(const QOrder<T>& o, long m_max) {
  const auto here = coeff_table(o, m_max + 1);
  const auto up = coeff_table(o.shifted(1), m_max);
  T worst(0);
  for (long m = 0; m <= m_max; ++m) {
    for (long i = 0; 2 * i <= m + 1; ++i) {
      const T rhs = o.qpow(i - m - 1) / o.w * (T(1) - o.w * o.w) * up.a(i, m) +
                    o.qpow(2 * i - m - 1) * up.b(i - 1, m);
      const T d = detail::rel_diff(here.a(i, m + 1), rhs);
      if (d > worst) worst = d;
    }
  }
  return worst;
}

/// Normalized residual of the decomposition of J_{nu+m}(x q^m; q^2) into
/// J_nu(x q^i; q^2) and J_{nu-1}(x q^j; q^2).
template <typename Scalar>
Scalar decomposition_residual(const Order<Scalar>& nu, long m, std::type_identity_t<Scalar> x,
                        const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const auto t = coeff_table(nu, m, q);
  const Scalar lhs = jq(nu.shifted(Scalar(m)), x * pow(q, Scalar(m)), base, ctx).value;
  const Order<Scalar> low = nu.shifted(Scalar(-1));
  Scalar rhs(0);
  Scalar size = abs(lhs);
  for (long i = 0; 2 * i <= m; ++i) {
    const Scalar term = t.a(i, m) * pow(x, Scalar(2 * i - m)) * jq(nu, x * pow(q, Scalar(i)), base, ctx).value;
    rhs += term;
    size = std::max(size, abs(term));
  }
  for (long j = 0; 2 * j <= m - 1; ++j) {
    const Scalar term = t.b(j, m) * pow(x, Scalar(2 * j - m + 1)) *
                        jq(low, x * pow(q, Scalar(j)), base, ctx).value;
    rhs += term;
    size = std::max(size, abs(term));
  }
  return size == Scalar(0) ? Scalar(0) : abs(lhs - rhs) / size;
}

template <typename T>
struct RFamily {
  /// r_{m,nu}(x; q^2) = sum_i a_i q^{-i(i+1)} x^{2i-m}; coeffs indexed by i.
  LaurentPoly<T> r;
  /// h_{m,nu}(x) = r_{m,nu}(1/x).
  Polynomial<T> h;
  /// Ismail's polynomial from
  ///   h~_{k+1} = 2 (1 - q^{2(nu+k)}) x h~_k - q^{2(k+nu-1)} h~_{k-1}.
  Polynomial<T> htilde;
};

template <typename T>
RFamily<T> r_family(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  const auto t = coeff_table(o, m);
  RFamily<T> out;
  out.r = {m, detail::zeros<T>(m / 2 + 1)};
  out.h.coeffs = detail::zeros<T>(m + 1);
  for (long i = 0; 2 * i <= m; ++i) {
    const T c = t.a(i, m) * o.qpow(-i * (i + 1));
    out.r.coeffs(i) = c;
    out.h.coeffs(m - 2 * i) = c;
  }
  CoeffVector<T> prev;
  CoeffVector<T> cur = detail::zeros<T>(1);
  cur(0) = T(1);
  for (long k = 0; k < m; ++k) {
    CoeffVector<T> next = detail::zeros<T>(k + 2);
    const T s = o.shifted_power(k);
    for (long n = 0; n <= k; ++n) next(n + 1) += T(2) * (T(1) - s * s) * cur(n);
    if (k > 0) {
      const T c = o.w * o.w * o.qpow(2 * k - 2);
      for (long n = 0; n < prev.size(); ++n) next(n) -= c * prev(n);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  out.htilde.coeffs = cur;
  return out;
}

template <typename Scalar>
RFamily<Scalar> r_family(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  return r_family(m, q_order(nu, q));
}

/// Coefficients of h~_{m,nu}(x; q^2) in closed form: the coefficient of x^{m-2j} is
///   2^{m-2j} (-1)^j (q^{2nu}; q^2)_{m-j} (q^2; q^2)_{m-j}
///   / ((q^2; q^2)_j (q^{2nu}; q^2)_j (q^2; q^2)_{m-2j}) q^{2j(j+nu-1)}.
template <typename T>
Polynomial<T> htilde_explicit(long m, const QOrder<T>& o) {
  const T big_q = o.q * o.q;
  const T w2 = o.w * o.w;
  Polynomial<T> out{detail::zeros<T>(m + 1)};
  for (long j = 0; 2 * j <= m; ++j) {
    T c = detail::ipow(T(2), m - 2 * j) * qpochhammer(w2, big_q, m - j) *
          qpochhammer(big_q, big_q, m - j) /
          (qpochhammer(big_q, big_q, j) * qpochhammer(w2, big_q, j) *
           qpochhammer(big_q, big_q, m - 2 * j));
    c *= detail::ipow(o.q, 2 * j * (j - 1)) * detail::ipow(w2, j);
    out.coeffs(m - 2 * j) = j % 2 ? -c : c;
  }
  return out;
}

/// h_{m,nu}(x; q^2) = q^{-3m nu/2 - m^2} h~_{m,nu}(q^{nu/2} x / 2; q^2), written
/// coefficientwise so that only integer powers of w = q^nu appear: the
/// coefficient of x^{m-2i} is q^{-m^2} w^{-m-i} 2^{-(m-2i)} times that of h~.
template <typename T>
Polynomial<T> h_from_htilde(long m, const QOrder<T>& o, const Polynomial<T>& htilde) {
  Polynomial<T> out{detail::zeros<T>(m + 1)};
  for (long i = 0; 2 * i <= m; ++i) {
    out.coeffs(m - 2 * i) = detail::ipow(o.q, -m * m) * detail::ipow(o.w, -m - i) /
                            detail::ipow(T(2), m - 2 * i) * htilde.coeffs(m - 2 * i);
  }
  return out;
}

/// r_{m,nu} from q^{2m} r_{m+1} = q^{-(nu+1)} (1 - q^{2(nu+m)}) x^{-1} r_m - q^{-(nu+2)} r_{m-1},
/// with r_0 = 1, r_1 = q^{-(nu+1)} (1 - q^{2nu}) x^{-1}.
template <typename T>
LaurentPoly<T> r_by_recurrence(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  CoeffVector<T> prev;
  CoeffVector<T> cur = detail::zeros<T>(1);
  cur(0) = T(1);
  for (long k = 0; k < m; ++k) {
    CoeffVector<T> next = detail::zeros<T>((k + 1) / 2 + 1);
    const T s = o.shifted_power(k);
    const T lead = (T(1) - s * s) / o.shifted_power(1) / o.qpow(2 * k);
    for (long i = 0; i < cur.size(); ++i) next(i) += lead * cur(i);
    if (k > 0) {
      const T c = T(1) / (o.shifted_power(2) * o.qpow(2 * k));
      for (long i = 0; i < prev.size(); ++i) next(i + 1) -= c * prev(i);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {m, cur};
}

/// Worst relative coefficient mismatch over m <= m_max among r_family,
/// r_by_recurrence, h~ by recurrence against its closed form, and h against h~.
template <typename T>
struct RFamilyCheck {
  T r_recurrence{0};
  T htilde_closed_form{0};
  T h_vs_htilde{0};
};

template <typename T>
RFamilyCheck<T> r_family_check(const QOrder<T>& o, long m_max) {
  RFamilyCheck<T> out;
  for (long m = 0; m <= m_max; ++m) {
    const auto fam = r_family(m, o);
    const auto upd = [](T& worst, const T& d) {
      if (d > worst) worst = d;
    };
    upd(out.r_recurrence, detail::max_rel_diff(fam.r.coeffs, r_by_recurrence(m, o).coeffs));
    upd(out.htilde_closed_form, detail::max_rel_diff(fam.htilde.coeffs, htilde_explicit(m, o).coeffs));
    upd(out.h_vs_htilde, detail::max_rel_diff(fam.h.coeffs, h_from_htilde(m, o, fam.htilde).coeffs));
  }
  return out;
}

/// r~_{m,nu}(x; q^2) = sum_i a_i(nu, m) q^{-2i(i-1)} x^{2i-m}.
template <typename T>
LaurentPoly<T> tilde_r(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  const auto t = coeff_table(o, m);
  LaurentPoly<T> out{m, detail::zeros<T>(m / 2 + 1)};
  for (long i = 0; 2 * i <= m; ++i) out.coeffs(i) = t.a(i, m) * o.qpow(-2 * i * (i - 1));
  return out;
}

template <typename Scalar>
LaurentPoly<Scalar> tilde_r(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> q) {
  return tilde_r(m, q_order(nu, q));
}

/// r~_{m,nu} read off the terminating series
///   x^{-m} q^{-m(m+nu)} (q^{2nu}; q^2)_m
///   5phi3(q^{1-m}, -q^{1-m}, q^{-m}, -q^{-m}, 0; q^{2nu}, q^{2(1-m-nu)}, q^{-2m}; q^2, x^2 q^{2-nu}).
template <typename Scalar>
LaurentPoly<Scalar> tilde_r_explicit(long m, const Order<Scalar>& nu, const QContext<Scalar>& ctx) {
  using std::pow;
  using std::real;
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  const Scalar q = ctx.q();
  const Scalar v = nu.nu();
  const Scalar base = q * q;
  if (is_integer_order(v) && nearest_integer(v) <= 0) {
    fail(ErrorKind::InvalidOrder, "(q^{2nu}; q^2)_k vanishes for this order");
  }
  SeriesSpec<Scalar> spec;
  spec.num_params = {pow(q, Scalar(1 - m)), -pow(q, Scalar(1 - m)), pow(q, Scalar(-m)),
                     -pow(q, Scalar(-m)), Scalar(0)};
  spec.den_params = {pow(q, Scalar(2) * v), pow(q, Scalar(2) * (Scalar(1 - m) - v)),
                     pow(q, Scalar(-2 * m))};
  spec.base = base;
  spec.arg = pow(q, Scalar(2) - v);
  const auto terms = hypergeometric_terms(spec, static_cast<std::size_t>(m / 2 + 1));
  const Scalar pre = pow(q, -Scalar(m) * (Scalar(m) + v)) * qpochhammer(pow(q, Scalar(2) * v), base, m);
  LaurentPoly<Scalar> out{m, CoeffVector<Scalar>::Zero(m / 2 + 1)};
  for (long k = 0; 2 * k <= m; ++k) out.coeffs(k) = pre * real(terms[k]);
  return out;
}

/// Residual of
///   r_{m+1,nu}(x) = x^{-1} (1 - q^{2nu}) q^{-(m/2+nu+1)} r_{m,nu+1}(x q^{1/2}) - q^{-(m+nu+3)} r_{m-1,nu+2}(x q).
template <typename Scalar>
Scalar r_order_recurrence_residual(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                        std::type_identity_t<Scalar> q) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (m < 1) fail(ErrorKind::DomainError, "m must be >= 1");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar v = nu.nu();
  const Scalar lhs = r_family(m + 1, nu, q).r(x);
  const Scalar t1 = (Scalar(1) - pow(q, Scalar(2) * v)) / x *
                    pow(q, -(Scalar(m) / Scalar(2) + v + Scalar(1))) *
                    r_family(m, nu.shifted(Scalar(1)), q).r(x * sqrt(q));
  const Scalar t2 = pow(q, -(Scalar(m) + v + Scalar(3))) * r_family(m - 1, nu.shifted(Scalar(2)), q).r(x * q);
  return abs(lhs - (t1 - t2)) / std::max({abs(lhs), abs(t1), abs(t2)});
}

/// Residual of
///   r~_{m+1}(x) = x^{-1} q^{-nu-1-2m} (1 - q^{2(nu+m)}) r~_m(x) - q^{1-nu-3m} r~_{m-1}(x/q).
template <typename Scalar>
Scalar tilde_r_recurrence_residual(long m, const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                          std::type_identity_t<Scalar> q) {
  using std::abs;
  using std::pow;
  if (m < 1) fail(ErrorKind::DomainError, "m must be >= 1");
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar v = nu.nu();
  const Scalar lhs = tilde_r(m + 1, nu, q)(x);
  const Scalar t1 = pow(q, -v - Scalar(1 + 2 * m)) * (Scalar(1) - pow(q, Scalar(2) * (v + Scalar(m)))) / x *
                    tilde_r(m, nu, q)(x);
  const Scalar t2 = pow(q, Scalar(1) - v - Scalar(3 * m)) * tilde_r(m - 1, nu, q)(x / q);
  return abs(lhs - (t1 - t2)) / std::max({abs(lhs), abs(t1), abs(t2)});
}

/// Coefficients c_i of x^m q^{m(m+nu)} r~_{m,nu}(x; q^2) = sum_i c_i x^{2i}.
/// The factor q^{m(m+nu)} is absorbed into the recurrence
///   c_i(m+1) = (1 - q^{2(nu+m)}) c_i(m) - q^{2(m-i+1)+nu} c_{i-1}(m-1),
/// so nothing underflows for large m.
template <typename T>
CoeffVector<T> scaled_tilde_r(long m, const QOrder<T>& o) {
  if (m < 0) fail(ErrorKind::DomainError, "m must be >= 0");
  CoeffVector<T> prev;
  CoeffVector<T> cur = detail::zeros<T>(1);
  cur(0) = T(1);
  for (long k = 0; k < m; ++k) {
    CoeffVector<T> next = detail::zeros<T>((k + 1) / 2 + 1);
    const T s = o.shifted_power(k);
    for (long i = 0; i < cur.size(); ++i) next(i) += (T(1) - s * s) * cur(i);
    for (long i = 0; i < prev.size(); ++i) next(i + 1) -= o.shifted_power(2 * (k - i)) * prev(i);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// x^m q^{m(m+nu)} r~_{m,nu}(x; q^2) against
/// (q^2; q^2)_inf x^{1-nu} q^{nu(1-nu)/2} J_{nu-1}(x q^{nu/2}; q^2).
template <typename Scalar>
HurwitzTrace<Scalar> hurwitz_tilde_r(const Order<Scalar>& nu, std::type_identity_t<Scalar> x,
                                     const std::vector<long>& m_list, const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  if (!(x > Scalar(0))) fail(ErrorKind::DomainError, "x must be positive");
  const Scalar q = ctx.q();
  const Scalar base = q * q;
  const Scalar v = nu.nu();
  const auto fine = machine_precision(ctx);
  HurwitzTrace<Scalar> out;
  out.target = qpochhammer_inf(base, base, fine).value * pow(x, Scalar(1) - v) *
               pow(q, v * (Scalar(1) - v) / Scalar(2)) *
               jq(nu.shifted(Scalar(-1)), x * pow(q, v / Scalar(2)), base, fine).value;
  const auto o = q_order(nu, q);
  for (long m : m_list) {
    if (!out.m_list.empty() && m <= out.m_list.back()) {
      fail(ErrorKind::DomainError, "m_list must be strictly increasing");
    }
    const PolyEven<Scalar> p{m, scaled_tilde_r(m, o)};
    const Scalar approx = p(x);
    out.m_list.push_back(m);
    out.approximants.push_back(approx);
    out.deviations.push_back(abs(approx - out.target) / abs(out.target));
  }
  return out;
}

}  // namespace qbessel
