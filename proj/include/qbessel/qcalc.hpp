#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qbessel/error.hpp"
#include "qbessel/summation.hpp"

namespace qbessel {

template <typename T>
struct real_type {
  using type = T;
};
template <typename T>
struct real_type<std::complex<T>> {
  using type = T;
};
template <typename T>
using real_t = typename real_type<T>::type;

template <typename T>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

inline constexpr double kDefaultEps = 1e-12;
inline constexpr std::size_t kDefaultMaxTerms = 200000;
/// Orders closer than this to an integer are treated as that integer.
inline constexpr double kIntegerTolerance = 1e-12;

/// Base q in (0, 1) plus the numeric budget every series in the library is
/// truncated against.
template <typename Scalar = double>
class QContext {
 public:
  explicit QContext(Scalar q, Scalar eps = Scalar(kDefaultEps),
                    std::size_t max_terms = kDefaultMaxTerms)
      : q_(q), eps_(eps), max_terms_(max_terms) {
    if (!(q > Scalar(0) && q < Scalar(1))) {
      fail(ErrorKind::DomainError, "base q must lie strictly inside (0, 1)");
    }
    if (!(eps > Scalar(0))) fail(ErrorKind::DomainError, "eps must be positive");
    if (max_terms < 1) fail(ErrorKind::DomainError, "max_terms must be >= 1");
  }

  Scalar q() const { return q_; }
  Scalar eps() const { return eps_; }
  std::size_t max_terms() const { return max_terms_; }

  QContext with_q(Scalar q) const { return QContext(q, eps_, max_terms_); }
  QContext with_eps(Scalar eps) const { return QContext(q_, eps, max_terms_); }

 private:
  Scalar q_;
  Scalar eps_;
  std::size_t max_terms_;
};

/// A truncated series or product together with what is known about the
/// part that was dropped. `scale` is the sum of absolute values of the
/// accumulated terms (the conditioning scale of the sum).
/// Same q and term budget with eps at the working precision. Infinite
/// products inside a series and limits that the Hurwitz checks approach at
/// the rounding level are summed with it, whatever eps the caller chose.
template <typename Scalar>
QContext<Scalar> machine_precision(const QContext<Scalar>& ctx) {
  return ctx.with_eps(std::min(ctx.eps(), Scalar(Scalar(4) * std::numeric_limits<Scalar>::epsilon())));
}

template <typename T>
struct SeriesResult {
  T value{};
  real_t<T> tail_bound{0};
  real_t<T> scale{0};
  std::size_t terms_used = 0;
};

template <typename Scalar>
bool is_integer_order(const Scalar& nu) {
  using std::abs;
  using std::round;
  return abs(nu - round(nu)) < Scalar(kIntegerTolerance);
}

template <typename Scalar>
long nearest_integer(const Scalar& nu) {
  using std::round;
  return static_cast<long>(round(nu));
}

inline void require_base(double base) {
  if (!(base > 0.0 && base < 1.0)) {
    fail(ErrorKind::DomainError, "base must lie strictly inside (0, 1)");
  }
}

template <typename Scalar>
void require_base(const Scalar& base) {
  if (!(base > Scalar(0) && base < Scalar(1))) {
    fail(ErrorKind::DomainError, "base must lie strictly inside (0, 1)");
  }
}

// ---------------------------------------------------------------------------
// q-shifted factorials

/// (a; base)_k. Finite product, so it is exact for exact scalar types.
template <typename T, typename Scalar>
T qpochhammer(const T& a, const Scalar& base, std::size_t k) {
  T result(1);
  Scalar power(1);
  for (std::size_t j = 0; j < k; ++j) {
    result *= T(1) - a * power;
    power *= base;
  }
  return result;
}

template <typename T, typename Scalar>
T qpochhammer(const T& a, const QContext<Scalar>& ctx, std::size_t k) {
  return qpochhammer(a, ctx.q(), k);
}

namespace detail {

// Relative error of a product whose omitted factors (1 - u_j) satisfy
// sum |u_j| <= t < 1:  |log prod| <= t / (1 - t).
template <typename Scalar>
Scalar product_tail_relative_error(const Scalar& t) {
  using std::expm1;
  if (!(t < Scalar(1))) return std::numeric_limits<Scalar>::infinity();
  return expm1(t / (Scalar(1) - t));
}

}  // namespace detail

/// (a; base)_inf, truncated once the geometric tail |a| base^K / (1 - base)
/// of the remaining factors drops below eps.
template <typename T, typename Scalar>
SeriesResult<T> qpochhammer_inf(const T& a, const Scalar& base,
                                 const QContext<Scalar>& ctx) {
  using std::abs;
  require_base(base);
  SeriesResult<T> out;
  T product(1);
  Scalar power(1);
  const Scalar one_minus_base = Scalar(1) - base;
  for (std::size_t j = 0; j < ctx.max_terms(); ++j) {
    const Scalar tail = abs(a) * power / one_minus_base;
    if (tail < ctx.eps() || product == T(0)) {
      out.value = product;
      out.tail_bound = abs(product) * detail::product_tail_relative_error(tail);
      out.scale = abs(product);
      out.terms_used = j;
      return out;
    }
    product *= T(1) - a * power;
    power *= base;
  }
  fail(ErrorKind::TruncationBudgetExceeded,
       "q-Pochhammer product did not reach its tail bound within max_terms");
}

template <typename T, typename Scalar>
SeriesResult<T> qpochhammer_inf(const T& a, const QContext<Scalar>& ctx) {
  return qpochhammer_inf(a, ctx.q(), ctx);
}

/// (base^s; base)_inf for a real exponent s. Exactly zero when s is a
/// non-positive integer, where floating-point evaluation of the vanishing
/// factor would otherwise leave rounding noise.
template <typename Scalar>
SeriesResult<Scalar> qpochhammer_inf_power(const Scalar& s, const Scalar& base,
                                           const QContext<Scalar>& ctx) {
  using std::pow;
  if (is_integer_order(s) && nearest_integer(s) <= 0) {
    SeriesResult<Scalar> zero;
    zero.terms_used = static_cast<std::size_t>(1 - nearest_integer(s));
    return zero;
  }
  return qpochhammer_inf(Scalar(pow(base, s)), base, ctx);
}

/// (base^s_num; base)_inf / (base^s_den; base)_inf evaluated as one product
/// of factor ratios, so neither the numerator nor the denominator has to be
/// representable on its own (both underflow for base close to 1).
template <typename Scalar>
SeriesResult<Scalar> qpochhammer_inf_ratio(const Scalar& s_num, const Scalar& s_den,
                                           const Scalar& base,
                                           const QContext<Scalar>& ctx) {
  using std::abs;
  using std::pow;
  require_base(base);
  if (is_integer_order(s_den) && nearest_integer(s_den) <= 0) {
    fail(ErrorKind::InvalidDenominator,
         "denominator product (base^s; base)_inf vanishes for s = " + std::to_string(double(s_den)));
  }
  SeriesResult<Scalar> out;
  if (is_integer_order(s_num) && nearest_integer(s_num) <= 0) {
    out.terms_used = 1;
    return out;
  }
  Scalar a = pow(base, s_num);
  Scalar b = pow(base, s_den);
  Scalar product(1);
  const Scalar one_minus_base = Scalar(1) - base;
  for (std::size_t j = 0; j < ctx.max_terms(); ++j) {
    const Scalar largest = std::max(abs(a), abs(b));
    if (largest < Scalar(0.5)) {
      const Scalar t = (abs(a) + abs(b)) / (one_minus_base * (Scalar(1) - largest));
      if (t < ctx.eps()) {
        out.value = product;
        out.tail_bound = abs(product) * detail::product_tail_relative_error(t);
        out.scale = abs(product);
        out.terms_used = j;
        return out;
      }
    }
    product *= (Scalar(1) - a) / (Scalar(1) - b);
    a *= base;
    b *= base;
  }
  fail(ErrorKind::TruncationBudgetExceeded,
       "q-Pochhammer ratio did not reach its tail bound within max_terms");
}

// ---------------------------------------------------------------------------
// Basic hypergeometric series

/// Parameters of r-phi-s(a_1..a_r; b_1..b_s; base, arg), with the
/// ((-1)^k base^{k(k-1)/2})^{1+s-r} convention factor built into the terms.
template <typename Scalar = double>
struct SeriesSpec {
  using Complex = std::complex<Scalar>;
  std::vector<Complex> num_params;
  std::vector<Complex> den_params;
  Scalar base{0.5};
  Complex arg{0};
};

namespace detail {

/// Number n >= 0 such that the parameter equals base^{-n}, if any.
template <typename Scalar>
std::optional<long> negative_power_index(const std::complex<Scalar>& a,
                                         const Scalar& base) {
  using std::abs;
  using std::log;
  if (a.real() <= Scalar(0) || abs(a.imag()) > Scalar(kIntegerTolerance) * abs(a.real())) {
    return std::nullopt;
  }
  const Scalar s = log(a.real()) / log(base);
  if (!is_integer_order(s)) return std::nullopt;
  const long n = -nearest_integer(s);
  if (n < 0) return std::nullopt;
  return n;
}

template <typename Scalar>
std::optional<long> termination_index(const SeriesSpec<Scalar>& spec) {
  std::optional<long> best;
  for (const auto& a : spec.num_params) {
    if (auto n = negative_power_index(a, spec.base)) {
      if (!best || *n < *best) best = n;
    }
  }
  return best;
}

/// Ratio t_{k+1} / t_k of consecutive terms.
template <typename Scalar>
std::complex<Scalar> term_ratio(const SeriesSpec<Scalar>& spec, const Scalar& base_k) {
  using Complex = std::complex<Scalar>;
  Complex ratio = spec.arg / Complex(Scalar(1) - base_k * spec.base);
  for (const auto& a : spec.num_params) ratio *= Complex(1) - a * base_k;
  for (const auto& b : spec.den_params) ratio /= Complex(1) - b * base_k;
  const long excess = 1 + static_cast<long>(spec.den_params.size()) -
                      static_cast<long>(spec.num_params.size());
  const Scalar convention = -base_k;
  if (excess > 0) {
    for (long e = 0; e < excess; ++e) ratio *= convention;
  } else {
    for (long e = 0; e < -excess; ++e) ratio /= convention;
  }
  return ratio;
}

template <typename Scalar>
void check_denominators(const SeriesSpec<Scalar>& spec, std::optional<long> stop) {
  for (const auto& b : spec.den_params) {
    if (auto j = negative_power_index(b, spec.base)) {
      // (b; base)_k vanishes for every k > j; harmless only if the series
      // has already terminated at or before index j.
      if (!stop || *stop > *j) {
        fail(ErrorKind::InvalidDenominator,
             "denominator parameter base^-" + std::to_string(*j) +
                 " vanishes before the series terminates");
      }
    }
  }
}

}  // namespace detail

/// The first `count` terms of the (formal) series, arg^k included. Useful
/// for reading off coefficients when arg is a monomial in another variable.
template <typename Scalar>
std::vector<std::complex<Scalar>> hypergeometric_terms(const SeriesSpec<Scalar>& spec,
                                                       std::size_t count) {
  using Complex = std::complex<Scalar>;
  require_base(spec.base);
  const auto stop = detail::termination_index(spec);
  detail::check_denominators(spec, stop);
  std::vector<Complex> terms;
  terms.reserve(count);
  Complex term(1);
  Scalar base_k(1);
  for (std::size_t k = 0; k < count; ++k) {
    if (stop && static_cast<long>(k) > *stop) {
      terms.push_back(Complex(0));
      continue;
    }
    terms.push_back(term);
    term *= detail::term_ratio(spec, base_k);
    base_k *= spec.base;
  }
  return terms;
}

template <typename Scalar>
SeriesResult<std::complex<Scalar>> basic_hypergeometric(const SeriesSpec<Scalar>& spec,
                                                        const QContext<Scalar>& ctx) {
  using Complex = std::complex<Scalar>;
  using std::abs;
  using std::isfinite;
  require_base(spec.base);
  const auto stop = detail::termination_index(spec);
  detail::check_denominators(spec, stop);

  SeriesResult<Complex> out;
  CompensatedSum<Complex> sum;
  Complex term(1);
  Scalar base_k(1);

  if (stop) {
    for (long k = 0; k <= *stop; ++k) {
      sum += term;
      term *= detail::term_ratio(spec, base_k);
      base_k *= spec.base;
    }
    out.value = sum.value();
    out.scale = sum.abs_sum();
    out.terms_used = static_cast<std::size_t>(*stop + 1);
    return out;
  }

  if (spec.arg == Complex(0)) {
    out.value = Complex(1);
    out.scale = Scalar(1);
    out.terms_used = 1;
    return out;
  }
  const long excess = 1 + static_cast<long>(spec.den_params.size()) -
                      static_cast<long>(spec.num_params.size());
  if (excess < 0) {
    fail(ErrorKind::Divergent, "non-terminating series with r > s + 1 diverges");
  }

  // The ratios of the last few terms bound the ones still to come; for the
  // balanced case (excess == 0) the limiting ratio is |arg|.
  Scalar recent[3] = {0, 0, 0};
  for (std::size_t k = 0; k < ctx.max_terms(); ++k) {
    if (!isfinite(term.real()) || !isfinite(term.imag())) {
      fail(ErrorKind::NonFinite, "basic hypergeometric term overflowed");
    }
    sum += term;
    const Complex ratio = detail::term_ratio(spec, base_k);
    base_k *= spec.base;
    recent[k % 3] = abs(ratio);
    term *= ratio;
    if (k >= 2) {
      Scalar rho = std::max({recent[0], recent[1], recent[2]});
      if (excess == 0) rho = std::max(rho, Scalar(abs(spec.arg)));
      if (rho < Scalar(1)) {
        const Scalar tail = abs(term) / (Scalar(1) - rho);
        if (sum.converged(tail, ctx.eps())) {
          out.value = sum.value();
          out.tail_bound = tail;
          out.scale = sum.abs_sum();
          out.terms_used = k + 1;
          return out;
        }
      }
    }
  }
  fail(ErrorKind::Divergent, "basic hypergeometric terms failed to decay within max_terms");
}

// ---------------------------------------------------------------------------
// q-derivative and q-integral

template <typename F, typename Scalar>
Scalar q_derivative(F&& f, const Scalar& x, const Scalar& q) {
  if (x == Scalar(0)) fail(ErrorKind::DomainError, "q-derivative is undefined at x = 0");
  return (f(x) - f(q * x)) / ((Scalar(1) - q) * x);
}

template <typename F, typename Scalar>
Scalar q_derivative(F&& f, const Scalar& x, const QContext<Scalar>& ctx) {
  return q_derivative(std::forward<F>(f), x, ctx.q());
}

/// Jackson integral (1 - q) z sum_k f(z q^k) q^k over [0, z].
///
/// Stops once the geometric tail estimated from the recent term ratios is
/// below eps times the absolute-sum scale. That scale stays meaningful for
/// integrals that are nearly zero by cancellation (off-diagonal Gram entries),
/// where a bound relative to the partial sum would never be met.
/// f is called as f(k, z q^k).
template <typename F, typename Scalar>
SeriesResult<Scalar> q_integral_indexed(F&& f, const Scalar& z, const QContext<Scalar>& ctx) {
  using std::abs;
  using std::isfinite;
  if (!(z > Scalar(0))) fail(ErrorKind::DomainError, "q-integral requires z > 0");
  const Scalar q = ctx.q();
  CompensatedSum<Scalar> sum;
  Scalar node = z;
  Scalar weight(1);
  Scalar previous(0);
  Scalar recent[3] = {q, q, q};
  for (std::size_t k = 0; k < ctx.max_terms(); ++k) {
    const Scalar fx = f(k, node);
    if (!isfinite(fx)) fail(ErrorKind::NonFinite, "integrand is not finite on a q-lattice node");
    const Scalar term = fx * weight;
    sum += term;
    if (k > 0 && previous != Scalar(0)) recent[k % 3] = abs(term / previous);
    previous = term;
    node *= q;
    weight *= q;
    if (k >= 3) {
      const Scalar rho = std::max({recent[0], recent[1], recent[2], q});
      if (rho < Scalar(1)) {
        const Scalar tail = abs(term) * rho / (Scalar(1) - rho);
        if (sum.converged(tail, ctx.eps())) {
          const Scalar factor = (Scalar(1) - q) * z;
          SeriesResult<Scalar> out;
          out.value = factor * sum.value();
          out.tail_bound = factor * tail;
          out.scale = factor * sum.abs_sum();
          out.terms_used = k + 1;
          return out;
        }
      }
    }
  }
  fail(ErrorKind::TruncationBudgetExceeded, "q-integral did not converge within max_terms");
}

template <typename F, typename Scalar>
SeriesResult<Scalar> q_integral(F&& f, const Scalar& z, const QContext<Scalar>& ctx) {
  return q_integral_indexed([&](std::size_t, const Scalar& x) { return f(x); }, z, ctx);
}

}  // namespace qbessel
