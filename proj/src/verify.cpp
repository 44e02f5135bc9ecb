#include "qbessel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "qbessel/lommel.hpp"
#include "qbessel/zeros.hpp"

namespace qbessel {

std::vector<double> default_nu_grid() { return {-0.5, 0.0, 0.3, 1.0, 1.5, 2.7}; }
std::vector<double> default_q_grid() { return {0.3, 0.5, 0.8}; }
std::vector<double> default_x_grid() { return {0.1, 0.5, 0.9, 1.5}; }

// Extended-precision deviations at m = 40: 7.8428e-13 and 2.77350e-9 for R,
// 2.79e-25 and 6.13e-25 for r~. Each bound adds 1e-13 of rounding headroom.
std::vector<HurwitzSample> hurwitz_R_samples() { return {{1.5, 0.5, 0.3, 8.85e-13}, {0.5, 0.6, 0.2, 2.7736e-9}}; }
std::vector<HurwitzSample> hurwitz_tilde_r_samples() { return {{1.2, 0.5, 0.4, 1e-13}, {0.5, 0.5, 0.3, 1e-13}}; }
std::vector<long> hurwitz_m_list() { return {5, 10, 20, 40}; }

namespace {

using C = std::complex<double>;
using Ctx = QContext<double>;

/// Accumulates the worst normalized residual of one identity.
class Tally {
 public:
  Tally(std::string id, double tolerance) {
    rec_.id = std::move(id);
    rec_.tolerance = tolerance;
  }

  void add(double residual) {
    ++rec_.grid_size;
    if (!(residual <= rec_.max_residual)) rec_.max_residual = residual;  // NaN sticks
  }

  /// Runs one grid point; a library error fails the identity.
  void point(const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      ++rec_.grid_size;
      if (rec_.error.empty()) rec_.error = e.what();
    }
  }

  IdentityRecord finish(double tolerance_scale) {
    rec_.tolerance *= tolerance_scale;
    rec_.passed = rec_.error.empty() && rec_.grid_size > 0 && rec_.max_residual <= rec_.tolerance;
    return rec_;
  }

 private:
  IdentityRecord rec_;
};

double rel(double lhs, double rhs, std::initializer_list<double> pieces) {
  double size = std::max(std::abs(lhs), std::abs(rhs));
  for (double p : pieces) size = std::max(size, std::abs(p));
  return size == 0 ? 0 : std::abs(lhs - rhs) / size;
}

double rel(C lhs, C rhs, std::initializer_list<double> pieces) {
  double size = std::max(std::abs(lhs), std::abs(rhs));
  for (double p : pieces) size = std::max(size, p);
  return size == 0 ? 0 : std::abs(lhs - rhs) / size;
}

bool nonpositive_integer(double nu) { return is_integer_order(nu) && nearest_integer(nu) <= 0; }

struct Poly {
  std::vector<double> c;
  double operator()(double x) const {
    double s = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
  }
};

class Suite {
 public:
  Suite(const VerifyConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    nus_ = cfg.nu ? std::vector<double>{*cfg.nu} : default_nu_grid();
    qs_ = cfg.q ? std::vector<double>{*cfg.q} : default_q_grid();
    xs_ = default_x_grid();
  }

  VerifyReport run() {
    qcalc_identities();
    bessel_identities();
    zero_identities();
    lommel_identities();
    return report_;
  }

 private:
  Ctx ctx(double q) const { return Ctx(q, cfg_.eps); }
  double eps() const { return cfg_.eps; }

  void emit(Tally& t) { report_.identities.push_back(t.finish(cfg_.tolerance_scale)); }

  Poly random_poly(int degree) {
    std::uniform_real_distribution<double> u(-1, 1);
    Poly p;
    for (int i = 0; i <= degree; ++i) p.c.push_back(u(rng_));
    return p;
  }

  // -------------------------------------------------------------------------
  void qcalc_identities() {
    Tally fundamental("fundamental_theorem", 10 * eps());
    Tally product("q_product_rule", 10 * eps());
    Tally partial("q_partial_integration", 10 * eps());
    Tally step("qpochhammer_step", 0);
    Tally phi("terminating_phi", 10 * eps());
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (double q : qs_) {
      const Ctx c = ctx(q);
      for (double z : {0.5, 1.0, 2.0}) {
        const Poly f = random_poly(4);
        const Poly g = random_poly(3);
        fundamental.point([&] {
          auto df = [&](double x) { return q_derivative(f, x, q); };
          const auto integral = q_integral(df, z, c);
          fundamental.add(rel(integral.value, f(z) - f(0), {integral.scale}));
        });
        product.point([&] {
          const double x = z * u(rng_);
          auto fg = [&](double t) { return f(t) * g(t); };
          const double lhs = q_derivative(fg, x, q);
          const double t1 = f(x) * q_derivative(g, x, q);
          const double t2 = g(q * x) * q_derivative(f, x, q);
          product.add(rel(lhs, t1 + t2, {t1, t2}));
        });
        partial.point([&] {
          auto left = [&](double x) { return f(q * x) * q_derivative(g, x, q); };
          auto right = [&](double x) { return q_derivative(f, x, q) * g(x); };
          const double lhs = q_integral(left, z, c).value;
          const double boundary = f(z) * g(z) - f(0) * g(0);
          const double other = q_integral(right, z, c).value;
          partial.add(rel(lhs, boundary - other, {f(z) * g(z), f(0) * g(0), other}));
        });
      }
      for (int k = 0; k < 10; ++k) {
        step.point([&] {
          const double a = u(rng_);
          const double lhs = qpochhammer(a, q, k + 1);
          const double rhs = qpochhammer(a, q, k) * (1 - a * std::pow(q, k));
          step.add(rel(lhs, rhs, {}));
        });
      }
      for (int n = 0; n <= 8; ++n) {
        phi.point([&] {
          SeriesSpec<double> spec;
          const double a = u(rng_), b = u(rng_), d1 = u(rng_), d2 = -u(rng_);
          spec.num_params = {std::pow(q, -n), a, b};
          spec.den_params = {d1, d2};
          spec.base = q;
          spec.arg = u(rng_);
          const C series = basic_hypergeometric(spec, c).value;
          // Direct loop: products of (p; q)_k, no term ratios.
          double direct = 0;
          double size = 0;
          for (int k = 0; k <= n; ++k) {
            double t = qpochhammer(std::pow(q, -n), q, k) * qpochhammer(a, q, k) *
                       qpochhammer(b, q, k) /
                       (qpochhammer(q, q, k) * qpochhammer(d1, q, k) * qpochhammer(d2, q, k));
            t *= std::pow(spec.arg.real(), k);  // 1 + s - r = 0: no convention factor
            direct += t;
            size += std::abs(t);
          }
          phi.add(std::abs(series.real() - direct) / std::max(size, std::abs(direct)));
        });
      }
    }
    for (Tally* t : {&fundamental, &product, &partial, &step, &phi}) emit(*t);
  }

  // -------------------------------------------------------------------------
  void bessel_identities() {
    const double tol = 1e-10;
    Tally lowering("dq_lowering", tol), raising("dq_raising", tol), dq_closed("dq_closed_form", tol);
    Tally qdifeq("q_difference_equation", tol), qdifeq_calJ("q_difference_equation_calJ", tol);
    Tally rec_J("recurrence_J", tol), shifted_rec_J("shifted_recurrence_J", tol), rec_calJ("recurrence_calJ", tol);
    Tally up_J("half_shift_up_J", tol), up_calJ("half_shift_up_calJ", tol);
    Tally down_J("half_shift_down_J", tol), down_calJ("half_shift_down_calJ", tol);
    Tally wronskian_tally("wronskian", tol);
    Tally classical("classical_limit", 1e-2);
    for (double nu_v : nus_) {
      const Order<double> nu(nu_v);
      const Order<double> up = nu.shifted(1);
      const Order<double> down = nu.shifted(-1);
      for (double q : qs_) {
        const Ctx c = ctx(q);
        const double Q = q * q;
        const double sq = std::sqrt(q);
        auto J = [&](const Order<double>& o, double x) { return jq(o, x, Q, c).value; };
        auto Jp = [&](const Order<double>& o, double x) { return jq(o, x, q, c).value; };
        auto CJ = [&](const Order<double>& o, double x) { return jq_second(o, x, q, c).value; };
        for (double x : xs_) {
          lowering.point([&] {
            auto f = [&](double t) { return std::pow(t, nu_v) * J(nu, t); };
            const double lhs = q_derivative(f, x, q);
            const double rhs = std::pow(x, nu_v) / (1 - q) * J(down, x);
            lowering.add(rel(lhs, rhs, {f(x) / ((1 - q) * x), f(q * x) / ((1 - q) * x)}));
          });
          raising.point([&] {
            auto f = [&](double t) { return std::pow(t, -nu_v) * J(nu, t); };
            const double lhs = q_derivative(f, x, q);
            const double rhs = -std::pow(q, 1 - nu_v) * std::pow(x, -nu_v) / (1 - q) * J(up, x * q);
            raising.add(rel(lhs, rhs, {f(x) / ((1 - q) * x), f(q * x) / ((1 - q) * x)}));
          });
          dq_closed.point([&] {
            auto f = [&](double t) { return J(nu, t); };
            const double lhs = q_derivative(f, x, q);
            const auto rhs = dq_jq_eval(nu, x, c);
            dq_closed.add(rel(lhs, rhs.value, {f(x) / ((1 - q) * x), f(q * x) / ((1 - q) * x), rhs.scale}));
          });
          qdifeq.point([&] {
            const double t0 = J(nu, x * Q);
            const double t1 = std::pow(q, -nu_v) * (x * x * Q - 1 - std::pow(q, 2 * nu_v)) * J(nu, x * q);
            const double t2 = J(nu, x);
            qdifeq.add(rel(t0 + t1 + t2, 0, {t0, t1, t2}));
          });
          rec_J.point([&] {
            const double lhs = J(up, x);
            const double t1 = ((1 - std::pow(q, 2 * nu_v)) / x + x) * J(nu, x);
            const double t2 = J(down, x);
            rec_J.add(rel(lhs, t1 - t2, {t1, t2}));
          });
          shifted_rec_J.point([&] {
            const double lhs = J(up, x * q);
            const double k = std::pow(q, -nu_v - 1);
            const double t1 = k * (1 - std::pow(q, 2 * nu_v)) / x * J(nu, x);
            const double t2 = k * J(down, x);
            shifted_rec_J.add(rel(lhs, t1 - t2, {t1, t2}));
          });
          up_J.point([&] {
            const double t1 = std::pow(q, nu_v / 2) * Jp(nu, x);
            const double t2 = x * sq * Jp(up, x * sq);
            up_J.add(rel(Jp(nu, x * sq), t1 + t2, {t1, t2}));
          });
          up_calJ.point([&] {
            const C t1 = std::pow(q, nu_v / 2) * CJ(nu, x);
            const C t2 = x * sq * CJ(up, x * sq);
            up_calJ.add(rel(CJ(nu, x * sq), t1 + t2, {std::abs(t1), std::abs(t2)}));
          });
          down_J.point([&] {
            const double t1 = std::pow(q, -nu_v / 2) * Jp(nu, x);
            const double t2 = x * std::pow(q, -nu_v / 2) * Jp(down, x);
            down_J.add(rel(Jp(nu, x * sq), t1 - t2, {t1, t2}));
          });
          down_calJ.point([&] {
            const C t1 = std::pow(q, -nu_v / 2) * CJ(nu, x);
            const C t2 = x * std::pow(q, -nu_v / 2) * CJ(down, x);
            down_calJ.add(rel(CJ(nu, x * sq), t1 - t2, {std::abs(t1), std::abs(t2)}));
          });
          rec_calJ.point([&] {
            const C lhs = (x + (1 - std::pow(q, nu_v)) / x) * CJ(nu, x);
            const C t1 = CJ(down, x);
            const C t2 = CJ(up, x);
            rec_calJ.add(rel(lhs, t1 + t2, {std::abs(t1), std::abs(t2)}));
          });
          qdifeq_calJ.point([&] {
            const C t0 = CJ(nu, x * q);
            const C t1 = std::pow(q, -nu_v / 2) * (x * x * q - 1 - std::pow(q, nu_v)) * CJ(nu, x * sq);
            const C t2 = CJ(nu, x);
            qdifeq_calJ.add(rel(t0 + t1 + t2, C(0), {std::abs(t0), std::abs(t1), std::abs(t2)}));
          });
          if (!nu.is_integer()) {
            wronskian_tally.point([&] {
              const double j0 = Jp(nu, x);
              const double j1 = Jp(nu, x * sq);
              const C c0 = CJ(nu, x);
              const C c1 = CJ(nu, x * sq);
              const C rhs = wronskian_closed_form(nu, q, c);
              wronskian_tally.add(rel(wronskian(nu, x, q, c), rhs, {std::abs(j0 * c1), std::abs(c0 * j1)}));
            });
          }
        }
      }
    }
    classical.point([&] {
      // J_0((1 - q) x; q) against the classical J_0(2x) at q = 0.999, x = 0.5.
      const double q = 0.999;
      const double value = jq(Order<double>(0.0), (1 - q) * 0.5, q, ctx(q)).value;
      classical.add(rel(value, std::cyl_bessel_j(0.0, 1.0), {}));
    });
    for (Tally* t : {&lowering, &raising, &dq_closed, &qdifeq, &rec_J, &shifted_rec_J, &up_J, &up_calJ, &down_J,
                     &down_calJ, &rec_calJ, &qdifeq_calJ, &wronskian_tally, &classical}) {
      emit(*t);
    }
  }

  // -------------------------------------------------------------------------
  void zero_identities() {
    const ZeroOptions<double> opt;
    Tally table("zero_table", opt.tol_resid);
    Tally simp("zero_norm_closed_form", 1e-9);
    Tally shift("zero_shift_identity", 1e-9);
    Tally cross("cross_integral", 1e-10);
    Tally offdiag("gram_offdiagonal", 1e-8);
    Tally forms("norm_forms_agree", 1e-9);
    Tally direct("norm_forms_vs_integral", 1e-9);
    Tally inter("interlacing", 0.5);
    Tally common("no_common_zero", 1);
    Tally dq("dq_zero_norm", 1e-9);
    std::uniform_real_distribution<double> ab(0.2, 3.0);
    std::uniform_real_distribution<double> zz(0.2, 2.0);
    for (double nu_v : nus_) {
      if (!(nu_v > -1)) continue;
      const Order<double> nu(nu_v);
      for (double q : qs_) {
        const Ctx c = ctx(q);
        table.point([&] {
          const auto t = find_zeros(nu, 6, c, opt);
          const std::string why = t.validate();
          if (!why.empty()) fail(ErrorKind::NotAZero, why);
          double worst = 0;
          for (const auto& z : t.zeros) {
            worst = std::max(worst, z.residual / z.scale);
            simp.add(rel(z.norm_direct, z.norm_closed, {}));
          }
          table.add(worst);
        });
        shift.point([&] {
          const auto rep = no_common_zero_check(nu, 6, c, opt);
          shift.add(rep.max_shift_residual);
          double worst = rep.first_positive ? 0 : 2;
          for (std::size_t i = 0; i < rep.next_values.size(); ++i) {
            worst = std::max(worst, rep.margins[i] / std::abs(rep.next_values[i]));
          }
          common.add(worst);
        });
        for (int k = 0; k < 20; ++k) {
          cross.point([&] {
            const double a = ab(rng_), b = ab(rng_), z = zz(rng_);
            const auto r = cross_integral(nu, a, b, z, c);
            cross.add(std::abs(r.lhs - r.rhs) / r.scale);
          });
        }
        offdiag.point([&] {
          const auto rep = ortho_report(nu, 4, c, opt);
          offdiag.add(rep.max_offdiag / rep.gram.diagonal().cwiseAbs().maxCoeff());
          forms.add(rep.max_diag_spread);
          direct.add(rep.max_diag_mismatch);
        });
        inter.point([&] { inter.add(interlacing_check(nu, 6, c, opt).passed() ? 0 : 1); });
        if (nu_v > 0) {
          dq.point([&] {
            const auto t = dq_zero_table(nu, 3, c, opt);
            const std::string why = t.validate();
            if (!why.empty()) fail(ErrorKind::NotAZero, why);
            for (const auto& z : t.zeros) {
              const double sign = jq(nu, z.location, q * q, c).value * z.derivative;
              dq.add(sign < 0 ? rel(z.norm_direct, z.norm_closed, {}) : 1.0);
            }
          });
        }
      }
    }
    for (Tally* t : {&table, &simp, &shift, &cross, &offdiag, &forms, &direct, &inter, &common, &dq}) {
      emit(*t);
    }
  }

  // -------------------------------------------------------------------------
  void lommel_identities() {
    Tally r_explicit("R_explicit", 1e-10), p_vs_r("p_vs_R", 10 * eps()), genfn("generating_function", 1e-10);
    Tally conn_J("connection_J", 1e-10), conn_calJ("connection_calJ", 1e-10), casoratian("R_casoratian", 1e-9);
    Tally order_rec("R_order_recurrence", 1e-11), a_expl("a_explicit_form", 1e-12), b_rec("b_recurrence", 1e-12);
    Tally a_shift("a_order_shift", 1e-12), decomp("decomposition", 1e-9), r_rec("r_recurrence", 1e-11);
    Tally htilde_expl("htilde_explicit", 1e-11), h_htilde("h_vs_htilde", 1e-11);
    Tally rtilde_expl("tilde_r_explicit_form", 1e-10);
    Tally r_order_rec("r_order_recurrence", 1e-10), rtilde_rec("tilde_r_recurrence", 1e-10);
    for (double nu_v : nus_) {
      const Order<double> nu(nu_v);
      for (double q : qs_) {
        const Ctx c = ctx(q);
        const auto o = q_order(nu, q);
        if (!nonpositive_integer(nu_v)) {
          r_explicit.point([&] {
            for (long m = 0; m <= 20; ++m) {
              r_explicit.add(detail::max_rel_diff(lommel_R(m, o).coeffs, lommel_R_explicit(m, nu, c).coeffs));
            }
          });
          rtilde_expl.point([&] {
            for (long m = 0; m <= 12; ++m) {
              rtilde_expl.add(detail::max_rel_diff(tilde_r(m, o).coeffs, tilde_r_explicit(m, nu, c).coeffs));
            }
          });
        }
        a_expl.point([&] { a_expl.add(a_recurrence_vs_explicit(o, 15)); });
        b_rec.point([&] { b_rec.add(b_table_check(o, 10)); });
        a_shift.point([&] { a_shift.add(a_shift_check(o, 10)); });
        r_rec.point([&] {
          const auto r = r_family_check(o, 12);
          r_rec.add(r.r_recurrence);
          htilde_expl.add(r.htilde_closed_form);
          h_htilde.add(r.h_vs_htilde);
        });
        for (double x : xs_) {
          p_vs_r.point([&] {
            for (long m = 0; m <= 20; ++m) {
              const double p = p_poly(m, o)(x);
              p_vs_r.add(rel(p, std::pow(x, double(m)) * lommel_R(m, o)(x), {}));
            }
          });
          genfn.point([&] {
            const auto g = generating_coeffs(nu, x, 12, c);
            for (long m = 0; m <= 12; ++m) genfn.add(rel(g[m], p_poly(m, o)(x), {}));
          });
          for (long m = 1; m <= 8; ++m) {
            conn_J.point([&] {
              const auto r = bessel_connection_residual(m, nu, x, c);
              conn_J.add(r.res_J);
              conn_calJ.add(r.res_calJ);
            });
            order_rec.point([&] { order_rec.add(order_recurrence_residual(m, nu, x, q)); });
            r_order_rec.point([&] { r_order_rec.add(r_order_recurrence_residual(m, nu, x, q)); });
            rtilde_rec.point([&] { rtilde_rec.add(tilde_r_recurrence_residual(m, nu, x, q)); });
            if (m <= 7) decomp.point([&] { decomp.add(decomposition_residual(nu, m, x, c)); });
            if (!nu.is_integer()) {
              casoratian.point([&] {
                const auto v = casoratian_R_eval(m, nu, x, c);
                const double r = lommel_R(m, o)(x);
                casoratian.add(rel(v.value, C(r), {v.scale}));
              });
            }
          }
        }
      }
    }
    for (Tally* t : {&r_explicit, &p_vs_r, &genfn, &conn_J, &conn_calJ, &casoratian, &order_rec, &a_expl, &b_rec,
                     &a_shift, &decomp, &r_rec, &htilde_expl, &h_htilde, &rtilde_expl, &r_order_rec, &rtilde_rec}) {
      emit(*t);
    }
    hurwitz();
  }

  /// Monotone decrease along m = 5, 10, 20, 40 and a final deviation below
  /// the bound calibrated against an extended-precision recomputation.
  void hurwitz() {
    const std::vector<long> ms = hurwitz_m_list();
    Tally h1("hurwitz_R", 1);
    Tally h2("hurwitz_tilde_r", 1);
    for (const auto& s : hurwitz_R_samples()) {
      h1.point([&] {
        const auto t = hurwitz_R(Order<double>(s.nu), s.x, ms, ctx(s.q));
        h1.add(t.strictly_decreasing() ? t.deviations.back() / s.bound : 2.0);
      });
    }
    for (const auto& s : hurwitz_tilde_r_samples()) {
      h2.point([&] {
        const auto t = hurwitz_tilde_r(Order<double>(s.nu), s.x, ms, ctx(s.q));
        h2.add(t.strictly_decreasing() ? t.deviations.back() / s.bound : 2.0);
      });
    }
    emit(h1);
    emit(h2);
  }

  VerifyConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<double> nus_;
  std::vector<double> qs_;
  std::vector<double> xs_;
  VerifyReport report_;
};

}  // namespace

VerifyReport run_verify(const VerifyConfig& cfg) {
  if (cfg.q) require_base(*cfg.q);
  if (!(cfg.eps > 0)) fail(ErrorKind::DomainError, "eps must be positive");
  if (!(cfg.tolerance_scale > 0)) fail(ErrorKind::DomainError, "tolerance scale must be positive");
  return Suite(cfg).run();
}

}  // namespace qbessel
