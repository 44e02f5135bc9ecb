#include "qbessel/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qbessel/error.hpp"
#include "qbessel/hahn_exton.hpp"
#include "qbessel/lommel.hpp"
#include "qbessel/verify.hpp"
#include "qbessel/zeros.hpp"

namespace qbessel::cli {

BaseMode RunConfig::effective_base_mode() const {
  if (base_mode) return *base_mode;
  if (command == Command::Lommel && (family == Family::R || family == Family::P)) return BaseMode::Q;
  return BaseMode::QSquared;
}

double RunConfig::base() const {
  return effective_base_mode() == BaseMode::Q ? q : q * q;
}

std::string to_string(BaseMode mode) {
  return mode == BaseMode::Q ? "q" : "q_squared";
}

void validate(const RunConfig& cfg) {
  if (!(cfg.q > 0 && cfg.q < 1)) fail(ErrorKind::DomainError, "q must lie strictly inside (0, 1)");
  if (!(cfg.eps > 0)) fail(ErrorKind::DomainError, "eps must be positive");
  if (!std::isfinite(cfg.nu)) fail(ErrorKind::DomainError, "nu must be finite");
  if (cfg.n < 0 || cfg.m < 0) fail(ErrorKind::DomainError, "n and m must be >= 0");
  if (!(cfg.tolerance_scale > 0)) fail(ErrorKind::DomainError, "tolerance scale must be positive");
  if (cfg.command == Command::Eval && cfg.x_values.empty()) {
    fail(ErrorKind::DomainError, "eval needs at least one --x value");
  }
}

namespace {

using Ctx = QContext<double>;

/// The Bessel modules take q with the series in base q^2.
Ctx bessel_context(const RunConfig& cfg) {
  return Ctx(std::sqrt(cfg.base()), cfg.eps);
}

Table eval_table(const RunConfig& cfg) {
  const Ctx ctx = bessel_context(cfg);
  const double base = cfg.base();
  const Order<double> nu(cfg.nu);
  Table t;
  t.columns = {"x", "J", "tail_bound", "scale"};
  if (cfg.with_second) {
    t.columns.push_back("calJ_re");
    t.columns.push_back("calJ_im");
  }
  if (cfg.with_dq) t.columns.push_back("DqJ");
  for (double x : cfg.x_values) {
    const auto j = jq(nu, x, base, ctx);
    std::vector<Json> row{x, j.value, j.tail_bound, j.scale};
    if (cfg.with_second) {
      const auto s = jq_second(nu, x, base, ctx);
      row.push_back(s.value.real());
      row.push_back(s.value.imag());
    }
    if (cfg.with_dq) row.push_back(dq_jq(nu, x, ctx));
    t.add_row(std::move(row));
  }
  return t;
}

Table zeros_table(const RunConfig& cfg) {
  const Ctx ctx = bessel_context(cfg);
  const auto table = find_zeros(Order<double>(cfg.nu), static_cast<std::size_t>(cfg.n), ctx);
  if (const auto msg = table.validate(); !msg.empty()) fail(ErrorKind::NotAZero, msg);
  Table t;
  t.columns = {"n", "zero", "residual", "derivative", "bracket_lo", "bracket_hi"};
  for (const auto& z : table.zeros) {
    t.add_row({static_cast<long long>(z.n), z.location, z.residual, z.derivative, z.bracket_lo,
               z.bracket_hi});
  }
  return t;
}

Table ortho_table(const RunConfig& cfg) {
  const Ctx ctx = bessel_context(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  const auto rep = ortho_report(Order<double>(cfg.nu), n, ctx);
  Table t;
  t.columns = {"n", "zero", "norm_integral", "norm_form_1", "norm_form_2", "norm_form_3",
               "norm_form_4"};
  for (std::size_t k = 0; k < n; ++k) t.columns.push_back("gram_" + std::to_string(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Json> row{static_cast<long long>(i + 1), rep.zeros.zeros[i].location, rep.gram(i, i)};
    for (int c = 0; c < 4; ++c) row.push_back(rep.diag_forms(i, c));
    for (std::size_t k = 0; k < n; ++k) row.push_back(rep.gram(i, k));
    t.add_row(std::move(row));
  }
  return t;
}

template <typename Coeffs>
void add_coeff_rows(Table& t, const Coeffs& c, auto power_of) {
  for (long i = 0; i < c.size(); ++i) {
    t.add_row({static_cast<long long>(i), static_cast<long long>(power_of(i)), c(i)});
  }
}

Table lommel_table(const RunConfig& cfg) {
  const Order<double> nu(cfg.nu);
  const long m = cfg.m;
  // R and p live in base p itself; the second family is written in q^2.
  const double p = cfg.base();
  const double q2 = std::sqrt(p);
  Table t;
  t.columns = {"index", "power", "coefficient"};
  switch (cfg.family) {
    case Family::R:
      add_coeff_rows(t, lommel_R(m, nu, p).coeffs, [m](long i) { return 2 * i - m; });
      break;
    case Family::P:
      add_coeff_rows(t, p_poly(m, nu, p).coeffs, [](long i) { return 2 * i; });
      break;
    case Family::SmallR:
      add_coeff_rows(t, r_family(m, nu, q2).r.coeffs, [m](long i) { return 2 * i - m; });
      break;
    case Family::TildeR:
      add_coeff_rows(t, tilde_r(m, nu, q2).coeffs, [m](long i) { return 2 * i - m; });
      break;
    case Family::H:
      add_coeff_rows(t, r_family(m, nu, q2).h.coeffs, [](long i) { return i; });
      break;
    case Family::TildeH:
      add_coeff_rows(t, r_family(m, nu, q2).htilde.coeffs, [](long i) { return i; });
      break;
  }
  return t;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

Output verify_output(const RunConfig& cfg) {
  VerifyConfig vc;
  if (cfg.q_given) vc.q = cfg.q;
  if (cfg.nu_given) vc.nu = cfg.nu;
  vc.eps = cfg.eps;
  vc.seed = cfg.seed;
  vc.tolerance_scale = cfg.tolerance_scale;
  const auto report = run_verify(vc);
  Output out;
  out.table.columns = {"id", "grid_size", "max_residual", "tolerance", "passed", "error"};
  for (const auto& r : report.identities) {
    out.table.add_row({r.id, static_cast<long long>(r.grid_size), r.max_residual, r.tolerance,
                       r.passed, one_line(r.error)});
  }
  out.status = report.passed() ? kExitOk : kExitVerify;
  return out;
}

std::string error_record(std::string_view kind, const std::string& message) {
  Json j = {{"error", {{"kind", kind}, {"message", message}}}};
  return j.dump();
}

}  // namespace

Output compute(const RunConfig& cfg) {
  validate(cfg);
  Output out;
  switch (cfg.command) {
    case Command::Eval: out.table = eval_table(cfg); break;
    case Command::Zeros: out.table = zeros_table(cfg); break;
    case Command::Ortho: out.table = ortho_table(cfg); break;
    case Command::Lommel: out.table = lommel_table(cfg); break;
    case Command::Verify: out = verify_output(cfg); break;
  }
  out.meta.q = cfg.q;
  out.meta.nu = cfg.nu;
  out.meta.base_mode = to_string(cfg.effective_base_mode());
  out.meta.eps = cfg.eps;
  out.meta.tool_version = QBESSEL_VERSION;
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
  } catch (const Error& e) {
    err << error_record("UsageError", e.what()) << '\n';
    return kExitUsage;
  }
  Output result;
  try {
    result = compute(cfg);
  } catch (const Error& e) {
    err << error_record(qbessel::to_string(e.kind()), e.what()) << '\n';
    return kExitDomain;
  }
  const std::string text = cfg.out_format == OutFormat::Json
                               ? to_json(result.meta, result.table).dump(2) + "\n"
                               : to_csv(result.table);
  if (cfg.out_path) {
    std::ofstream file(*cfg.out_path, std::ios::binary);
    file << text;
    if (!file) {
      err << error_record("IOError", "cannot write " + *cfg.out_path) << '\n';
      return kExitDomain;
    }
  } else {
    out << text;
  }
  if (result.status == kExitVerify) {
    err << error_record("VerificationFailed", "at least one identity exceeded its tolerance") << '\n';
  }
  return result.status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("QBESSEL_EPS"); env && *env) {
    char* end = nullptr;
    cfg.eps = std::strtod(env, &end);
    if (*end != '\0') {
      err << error_record("UsageError", std::string("QBESSEL_EPS is not a number: ") + env) << '\n';
      return kExitUsage;
    }
  }

  CLI::App app{"Hahn-Exton q-Bessel functions, their zeros and q-Lommel polynomials", "qbessel"};
  app.require_subcommand(1);
  CLI::Option* q_opt = app.add_option("--q", cfg.q, "base parameter, 0 < q < 1");
  CLI::Option* nu_opt = app.add_option("--nu", cfg.nu, "order");
  std::string base_mode;
  app.add_option("--base-mode", base_mode, "q or q_squared")
      ->check(CLI::IsMember({"q", "q_squared"}));
  app.add_option("--eps", cfg.eps, "series truncation tolerance (overrides QBESSEL_EPS)");
  app.add_option("--n", cfg.n, "number of zeros");
  app.add_option("--m", cfg.m, "polynomial degree index");
  app.add_option("--x", cfg.x_values, "evaluation points")->delimiter(',');
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  std::string out_path;
  CLI::Option* out_opt = app.add_option("--out", out_path, "write to a file instead of stdout");
  app.add_option("--seed", cfg.seed, "seed for sampled verify points");
  app.add_option("--tolerance-scale", cfg.tolerance_scale, "multiply every verify tolerance");

  auto* eval = app.add_subcommand("eval", "tabulate J_nu over --x");
  eval->add_flag("--second", cfg.with_second, "add the second solution");
  eval->add_flag("--dq", cfg.with_dq, "add the q-derivative");
  auto* zeros = app.add_subcommand("zeros", "first --n positive zeros of J_nu(.; q^2)");
  auto* ortho = app.add_subcommand("ortho", "orthogonality report over the first --n zeros");
  auto* lommel = app.add_subcommand("lommel", "coefficients of a q-Lommel polynomial");
  std::string family = "R";
  lommel->add_option("--family", family, "R, p, r, rtilde, h or htilde")
      ->check(CLI::IsMember({"R", "p", "r", "rtilde", "h", "htilde"}));
  auto* verify = app.add_subcommand("verify", "check every identity over the test grid");
  for (auto* sub : {eval, zeros, ortho, lommel, verify}) sub->fallthrough();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_record("UsageError", e.what()) << '\n';
    return kExitUsage;
  }

  if (eval->parsed()) cfg.command = Command::Eval;
  if (zeros->parsed()) cfg.command = Command::Zeros;
  if (ortho->parsed()) cfg.command = Command::Ortho;
  if (lommel->parsed()) cfg.command = Command::Lommel;
  if (verify->parsed()) cfg.command = Command::Verify;
  if (!base_mode.empty()) cfg.base_mode = base_mode == "q" ? BaseMode::Q : BaseMode::QSquared;
  cfg.out_format = format == "json" ? OutFormat::Json : OutFormat::Csv;
  if (out_opt->count() > 0) cfg.out_path = out_path;
  cfg.q_given = q_opt->count() > 0;
  cfg.nu_given = nu_opt->count() > 0;
  if (family == "R") cfg.family = Family::R;
  if (family == "p") cfg.family = Family::P;
  if (family == "r") cfg.family = Family::SmallR;
  if (family == "rtilde") cfg.family = Family::TildeR;
  if (family == "h") cfg.family = Family::H;
  if (family == "htilde") cfg.family = Family::TildeH;
  return run(cfg, out, err);
}

}  // namespace qbessel::cli
