// Command-line front end: construct the isospectral partner pair, compute
// spectra, run the verification report, and export potential/wavefunction
// samples for plotting.
//
// Exit codes: 0 success (all checks passed), 1 verification failure,
// 2 usage/config error, 3 numerical failure.

#include "CLI11.hpp"

#include "ptsusy/analytic_ref.hpp"
#include "ptsusy/numerics.hpp"
#include "ptsusy/output.hpp"
#include "ptsusy/susy_core.hpp"
#include "ptsusy/verify.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace ptsusy;

struct CommonOpts {
  std::optional<double> mu;
  std::optional<double> lambda;
  std::optional<double> half_width;
  std::optional<int> n_points;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool allow_mu_eq_lambda = false;
  std::string config_path;
  bool refine_value = true;
  CLI::Option *refine_opt = nullptr;
};

void add_common(CLI::App *cmd, CommonOpts &o) {
  cmd->add_option("--mu", o.mu, "inverse-length scale mu (non-zero)");
  cmd->add_option("--lambda", o.lambda, "potential strength lambda (non-zero)");
  cmd->add_option("--half-width", o.half_width,
                  "grid half-width L (default 16/|mu|)");
  cmd->add_option("--n-points", o.n_points,
                  "odd number of grid points (default 4001)");
  o.refine_opt = cmd->add_flag("--refine,!--no-refine", o.refine_value,
                               "h/2 Richardson pass for reported energies "
                               "(default on)");
  cmd->add_option("--format", o.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "output path (default: standard output)");
  cmd->add_flag("--allow-mu-eq-lambda", o.allow_mu_eq_lambda,
                "bypass the mu != lambda restriction");
  cmd->add_option("--config", o.config_path,
                  "flat key=value config file; flags override its values");
}

RunConfig build_config(const CommonOpts &o, std::string &which,
                       std::string &object, int &n) {
  RunConfig cfg;
  if (!o.config_path.empty())
    apply_config_file(o.config_path, cfg, which, object, n);
  if (o.mu)
    cfg.mu = *o.mu;
  if (o.lambda)
    cfg.lambda = *o.lambda;
  if (o.half_width)
    cfg.half_width = *o.half_width;
  if (o.n_points)
    cfg.n_points = *o.n_points;
  if (o.refine_opt && o.refine_opt->count() > 0)
    cfg.with_refine = o.refine_value;
  if (o.format)
    cfg.format = (*o.format == "csv") ? OutputFormat::csv : OutputFormat::json;
  if (o.out)
    cfg.out_path = *o.out;
  if (o.allow_mu_eq_lambda)
    cfg.allow_mu_eq_lambda = true;
  return cfg;
}

int cmd_spectrum(const RunConfig &cfg, const std::string &which) {
  if (which != "partner1" && which != "partner2" && which != "both")
    throw std::invalid_argument("spectrum: --which must be partner1, "
                                "partner2 or both");
  cfg.validate_or_throw();
  const ScarfParams p = cfg.params();

  OutputDocument doc;
  doc.config = cfg;
  doc.command = "spectrum";
  doc.config_extra.push_back({"which", "\"" + which + "\""});
  doc.config_extra.push_back(
      {"continuum_edge", format_double(0.25 * p.mu * p.mu)});

  const auto add_partner = [&](Partner partner, const char *name) {
    const Spectrum spec = solve_spectrum(partner, p, cfg.solve_options(),
                                         cfg.allow_mu_eq_lambda);
    const auto analytic = partner == Partner::two
                              ? bound_energies(p.mu, lambda_bar(p))
                              : partner1_energies(p);
    int index = 0;
    for (const auto &entry : spec.bound_entries()) {
      SpectrumRow row;
      row.which = name;
      row.index = index;
      row.energy_re = entry.energy.real();
      row.energy_im = entry.energy.imag();
      row.residual = entry.residual;
      if (index < static_cast<int>(analytic.size()))
        row.analytic = analytic[index].energy;
      row.bound = true;
      doc.spectrum.push_back(row);
      ++index;
    }
  };

  if (which == "partner2" || which == "both")
    add_partner(Partner::two, "partner2");
  if (which == "partner1" || which == "both")
    add_partner(Partner::one, "partner1");

  write_document(doc);
  return 0;
}

int cmd_verify(const RunConfig &cfg, const std::string &defect_name) {
  PlantedDefect defect = PlantedDefect::none;
  if (defect_name == "shifted-potential")
    defect = PlantedDefect::shifted_potential;
  else if (defect_name == "imag-shift")
    defect = PlantedDefect::imaginary_shift;
  else if (defect_name != "none")
    throw std::invalid_argument("verify: unknown --inject-defect " +
                                defect_name);
  cfg.validate_or_throw();
  const ScarfParams p = cfg.params();

  const bool benchmark = std::abs(p.lambda / p.mu + 2.5) <= 1e-12;
  const VerificationReport report =
      benchmark ? benchmark_report(p, cfg.solve_options(), defect)
                : general_report(p, cfg.solve_options(), defect);

  OutputDocument doc;
  doc.config = cfg;
  doc.command = "verify";
  if (defect != PlantedDefect::none)
    doc.config_extra.push_back({"inject_defect", "\"" + defect_name + "\""});
  doc.checks = report.checks;
  write_document(doc);
  return report.all_passed() ? 0 : 1;
}

// Sign convention for real-valued states: value at 0 (even) or slope at 0
// (odd) made positive.
ClosedFormWavefunction oriented(ClosedFormWavefunction w) {
  double probe;
  if (w.parity == Parity::odd)
    probe = w.has_derivative()
                ? w.derivative(0.0).real()
                : (w.value(1e-4).real() - w.value(-1e-4).real());
  else
    probe = w.value(0.0).real();
  if (probe >= 0.0)
    return w;
  auto value = w.value;
  w.value = [value](double x) { return -value(x); };
  if (w.has_derivative()) {
    auto deriv = w.derivative;
    w.derivative = [deriv](double x) { return -deriv(x); };
  }
  return w;
}

int cmd_sample(const RunConfig &cfg, const std::string &object, int n) {
  cfg.validate_or_throw();
  const ScarfParams p = cfg.params();
  const Grid grid = make_grid(cfg.resolved_half_width(), cfg.n_points);
  const double lb = lambda_bar(p);

  std::function<Complex(double)> f;
  if (object == "v1") {
    f = scarf2_potentials(p, cfg.allow_mu_eq_lambda).v1;
  } else if (object == "v2") {
    auto v2 = scarf2_potentials(p, cfg.allow_mu_eq_lambda).v2;
    f = [v2](double x) { return Complex(v2(x), 0.0); };
  } else if (object == "zero-mode") {
    const ClosedFormWavefunction psi = zero_mode(p);
    const double norm = normalization_constant(psi, p.mu);
    auto value = psi.value;
    f = [value, norm](double x) { return norm * value(x); };
  } else if (object == "psi2-n" || object == "psi1-n") {
    const bool benchmark = std::abs(p.lambda / p.mu + 2.5) <= 1e-12;
    ClosedFormWavefunction psi2 =
        benchmark ? closed_form_state(Partner::two, n, p)
                  : legendre_eigenfunction(n, p);
    if (object == "psi2-n") {
      psi2 = oriented(psi2);
      const double norm = normalization_constant(psi2, p.mu);
      auto value = psi2.value;
      f = [value, norm](double x) { return norm * value(x); };
    } else {
      const ClosedFormWavefunction psi1 =
          benchmark ? closed_form_state(Partner::one, n, p)
                    : intertwine(scarf2_superpotential(p, true), psi2);
      const double norm = normalization_constant(psi1, p.mu);
      auto value = psi1.value;
      f = [value, norm](double x) { return norm * value(x); };
    }
  } else {
    throw std::invalid_argument(
        "sample: --object must be one of v1, v2, zero-mode, psi1-n, psi2-n");
  }

  OutputDocument doc;
  doc.config = cfg;
  doc.command = "sample";
  doc.config_extra.push_back({"object", "\"" + object + "\""});
  if (object == "psi1-n" || object == "psi2-n")
    doc.config_extra.push_back({"n", std::to_string(n)});
  (void)lb;
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.node(i);
    const Complex v = f(x);
    doc.samples.push_back({x, v.real(), v.imag()});
  }
  write_document(doc);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Isospectral partner potentials of a PT-symmetric complex "
               "Hamiltonian: spectra, verification, and sample export"};
  app.require_subcommand(1);

  CommonOpts spectrum_opts, verify_opts, sample_opts;
  std::string which = "both";
  std::string object = "v1";
  std::string defect = "none";
  int n = 0;

  CLI::App *spectrum = app.add_subcommand(
      "spectrum", "bound energies of the partner potentials");
  add_common(spectrum, spectrum_opts);
  spectrum->add_option("--which", which, "partner1, partner2 or both");

  CLI::App *verify =
      app.add_subcommand("verify", "run the verification report");
  add_common(verify, verify_opts);
  verify->add_option("--inject-defect", defect,
                     "self-test fixture: none, shifted-potential, imag-shift");

  CLI::App *sampler = app.add_subcommand(
      "sample", "export x, Re, Im samples of potentials or wavefunctions");
  add_common(sampler, sample_opts);
  sampler->add_option("--object", object,
                      "v1, v2, zero-mode, psi1-n or psi2-n");
  sampler->add_option("--n", n, "quantum number for psi1-n / psi2-n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) {
      const RunConfig cfg = build_config(spectrum_opts, which, object, n);
      return cmd_spectrum(cfg, which);
    }
    if (verify->parsed()) {
      const RunConfig cfg = build_config(verify_opts, which, object, n);
      return cmd_verify(cfg, defect);
    }
    const RunConfig cfg = build_config(sample_opts, which, object, n);
    return cmd_sample(cfg, object, n);
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 3;
  }
}
