#pragma once

#include "ptsusy/analytic_ref.hpp"
#include "ptsusy/numerics.hpp"
#include "ptsusy/verify.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ptsusy {

enum class OutputFormat { json, csv };

/// Fully resolved run configuration. Defaults encode the production grid
/// (L = 16/|mu|, n = 4001, one h/2 refinement pass).
struct RunConfig {
  double mu = 1.0;
  double lambda = -2.5;
  std::optional<double> half_width; // default 16/|mu|
  int n_points = kDefaultPoints;
  bool with_refine = true;
  bool allow_mu_eq_lambda = false;
  OutputFormat format = OutputFormat::json;
  std::string out_path; // empty = standard output

  double resolved_half_width() const;
  SolveOptions solve_options() const;
  ScarfParams params() const { return {mu, lambda}; }

  /// Re-validates every library precondition; throws std::invalid_argument.
  void validate_or_throw() const;
};

/// Loads `key = value` lines ('#' comments allowed) into cfg; unknown keys
/// throw std::invalid_argument. Flags parsed later override these values.
void apply_config_file(const std::string &path, RunConfig &cfg,
                       std::string &which, std::string &object, int &n);

/// One emitted spectrum row. `analytic` is the closed-form level paired by
/// order, when one exists.
struct SpectrumRow {
  std::string which;
  int index = 0;
  double energy_re = 0.0;
  double energy_im = 0.0;
  double residual = 0.0;
  std::optional<double> analytic;
  bool bound = false;
};

struct SampleRow {
  double x;
  double re;
  double im;
};

/// Document written by every command: config echo plus exactly one of
/// spectrum rows, sample rows, or verification checks. `config_extra`
/// carries command-specific config entries (which/object/n, continuum edge)
/// as pre-rendered JSON scalars.
struct OutputDocument {
  RunConfig config;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config_extra;
  std::vector<SpectrumRow> spectrum;
  std::vector<SampleRow> samples;
  std::vector<CheckEntry> checks;
};

/// Writers are deterministic: fixed field order, doubles printed with 17
/// significant digits for lossless round-trips.
void write_json(std::ostream &os, const OutputDocument &doc);
void write_csv(std::ostream &os, const OutputDocument &doc);
void write_document(const OutputDocument &doc); // honors format/out_path

std::string format_double(double v); // %.17g

} // namespace ptsusy
