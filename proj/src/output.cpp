#include "ptsusy/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ptsusy {

double RunConfig::resolved_half_width() const {
  if (half_width)
    return *half_width;
  return default_half_width(mu);
}

SolveOptions RunConfig::solve_options() const {
  return {resolved_half_width(), n_points, with_refine};
}

void RunConfig::validate_or_throw() const {
  validate(params(), allow_mu_eq_lambda);
  (void)make_grid(resolved_half_width(), n_points); // throws on bad grid
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos)
    return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string &key, const std::string &value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("config: bad numeric value for '" + key +
                                "': " + value);
  }
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "off")
    return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " +
                              value);
}

// JSON string escape (quotes, backslash, control characters).
std::string json_escape(const std::string &s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    case '\r': out += "\\r"; break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
        out += buf;
      } else {
        out += c;
      }
    }
  }
  return out;
}

// JSON has no non-finite numbers; emit null for those.
std::string json_number(double v) {
  if (!std::isfinite(v))
    return "null";
  return format_double(v);
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"')
      out += "\"\"";
    else
      out += c;
  }
  out += "\"";
  return out;
}

} // namespace

void apply_config_file(const std::string &path, RunConfig &cfg,
                       std::string &which, std::string &object, int &n) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "mu")
      cfg.mu = parse_double(key, value);
    else if (key == "lambda")
      cfg.lambda = parse_double(key, value);
    else if (key == "half_width")
      cfg.half_width = parse_double(key, value);
    else if (key == "n_points")
      cfg.n_points = static_cast<int>(parse_double(key, value));
    else if (key == "refine")
      cfg.with_refine = parse_bool(key, value);
    else if (key == "allow_mu_eq_lambda")
      cfg.allow_mu_eq_lambda = parse_bool(key, value);
    else if (key == "format") {
      if (value == "json")
        cfg.format = OutputFormat::json;
      else if (value == "csv")
        cfg.format = OutputFormat::csv;
      else
        throw std::invalid_argument("config: unknown format " + value);
    } else if (key == "out")
      cfg.out_path = value;
    else if (key == "which")
      which = value;
    else if (key == "object")
      object = value;
    else if (key == "n")
      n = static_cast<int>(parse_double(key, value));
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void write_json(std::ostream &os, const OutputDocument &doc) {
  os << "{\n";
  os << "  \"command\": \"" << json_escape(doc.command) << "\",\n";
  os << "  \"config\": {\n";
  os << "    \"mu\": " << json_number(doc.config.mu) << ",\n";
  os << "    \"lambda\": " << json_number(doc.config.lambda) << ",\n";
  os << "    \"half_width\": " << json_number(doc.config.resolved_half_width())
     << ",\n";
  os << "    \"n_points\": " << doc.config.n_points << ",\n";
  os << "    \"refine\": " << (doc.config.with_refine ? "true" : "false")
     << ",\n";
  os << "    \"allow_mu_eq_lambda\": "
     << (doc.config.allow_mu_eq_lambda ? "true" : "false");
  for (const auto &[key, value] : doc.config_extra)
    os << ",\n    \"" << json_escape(key) << "\": " << value;
  os << "\n  },\n";

  os << "  \"results\": [";
  bool first = true;
  for (const auto &row : doc.spectrum) {
    os << (first ? "\n" : ",\n");
    first = false;
    os << "    {\"which\": \"" << row.which << "\", \"index\": " << row.index
       << ", \"energy_re\": " << json_number(row.energy_re)
       << ", \"energy_im\": " << json_number(row.energy_im)
       << ", \"residual\": " << json_number(row.residual) << ", \"analytic\": "
       << (row.analytic ? json_number(*row.analytic) : std::string("null"))
       << ", \"bound\": " << (row.bound ? "true" : "false") << "}";
  }
  for (const auto &row : doc.samples) {
    os << (first ? "\n" : ",\n");
    first = false;
    os << "    {\"x\": " << json_number(row.x)
       << ", \"re\": " << json_number(row.re)
       << ", \"im\": " << json_number(row.im) << "}";
  }
  os << (first ? "]" : "\n  ]") << ",\n";

  os << "  \"checks\": [";
  first = true;
  for (const auto &c : doc.checks) {
    os << (first ? "\n" : ",\n");
    first = false;
    os << "    {\"name\": \"" << json_escape(c.name)
       << "\", \"metric\": " << json_number(c.metric)
       << ", \"tolerance\": " << json_number(c.tolerance)
       << ", \"passed\": " << (c.passed ? "true" : "false")
       << ", \"detail\": \"" << json_escape(c.detail) << "\"}";
  }
  os << (first ? "]" : "\n  ]") << "\n";
  os << "}\n";
}

void write_csv(std::ostream &os, const OutputDocument &doc) {
  if (doc.command == "verify") {
    os << "name,metric,tolerance,passed,detail\n";
    for (const auto &c : doc.checks)
      os << csv_field(c.name) << "," << format_double(c.metric) << ","
         << format_double(c.tolerance) << "," << (c.passed ? 1 : 0) << ","
         << csv_field(c.detail) << "\n";
    return;
  }
  if (doc.command == "sample") {
    os << "x,re,im\n";
    for (const auto &row : doc.samples)
      os << format_double(row.x) << "," << format_double(row.re) << ","
         << format_double(row.im) << "\n";
    return;
  }
  os << "index,energy_re,energy_im,residual,analytic,bound\n";
  for (const auto &row : doc.spectrum)
    os << row.index << "," << format_double(row.energy_re) << ","
       << format_double(row.energy_im) << "," << format_double(row.residual)
       << ","
       << (row.analytic ? format_double(*row.analytic) : std::string("nan"))
       << "," << (row.bound ? 1 : 0) << "\n";
}

void write_document(const OutputDocument &doc) {
  std::ostringstream buffer;
  if (doc.config.format == OutputFormat::json)
    write_json(buffer, doc);
  else
    write_csv(buffer, doc);
  if (doc.config.out_path.empty()) {
    std::cout << buffer.str();
    std::cout.flush();
  } else {
    std::ofstream out(doc.config.out_path, std::ios::binary);
    if (!out)
      throw std::invalid_argument("cannot open output file: " +
                                  doc.config.out_path);
    out << buffer.str();
  }
}

} // namespace ptsusy
