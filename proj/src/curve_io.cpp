#include "qmaj/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qmaj/error.hpp"
#include "qmaj/state_spec.hpp"

namespace qmaj {

namespace {

double parse_double(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(text) + "'", 0);
  return v;
}

std::map<std::string, std::string> header_fields(const std::string& line, const std::string& tag) {
  std::istringstream in(line);
  std::string hash, word;
  in >> hash >> word;
  if (hash != "#" || word != tag) throw ParseError("expected '# " + tag + "' header", 0);
  std::map<std::string, std::string> kv;
  while (in >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw ParseError("header: expected key=value, got '" + word + "'", 0);
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return kv;
}

const std::string& field(const std::map<std::string, std::string>& kv, const char* key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(std::string("header: missing '") + key + "'", 0);
  return it->second;
}

}  // namespace

void write_curve_csv(std::ostream& os, const LorenzCurve& c) {
  os << "# qmaj-curve side=" << to_string(c.side) << " domain_end=" << format_double(c.domain_end)
     << " relative=" << (c.relative ? 1 : 0) << " truncation_sensitive=" << (c.truncation_sensitive ? 1 : 0)
     << " decimation_error=" << format_double(c.decimation_error) << "\n";
  os << "s,L\n";
  for (std::size_t k = 0; k < c.size(); ++k) os << format_double(c.s[k]) << ',' << format_double(c.L[k]) << '\n';
}

LorenzCurve read_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("curve csv: empty input", 0);
  const auto kv = header_fields(line, "qmaj-curve");
  LorenzCurve c;
  const std::string& side = field(kv, "side");
  if (side != "positive" && side != "negative") throw ParseError("curve csv: bad side '" + side + "'", 0);
  c.side = side == "positive" ? Side::Positive : Side::Negative;
  c.domain_end = parse_double(field(kv, "domain_end"), 1);
  c.relative = field(kv, "relative") == "1";
  c.truncation_sensitive = field(kv, "truncation_sensitive") == "1";
  c.decimation_error = parse_double(field(kv, "decimation_error"), 1);
  if (!std::getline(is, line) || line != "s,L") throw ParseError("curve csv: expected 's,L' header", 0);
  c.s.clear();
  c.L.clear();
  std::size_t n = 2;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("line " + std::to_string(n) + ": expected s,L", 0);
    c.s.push_back(parse_double(std::string_view(line).substr(0, comma), n));
    c.L.push_back(parse_double(std::string_view(line).substr(comma + 1), n));
    if (c.s.size() > 1 && !(c.s.back() > c.s[c.s.size() - 2]))
      throw ParseError("line " + std::to_string(n) + ": s must increase", 0);
  }
  if (c.s.empty() || c.s.front() != 0.0 || c.L.front() != 0.0)
    throw ParseError("curve csv: curve must start at (0,0)", 0);
  return c;
}

std::vector<double> resample_abscissa(const CurvePair& c, const ResampleOptions& opts) {
  if (opts.points < 2) throw ConfigError("resample: need at least two points");
  const double end = std::max(c.positive.domain_end, c.negative.domain_end);
  std::vector<double> s(opts.points);
  if (opts.loglog) {
    if (!(opts.s_min > 0.0) || !(opts.s_min < end)) throw ConfigError("resample: log spacing needs 0 < s_min < end");
    const double a = std::log(opts.s_min), b = std::log(end);
    for (int k = 0; k < opts.points; ++k) s[k] = std::exp(a + (b - a) * k / (opts.points - 1));
  } else {
    for (int k = 0; k < opts.points; ++k) s[k] = end * k / (opts.points - 1);
  }
  s.back() = end;
  return s;
}

void write_combined_csv(std::ostream& os, const CurvePair& c, const ResampleOptions& opts) {
  os << "s,L_plus,L_minus\n";
  for (double s : resample_abscissa(c, opts))
    os << format_double(s) << ',' << format_double(c.positive(s)) << ',' << format_double(c.negative(s)) << '\n';
}

void write_grid_file(std::ostream& os, const SampledDistribution& f) {
  const GridSpec* g = f.grid();
  if (!g) throw ConfigError("grid file: distribution is not on a phase-space grid");
  os << "# qmaj-grid modes=" << g->modes << " L=" << format_double(g->half_width)
     << " N=" << g->points_per_axis << " hbar=" << to_string(g->hbar) << "\n";
  for (double v : f.values()) os << format_double(v) << '\n';
}

SampledDistribution read_grid_file(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("grid file: empty input", 0);
  const auto kv = header_fields(line, "qmaj-grid");
  GridSpec g;
  g.modes = static_cast<int>(parse_double(field(kv, "modes"), 1));
  g.half_width = parse_double(field(kv, "L"), 1);
  g.points_per_axis = static_cast<int>(parse_double(field(kv, "N"), 1));
  const std::string& hb = field(kv, "hbar");
  if (hb != "half" && hb != "one") throw ParseError("grid file: bad hbar '" + hb + "'", 0);
  g.hbar = hb == "half" ? Hbar::Half : Hbar::One;
  g.validate();
  std::vector<double> values;
  values.reserve(g.cell_count());
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty()) values.push_back(parse_double(line, n));
  }
  if (values.size() != g.cell_count())
    throw ParseError("grid file: expected " + std::to_string(g.cell_count()) + " values, got " +
                         std::to_string(values.size()), 0);
  return SampledDistribution(g, std::move(values));
}

}  // namespace qmaj
