#include "qmaj/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qmaj/channels.hpp"
#include "qmaj/compare.hpp"
#include "qmaj/curve_io.hpp"
#include "qmaj/discrete.hpp"
#include "qmaj/error.hpp"
#include "qmaj/monotones.hpp"
#include "qmaj/rearrange.hpp"
#include "qmaj/states.hpp"
#include "qmaj/svg.hpp"

namespace qmaj {

namespace {

struct RunConfig {
  std::string grid_text;
  std::string hbar = "half";
  std::string rep = "wigner";
  double tol = 1e-4;
  double norm_tol = kNormTolerance;
  std::string out;
  bool loglog = false;
  std::string svg;
  int points = 2000;

  std::string state, ref, channel;
  std::string a, b;
  std::string curves;
  bool from_curves = false;
  bool positive_only = false;
  std::string family = "thermal";
  double lo = 0.1, hi = 2.0, resolution = 0.01;
  int steps = 10;
  std::string report;
  std::string which = "nv,purity,max,min";
  std::string dvec_q;
  bool exact = false;
  int dephase_points = 64;
};

Hbar parse_hbar(const std::string& s) {
  if (s == "half") return Hbar::Half;
  if (s == "one") return Hbar::One;
  throw ConfigError("--hbar must be 'half' or 'one'");
}

Rep parse_rep(const std::string& s) {
  if (s == "wigner") return Rep::Wigner;
  if (s == "husimi") return Rep::Husimi;
  throw ConfigError("--rep must be 'wigner' or 'husimi'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(what) + ": bad number '" + s + "'");
  }
}

GridSpec make_grid_spec(const RunConfig& cfg, int modes) {
  GridSpec g = GridSpec::default_for(modes, parse_hbar(cfg.hbar));
  for (const std::string& item : split(cfg.grid_text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--grid expects L=<real>,N=<int>");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "L") {
      g.half_width = parse_number(val, "--grid L");
    } else if (key == "N") {
      const double n = parse_number(val, "--grid N");
      if (n != std::floor(n)) throw ConfigError("--grid N must be an integer");
      g.points_per_axis = static_cast<int>(n);
    } else {
      throw ConfigError("--grid: unknown key '" + key + "'");
    }
  }
  g.validate();
  return g;
}

CompareOptions compare_options(const RunConfig& cfg) {
  CompareOptions o;
  o.eps_cmp = cfg.tol;
  o.eps_norm = cfg.norm_tol;
  o.positive_only = cfg.positive_only;
  return o;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  return f;
}

CurvePair curves_for(const SampledDistribution& f, const std::optional<ReferenceDistribution>& q) {
  return q ? relative_lorenz_curves(f, *q) : lorenz_curves(f);
}

void write_curve_files(const std::string& prefix, const CurvePair& c) {
  auto plus = open_out(prefix + "_plus.csv");
  write_curve_csv(plus, c.positive);
  auto minus = open_out(prefix + "_minus.csv");
  write_curve_csv(minus, c.negative);
}

CurvePair read_curve_files(const std::string& prefix) {
  auto plus = open_in(prefix + "_plus.csv");
  auto minus = open_in(prefix + "_minus.csv");
  return {read_curve_csv(plus), read_curve_csv(minus)};
}

void add_curve_series(std::vector<SvgSeries>& series, const std::string& name, const CurvePair& c,
                      const ResampleOptions& ro, bool with_negative) {
  const auto s = resample_abscissa(c, ro);
  SvgSeries p{name + " L+", s, {}}, m{name + " L-", s, {}};
  for (double x : s) {
    p.y.push_back(c.positive(x));
    m.y.push_back(c.negative(x));
  }
  series.push_back(std::move(p));
  if (with_negative) series.push_back(std::move(m));
}

ResampleOptions resample_options(const RunConfig& cfg, const GridSpec& g) {
  ResampleOptions ro;
  ro.points = cfg.points;
  ro.loglog = cfg.loglog;
  ro.s_min = g.cell_volume();
  return ro;
}

// Smallest nu cell measure for log spacing of relative curves.
double smallest_cell(const CurvePair& c) {
  double m = std::numeric_limits<double>::infinity();
  for (const LorenzCurve* cur : {&c.positive, &c.negative})
    if (cur->size() > 1) m = std::min(m, cur->s[1]);
  return std::isfinite(m) ? m : 1e-12;
}

int cmd_lorenz(const RunConfig& cfg, std::ostream& out) {
  const StateSpec spec = parse_state(cfg.state);
  const GridSpec g = make_grid_spec(cfg, spec.modes());
  const Rep rep = parse_rep(cfg.rep);
  const SampledDistribution f = render(spec, g, rep);
  std::optional<ReferenceDistribution> q;
  if (!cfg.ref.empty()) q = reference(parse_state(cfg.ref), g, rep);
  const CurvePair c = curves_for(f, q);
  ResampleOptions ro = resample_options(cfg, g);
  if (q) ro.s_min = smallest_cell(c);

  if (!cfg.curves.empty()) write_curve_files(cfg.curves, c);
  if (cfg.out.empty()) {
    write_combined_csv(out, c, ro);
  } else {
    auto file = open_out(cfg.out);
    write_combined_csv(file, c, ro);
  }
  if (!cfg.svg.empty()) {
    std::vector<SvgSeries> series;
    add_curve_series(series, to_string(spec), c, ro, rep == Rep::Wigner);
    auto file = open_out(cfg.svg);
    write_svg(file, series, q ? "Lorenz curves relative to " + to_string(parse_state(cfg.ref)) : "Lorenz curves",
              q ? "nu" : "s", "L", cfg.loglog);
  }
  return kExitOk;
}

void print_verdict(std::ostream& out, const MajorizationVerdict& v, const CompareOptions& o) {
  out << to_string(v.outcome) << "\n";
  out << "outcome=" << to_string(v.outcome);
  if (v.witness)
    out << " witness_s=" << format_double(v.witness->s) << " side=" << to_string(v.witness->side)
        << " gap=" << format_double(v.witness->gap);
  else
    out << " witness_s=none side=none gap=none";
  out << " forward_worst=" << format_double(v.forward_worst.gap)
      << " backward_worst=" << format_double(v.backward_worst.gap) << " eps_cmp=" << format_double(o.eps_cmp)
      << " eps_norm=" << format_double(o.eps_norm)
      << " normalization_mismatch=" << format_double(v.normalization_mismatch)
      << " truncation_sensitive=" << (v.truncation_sensitive ? 1 : 0) << "\n";
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const CompareOptions o = compare_options(cfg);
  if (cfg.from_curves) {
    const CurvePair ca = read_curve_files(cfg.a), cb = read_curve_files(cfg.b);
    print_verdict(out, compare_curves(ca, cb, o), o);
    return kExitOk;
  }
  const StateSpec sa = parse_state(cfg.a), sb = parse_state(cfg.b);
  if (sa.modes() != sb.modes()) throw ConfigError("compare: states have different mode counts");
  const GridSpec g = make_grid_spec(cfg, sa.modes());
  const Rep rep = parse_rep(cfg.rep);
  const SampledDistribution fa = render(sa, g, rep), fb = render(sb, g, rep);
  std::optional<ReferenceDistribution> q;
  if (!cfg.ref.empty()) q = reference(parse_state(cfg.ref), g, rep);
  const MajorizationVerdict v = q ? compare(fa, fb, *q, o) : compare(fa, fb, o);
  print_verdict(out, v, o);

  if (!cfg.svg.empty() || !cfg.curves.empty()) {
    const CurvePair ca = curves_for(fa, q), cb = curves_for(fb, q);
    if (!cfg.curves.empty()) {
      write_curve_files(cfg.curves + "_a", ca);
      write_curve_files(cfg.curves + "_b", cb);
    }
    if (!cfg.svg.empty()) {
      ResampleOptions ro = resample_options(cfg, g);
      if (q) ro.s_min = std::min(smallest_cell(ca), smallest_cell(cb));
      std::vector<SvgSeries> series;
      add_curve_series(series, to_string(sa), ca, ro, !cfg.positive_only);
      add_curve_series(series, to_string(sb), cb, ro, !cfg.positive_only);
      auto file = open_out(cfg.svg);
      write_svg(file, series, to_string(v.outcome), q ? "nu" : "s", "L", cfg.loglog);
    }
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.family != "thermal") throw ConfigError("scan: only the 'thermal' family is available");
  const StateSpec sa = parse_state(cfg.a), sb = parse_state(cfg.b);
  if (sa.modes() != 1 || sb.modes() != 1) throw ConfigError("scan: thermal family needs single-mode states");
  const GridSpec g = make_grid_spec(cfg, 1);
  const Rep rep = parse_rep(cfg.rep);
  const SampledDistribution fa = render(sa, g, rep), fb = render(sb, g, rep);
  const ReferenceFamily family = [&](double nbar) { return reference(StateSpec::thermal(nbar), g, rep); };
  const CompareOptions o = compare_options(cfg);
  if (!cfg.report.empty()) {
    std::vector<double> params;
    for (const auto& s : split(cfg.report, ',')) params.push_back(parse_number(s, "--report"));
    out << "nbar,outcome\n";
    for (const auto& p : scan_report(fa, fb, family, params, o))
      out << format_double(p.parameter) << ',' << to_string(p.outcome) << "\n";
    return kExitOk;
  }
  const ThresholdResult r = scan_threshold(fa, fb, family, "nbar", cfg.lo, cfg.hi, cfg.resolution, o, cfg.steps);
  out << "parameter,lower,upper,estimate,lower_verdict,upper_verdict,evaluations\n";
  out << r.parameter << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ','
      << format_double(r.estimate()) << ',' << to_string(r.lower_verdict) << ','
      << to_string(r.upper_verdict) << ',' << r.evaluations << "\n";
  return kExitOk;
}

int cmd_monotone(const RunConfig& cfg, std::ostream& out) {
  const StateSpec spec = parse_state(cfg.state);
  const GridSpec g = make_grid_spec(cfg, spec.modes());
  const Rep rep = parse_rep(cfg.rep);
  const SampledDistribution f = render(spec, g, rep);
  std::optional<ReferenceDistribution> q;
  if (!cfg.ref.empty()) q = reference(parse_state(cfg.ref), g, rep);
  const auto which = split(cfg.which, ',');
  const MonotoneReport r = monotone_report(f, which, q ? &*q : nullptr);
  std::ostringstream csv;
  csv << "name,value\n";
  for (const auto& name : which) {
    out << name << '=' << format_double(r.values.at(name)) << "\n";
    csv << name << ',' << format_double(r.values.at(name)) << "\n";
  }
  out << "hbar=" << to_string(r.hbar) << "\n";
  if (!cfg.out.empty()) {
    auto file = open_out(cfg.out);
    file << csv.str();
  }
  return kExitOk;
}

int cmd_apply(const RunConfig& cfg, std::ostream& out) {
  const ChannelSpec ch = parse_channel(cfg.channel);
  const StateSpec spec = parse_state(cfg.state);
  const GridSpec g = make_grid_spec(cfg, spec.modes());
  const Rep rep = parse_rep(cfg.rep);
  const SampledDistribution f = render(spec, g, rep);
  ChannelDiagnostics diag;
  SampledDistribution result = ch.is_dephasing ? apply_dephasing(ch.gamma, f, cfg.dephase_points, &diag)
                                               : apply_gaussian(ch.gaussian, f, rep, &diag);
  if (!ch.is_dephasing) out << "class=" << to_string(classify_gaussian(ch.gaussian)) << "\n";
  out << "integral_in=" << format_double(f.total_integral())
      << "\nintegral_out=" << format_double(result.total_integral())
      << "\nleakage=" << format_double(diag.leakage) << "\n";
  const MajorizationVerdict v = compare(f, result, compare_options(cfg));
  out << "input_vs_output=" << to_string(v.outcome) << "\n";
  if (!cfg.out.empty()) {
    auto file = open_out(cfg.out);
    write_grid_file(file, result);
  }
  return kExitOk;
}

// Decimal or p/q literal as an exact rational.
discrete::Rational exact_value(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos)
    return discrete::Rational(exact_value(s.substr(0, slash))) / exact_value(s.substr(slash + 1));
  std::string digits;
  long long scale = 1;
  bool frac = false, any = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '-' || c == '+') && i == 0) {
      if (c == '-') digits += c;
    } else if (c == '.' && !frac) {
      frac = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any = true;
      if (frac) {
        if (scale > 100000000000000000LL) throw ParseError("dvec: too many decimals in '" + s + "'", i);
        scale *= 10;
      }
    } else {
      throw ParseError("dvec: bad entry '" + s + "'", i);
    }
  }
  if (!any) throw ParseError("dvec: bad entry '" + s + "'", 0);
  return discrete::Rational(boost::multiprecision::cpp_int(digits)) / scale;
}

template <class T>
std::vector<T> parse_vector(const std::string& text, T (*conv)(const std::string&)) {
  std::vector<T> v;
  for (const auto& item : split(text, ',')) v.push_back(conv(item));
  if (v.empty()) throw ParseError("dvec: empty vector", 0);
  return v;
}

double float_value(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) return float_value(s.substr(0, slash)) / float_value(s.substr(slash + 1));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("dvec: bad entry '" + s + "'", 0);
  }
}

template <class T>
int dvec_run(const RunConfig& cfg, std::ostream& out, T (*conv)(const std::string&), const T& eps,
             const T& sum_tol) {
  const auto f = parse_vector<T>(cfg.a, conv), g = parse_vector<T>(cfg.b, conv);
  std::optional<std::vector<T>> q;
  if (!cfg.dvec_q.empty()) q = parse_vector<T>(cfg.dvec_q, conv);
  const auto v = discrete::vec_compare(f, g, q ? &*q : nullptr, eps, sum_tol);
  const auto s4 = discrete::statement4_bruteforce(f, g, q ? &*q : nullptr, eps);
  out << to_string(v.outcome) << "\n";
  out << "outcome=" << to_string(v.outcome) << " forward=" << v.forward << " backward=" << v.backward
      << " statement4_forward=" << s4.forward << " statement4_backward=" << s4.backward
      << " worst_forward=" << v.worst_forward << " worst_backward=" << v.worst_backward << "\n";
  return kExitOk;
}

int cmd_dvec(const RunConfig& cfg, std::ostream& out) {
  if (cfg.exact) return dvec_run<discrete::Rational>(cfg, out, &exact_value, 0, 0);
  return dvec_run<double>(cfg, out, &float_value, cfg.tol, 1e-12);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Majorization of quasiprobability distributions", "qmaj"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--grid", cfg.grid_text, "Grid parameters L=<real>,N=<int>");
  app.add_option("--hbar", cfg.hbar, "Phase-space convention: half | one");
  app.add_option("--rep", cfg.rep, "Representation: wigner | husimi");
  app.add_option("--tol", cfg.tol, "Curve comparison tolerance");
  app.add_option("--norm-tol", cfg.norm_tol, "Normalization tolerance");
  app.add_option("--out", cfg.out, "Output file");
  app.add_flag("--loglog", cfg.loglog, "Log-spaced resampling and log-log plots");
  app.add_option("--svg", cfg.svg, "Write an SVG plot");
  app.add_option("--points", cfg.points, "Resampled points in combined CSV output");

  auto* lorenz = app.add_subcommand("lorenz", "Lorenz curves of a state");
  lorenz->add_option("--state", cfg.state, "State spec")->required();
  lorenz->add_option("--ref", cfg.ref, "Reference spec for relative curves");
  lorenz->add_option("--curves", cfg.curves, "Write full curves to <prefix>_plus.csv/_minus.csv");

  auto* cmp = app.add_subcommand("compare", "Majorization verdict between two states");
  cmp->add_option("a", cfg.a, "First state (or curve prefix)")->required();
  cmp->add_option("b", cfg.b, "Second state (or curve prefix)")->required();
  cmp->add_option("--ref", cfg.ref, "Reference spec");
  cmp->add_flag("--from-curves", cfg.from_curves, "Arguments are curve file prefixes");
  cmp->add_flag("--positive-only", cfg.positive_only, "Compare positive curves only");
  cmp->add_option("--curves", cfg.curves, "Write full curves with this prefix");

  auto* scan = app.add_subcommand("scan", "Threshold scan over a reference family");
  scan->add_option("a", cfg.a)->required();
  scan->add_option("b", cfg.b)->required();
  scan->add_option("--family", cfg.family, "Reference family (thermal)");
  scan->add_option("--lo", cfg.lo);
  scan->add_option("--hi", cfg.hi);
  scan->add_option("--resolution", cfg.resolution);
  scan->add_option("--steps", cfg.steps);
  scan->add_option("--report", cfg.report, "Comma-separated parameters: verdict table instead of a threshold");
  scan->add_flag("--positive-only", cfg.positive_only);

  auto* mono = app.add_subcommand("monotone", "Schur-convex monotones of a state");
  mono->add_option("--state", cfg.state)->required();
  mono->add_option("--which", cfg.which, "nv,purity,max,min,g,lp:a,renyi:a,tsallis:a,divergence:a");
  mono->add_option("--ref", cfg.ref, "Reference for divergences");

  auto* apply = app.add_subcommand("apply", "Apply a channel to a state");
  apply->add_option("--channel", cfg.channel)->required();
  apply->add_option("--state", cfg.state)->required();
  apply->add_option("--dephase-points", cfg.dephase_points);

  auto* dvec = app.add_subcommand("dvec", "Counting-measure vector comparison");
  dvec->add_option("op", cfg.family, "Operation (compare)")->required()->check(CLI::IsMember({"compare"}));
  dvec->add_option("f", cfg.a)->required();
  dvec->add_option("g", cfg.b)->required();
  dvec->add_option("--q", cfg.dvec_q, "Reference vector");
  dvec->add_flag("--exact", cfg.exact, "Exact rational arithmetic");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (lorenz->parsed()) return cmd_lorenz(cfg, out);
    if (cmp->parsed()) return cmd_compare(cfg, out);
    if (scan->parsed()) return cmd_scan(cfg, out);
    if (mono->parsed()) return cmd_monotone(cfg, out);
    if (apply->parsed()) return cmd_apply(cfg, out);
    if (dvec->parsed()) return cmd_dvec(cfg, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SemanticError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace qmaj
