#include "qmaj/states.hpp"

#include <cmath>
#include <numbers>

#include "qmaj/channels.hpp"
#include "qmaj/error.hpp"
#include "qmaj/parallel.hpp"
#include "qmaj/special.hpp"

namespace qmaj {

namespace {

constexpr double kPi = std::numbers::pi;

struct RenderContext {
  Rep rep = Rep::Wigner;
  bool reference = false;  // permits unnormalized negative-nbar thermal leaves
  bool integrable = true;
};

double coherent_wigner(double x, double p, double x0, double p0) {
  const double dx = x - x0, dp = p - p0;
  return 2.0 / kPi * std::exp(-2.0 * (dx * dx + dp * dp));
}

double coherent_husimi(double x, double p, double x0, double p0) {
  const double dx = x - x0, dp = p - p0;
  return std::exp(-(dx * dx + dp * dp)) / kPi;
}

// Closed forms in hbar = 1/2 coordinates.
double leaf_value(const StateSpec& s, RenderContext& ctx, double x, double p) {
  const double r2 = x * x + p * p;
  const bool wigner = ctx.rep == Rep::Wigner;
  switch (s.kind) {
    case StateKind::Fock:
      if (wigner) return 2.0 / kPi * std::exp(-2.0 * r2) * (s.n % 2 ? -1.0 : 1.0) * laguerre(s.n, 4.0 * r2);
      if (s.n == 0) return std::exp(-r2) / kPi;
      if (r2 == 0.0) return 0.0;
      return std::exp(s.n * std::log(r2) - std::lgamma(s.n + 1.0) - r2) / kPi;
    case StateKind::Coherent:
      return wigner ? coherent_wigner(x, p, s.alpha.real(), s.alpha.imag())
                    : coherent_husimi(x, p, s.alpha.real(), s.alpha.imag());
    case StateKind::Thermal: {
      const double nb = s.nbar;
      if (nb >= 0.0) {
        return wigner ? 2.0 / (kPi * (1.0 + 2.0 * nb)) * std::exp(-2.0 * r2 / (1.0 + 2.0 * nb))
                      : std::exp(-r2 / (1.0 + nb)) / (kPi * (1.0 + nb));
      }
      const double denom = wigner ? 1.0 + 2.0 * nb : 1.0 + nb;
      return std::exp(-(wigner ? 2.0 : 1.0) * r2 / denom);
    }
    case StateKind::Cat: {
      const double a = s.alpha.real();
      const double norm = 2.0 * (1.0 + std::exp(-2.0 * a * a));
      if (wigner)
        return (coherent_wigner(x, p, a, 0.0) + coherent_wigner(x, p, -a, 0.0) +
                4.0 / kPi * std::exp(-2.0 * r2) * std::cos(4.0 * a * p)) /
               norm;
      return (std::exp(-((x - a) * (x - a) + p * p)) + std::exp(-((x + a) * (x + a) + p * p)) +
              2.0 * std::exp(-r2 - a * a) * std::cos(2.0 * a * p)) /
             (kPi * norm);
    }
    case StateKind::On: {
      const std::complex<double> a = s.alpha;
      const double a2 = std::norm(a);
      const double sqrt_fact = std::exp(0.5 * std::lgamma(s.n + 1.0));
      if (wigner) {
        // Cross term taken exactly as the published closed form.
        const std::complex<double> z(x, -p);
        const double cross = 2.0 * std::real(a * std::pow(z, s.n));
        const StateSpec vac = StateSpec::fock(0), num = StateSpec::fock(s.n);
        return leaf_value(vac, ctx, x, p) / (1.0 + a2) + a2 / (1.0 + a2) * leaf_value(num, ctx, x, p) +
               std::exp(-r2) * cross / (2.0 * kPi * sqrt_fact * (1.0 + a2));
      }
      const std::complex<double> zbar(x, -p);
      const double amp = std::norm(1.0 + a * std::pow(zbar, s.n) / sqrt_fact);
      return std::exp(-r2) * amp / (kPi * (1.0 + a2));
    }
    default:
      throw Error("leaf_value: not a closed-form state");
  }
}

bool has_closed_form(StateKind k) {
  return k == StateKind::Fock || k == StateKind::Coherent || k == StateKind::Thermal ||
         k == StateKind::Cat || k == StateKind::On;
}

GridSpec subgrid(const GridSpec& g, int modes) {
  GridSpec s = g;
  s.modes = modes;
  return s;
}

std::vector<double> render_node(const StateSpec& s, const GridSpec& g, RenderContext& ctx);

std::vector<double> render_leaf(const StateSpec& s, const GridSpec& g, RenderContext& ctx) {
  if (s.kind == StateKind::Thermal && s.nbar < 0.0) {
    if (!ctx.reference)
      throw SemanticError("thermal: negative nbar is only allowed for reference distributions");
    const double denom = ctx.rep == Rep::Wigner ? 1.0 + 2.0 * s.nbar : 1.0 + s.nbar;
    if (denom == 0.0) throw SemanticError("thermal: nbar makes the reference singular");
    if (denom < 0.0) ctx.integrable = false;
  }
  const GridCells cells(g);
  const double scale = g.hbar == Hbar::One ? 0.5 : 1.0;
  const double shrink = g.hbar == Hbar::One ? 1.0 / std::sqrt(2.0) : 1.0;
  std::vector<double> out(cells.size());
  RenderContext local = ctx;
  parallel_for(cells.size(), [&](std::size_t b, std::size_t e) {
    RenderContext c = local;
    for (std::size_t i = b; i < e; ++i) {
      const CellCoords z = cells.center(i);
      out[i] = scale * leaf_value(s, c, z[0] * shrink, z[1] * shrink);
    }
  });
  return out;
}

std::vector<double> combine_tensor(const StateSpec& s, const GridSpec& g, RenderContext& ctx) {
  std::vector<std::vector<double>> parts;
  std::vector<int> offsets, widths;
  int offset = 0;
  for (const auto& c : s.children) {
    const int m = c.modes();
    parts.push_back(render_node(c, subgrid(g, m), ctx));
    offsets.push_back(offset);
    widths.push_back(m);
    offset += m;
  }
  const GridCells cells(g);
  const int modes = g.modes;
  const auto n = static_cast<std::size_t>(g.points_per_axis);
  std::vector<double> out(cells.size());
  parallel_for(cells.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto idx = cells.indices(i);
      double v = 1.0;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        std::size_t flat = 0;
        for (int j = 0; j < widths[k]; ++j) flat = flat * n + idx[offsets[k] + j];
        for (int j = 0; j < widths[k]; ++j) flat = flat * n + idx[modes + offsets[k] + j];
        v *= parts[k][flat];
      }
      out[i] = v;
    }
  });
  return out;
}

std::vector<double> render_lossy(const StateSpec& s, const GridSpec& g, RenderContext& ctx) {
  const StateSpec& inner = s.children.at(0);
  const double eta = s.eta;
  if (eta == 0.0) return render_node(StateSpec::fock(0), g, ctx);
  switch (inner.kind) {
    case StateKind::Fock: {
      const auto w = pure_loss_fock(inner.n, eta);
      std::vector<double> wk;
      std::vector<StateSpec> parts;
      for (int k = 0; k <= inner.n; ++k) {
        if (w[k] == 0.0) continue;
        wk.push_back(w[k]);
        parts.push_back(StateSpec::fock(k));
      }
      if (parts.size() == 1) return render_node(parts[0], g, ctx);
      return render_node(StateSpec::mix(wk, parts), g, ctx);
    }
    case StateKind::Coherent:
      return render_node(StateSpec::coherent(std::sqrt(eta) * inner.alpha), g, ctx);
    case StateKind::Thermal:
      if (inner.nbar >= 0.0) return render_node(StateSpec::thermal(eta * inner.nbar), g, ctx);
      break;
    case StateKind::Mix: {
      std::vector<StateSpec> parts;
      for (const auto& c : inner.children) parts.push_back(StateSpec::lossy(eta, c));
      return render_node(StateSpec::mix(inner.weights, parts), g, ctx);
    }
    default:
      break;
  }
  const SampledDistribution in(g, render_node(inner, g, ctx));
  const SampledDistribution out = apply_gaussian(GaussianChannelSpec::pure_loss(eta), in, ctx.rep);
  return {out.values().begin(), out.values().end()};
}

std::vector<double> render_node(const StateSpec& s, const GridSpec& g, RenderContext& ctx) {
  if (has_closed_form(s.kind)) return render_leaf(s, g, ctx);
  switch (s.kind) {
    case StateKind::Cubic: {
      if (ctx.rep == Rep::Husimi)
        throw UnsupportedError("Husimi rendering of cubic phase states is not supported");
      const auto psi = cubic_wavefunction(s.g, s.s, s.p, g);
      const auto w = wigner_from_wavefunction(psi, g);
      return {w.wigner.values().begin(), w.wigner.values().end()};
    }
    case StateKind::Lossy:
      return render_lossy(s, g, ctx);
    case StateKind::Dephase: {
      const StateSpec& inner = s.children.at(0);
      if (rotation_invariant(inner) || s.gamma == 0.0) return render_node(inner, g, ctx);
      const SampledDistribution in(g, render_node(inner, g, ctx));
      const SampledDistribution out = apply_dephasing(s.gamma, in, 64);
      return {out.values().begin(), out.values().end()};
    }
    case StateKind::Mix: {
      std::vector<double> acc;
      for (std::size_t k = 0; k < s.children.size(); ++k) {
        const auto v = render_node(s.children[k], g, ctx);
        if (acc.empty()) acc.assign(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += s.weights[k] * v[i];
      }
      return acc;
    }
    case StateKind::Tensor:
      return combine_tensor(s, g, ctx);
    default:
      throw Error("render: unhandled state kind");
  }
}

void check_modes(const StateSpec& spec, const GridSpec& grid) {
  grid.validate();
  if (spec.modes() != grid.modes)
    throw ConfigError("state has " + std::to_string(spec.modes()) + " mode(s) but the grid has " +
                      std::to_string(grid.modes));
}

bool contains_negative_thermal(const StateSpec& s) {
  if (s.kind == StateKind::Thermal) return s.nbar < 0.0;
  for (const auto& c : s.children)
    if (contains_negative_thermal(c)) return true;
  return false;
}

}  // namespace

bool rotation_invariant(const StateSpec& s) {
  switch (s.kind) {
    case StateKind::Fock:
    case StateKind::Thermal:
      return true;
    case StateKind::Lossy:
    case StateKind::Dephase:
    case StateKind::Mix:
      for (const auto& c : s.children)
        if (!rotation_invariant(c)) return false;
      return true;
    default:
      return false;
  }
}

SampledDistribution render(const StateSpec& spec, const GridSpec& grid, Rep rep) {
  validate(spec, kMaxModes);
  check_modes(spec, grid);
  RenderContext ctx;
  ctx.rep = rep;
  return SampledDistribution(grid, render_node(spec, grid, ctx));
}

ReferenceDistribution reference(const StateSpec& spec, const GridSpec& grid, Rep rep) {
  validate(spec, kMaxModes);
  check_modes(spec, grid);
  if (contains_negative_thermal(spec) && spec.kind != StateKind::Thermal &&
      spec.kind != StateKind::Tensor)
    throw SemanticError("negative-nbar thermal references cannot be mixed or sent through channels");
  RenderContext ctx;
  ctx.rep = rep;
  ctx.reference = true;
  auto values = render_node(spec, grid, ctx);
  return ReferenceDistribution(SampledDistribution(grid, std::move(values)), ctx.integrable);
}

ReferenceDistribution reference(std::string_view text, const GridSpec& grid, Rep rep) {
  return reference(parse_state(text), grid, rep);
}

std::vector<std::complex<double>> fock_wavefunction(int n, const GridSpec& grid) {
  // hbar = 1/2: psi_n(x) = 2^{1/4} phi_n(sqrt(2) x); hbar = 1: phi_n(x).
  const bool half = grid.hbar == Hbar::Half;
  const double pre = half ? std::pow(2.0, 0.25) : 1.0;
  const double stretch = half ? std::sqrt(2.0) : 1.0;
  std::vector<std::complex<double>> psi(grid.points_per_axis);
  for (int k = 0; k < grid.points_per_axis; ++k)
    psi[k] = pre * hermite_function(n, stretch * grid.axis_center(k));
  return psi;
}

std::vector<std::complex<double>> cubic_wavefunction(double g, double s, double p, const GridSpec& grid) {
  // exp(i g x^3) S(s)|0> with momentum offset p, built in hbar = 1/2
  // coordinates and normalized on the grid.
  const double shrink = grid.hbar == Hbar::One ? 1.0 / std::sqrt(2.0) : 1.0;
  const double h = grid.spacing();
  std::vector<std::complex<double>> psi(grid.points_per_axis);
  double norm = 0.0;
  for (int k = 0; k < grid.points_per_axis; ++k) {
    const double x = grid.axis_center(k) * shrink;
    const double phase = g * x * x * x + 2.0 * p * x;
    psi[k] = std::polar(std::exp(-std::exp(2.0 * s) * x * x), phase);
    norm += std::norm(psi[k]) * h;
  }
  for (auto& v : psi) v /= std::sqrt(norm);
  return psi;
}

WavefunctionWigner wigner_from_wavefunction(std::span<const std::complex<double>> psi,
                                            const GridSpec& grid) {
  grid.validate();
  if (grid.modes != 1) throw ConfigError("wigner_from_wavefunction: single-mode grid required");
  const int n = grid.points_per_axis;
  if (static_cast<int>(psi.size()) != n)
    throw ConfigError("wigner_from_wavefunction: psi must have one sample per axis point");
  const double hbar = grid.hbar == Hbar::Half ? 0.5 : 1.0;
  const double h = grid.spacing();
  const double L = grid.half_width;
  if (h > kPi * hbar / (2.0 * L))
    throw ConfigError("wigner_from_wavefunction: x spacing too coarse for the momentum range (need h <= " +
                      format_double(kPi * hbar / (2.0 * L)) + ")");
  double norm = 0.0;
  for (const auto& v : psi) norm += std::norm(v) * h;
  if (std::abs(norm - 1.0) > 1e-4)
    throw ConfigError("wigner_from_wavefunction: psi is not normalized (norm " + format_double(norm) + ")");

  std::vector<double> w(static_cast<std::size_t>(n) * n);
  std::vector<double> residue(static_cast<std::size_t>(n), 0.0);
  const double pre = h / (kPi * hbar);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    std::vector<std::complex<double>> a_pos, a_neg;
    for (std::size_t j = b; j < e; ++j) {
      const int jj = static_cast<int>(j);
      const int mmax = std::min(jj, n - 1 - jj);
      a_pos.assign(mmax + 1, 0.0);
      a_neg.assign(mmax + 1, 0.0);
      for (int m = 0; m <= mmax; ++m) {
        a_pos[m] = std::conj(psi[jj + m]) * psi[jj - m];
        a_neg[m] = std::conj(psi[jj - m]) * psi[jj + m];
      }
      for (int k = 0; k < n; ++k) {
        const double pk = grid.axis_center(k);
        const std::complex<double> z = std::polar(1.0, 2.0 * pk * h / hbar);
        const std::complex<double> zinv = 1.0 / z;
        std::complex<double> zp = 1.0, zn = 1.0;
        std::complex<double> sum = a_pos[0];
        for (int m = 1; m <= mmax; ++m) {
          zp *= z;
          zn *= zinv;
          sum += a_pos[m] * zp + a_neg[m] * zn;
        }
        w[j * n + k] = pre * sum.real();
        residue[j] = std::max(residue[j], std::abs(pre * sum.imag()));
      }
    }
  });
  WavefunctionWigner out{SampledDistribution(grid, std::move(w)), 0.0};
  for (double r : residue) out.imaginary_residue = std::max(out.imaginary_residue, r);
  return out;
}

}  // namespace qmaj
