#include "qmaj/channels.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "interpolate.hpp"
#include "qmaj/error.hpp"
#include "qmaj/parallel.hpp"
#include "qmaj/special.hpp"

namespace qmaj {

namespace {

constexpr double kLeakageLimit = 1e-3;

bool is_symmetric_psd(const Eigen::MatrixXd& Y, double tol = 1e-12) {
  if (Y.rows() != Y.cols()) return false;
  if ((Y - Y.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, Y.cwiseAbs().maxCoeff()))
    return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
  return es.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, Y.cwiseAbs().maxCoeff());
}

double half_hbar(Hbar h) { return h == Hbar::Half ? 0.25 : 0.5; }

void check_leakage(double before, double after, const char* what, ChannelDiagnostics* diag) {
  const double leak = std::abs(after - before);
  if (diag) diag->leakage = leak;
  if (leak > kLeakageLimit)
    throw NumericError(std::string(what) + ": " + std::to_string(leak) +
                       " of the mass left the grid; enlarge L");
}

// out(z) = f(A z + b) * scale, with A and b given in xxpp coordinates.
std::vector<double> affine_resample(const SampledDistribution& f, const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b, double scale) {
  const GridSpec& g = *f.grid();
  const GridCells cells(g);
  const int dims = g.dims();
  detail::GridInterpolator interp(g, f.values(), detail::default_order(dims));
  std::vector<double> out(f.size());
  parallel_for(f.size(), [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(dims);
    double w[kMaxDims];
    for (std::size_t i = begin; i < end; ++i) {
      const CellCoords c = cells.center(i);
      for (int d = 0; d < dims; ++d) z(d) = c[d];
      const Eigen::VectorXd src = A * z + b;
      for (int d = 0; d < dims; ++d) w[d] = src(d);
      out[i] = scale * interp(w);
    }
  });
  return out;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Convolution with the centered Gaussian of covariance sigma, on a zero
// padded box wide enough that the periodic wrap stays below 4 sigma.
std::vector<double> gaussian_convolve(const GridSpec& g, std::span<const double> values,
                                      const Eigen::MatrixXd& sigma) {
  const int dims = g.dims();
  const int n = g.points_per_axis;
  const double h = g.spacing();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const double smax = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  int pad = static_cast<int>(std::ceil(4.0 * smax / h)) + 1;
  int m = n + 2 * pad;
  if (m % 2) ++m;

  std::vector<int> shape(dims, m);
  std::size_t real_size = 1;
  for (int d = 0; d < dims; ++d) real_size *= static_cast<std::size_t>(m);
  const std::size_t half = static_cast<std::size_t>(m / 2 + 1);
  const std::size_t complex_size = real_size / static_cast<std::size_t>(m) * half;

  double* buf = fftw_alloc_real(real_size);
  fftw_complex* spec = fftw_alloc_complex(complex_size);
  if (!buf || !spec) throw NumericError("gaussian convolution: out of memory");
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c(dims, shape.data(), buf, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r(dims, shape.data(), spec, buf, FFTW_ESTIMATE);
  }
  std::fill(buf, buf + real_size, 0.0);

  const GridCells cells(g);
  auto padded_index = [&](std::size_t i) {
    const auto idx = cells.indices(i);
    std::size_t flat = 0;
    for (int d = 0; d < dims; ++d) flat = flat * m + static_cast<std::size_t>(idx[d] + pad);
    return flat;
  };
  for (std::size_t i = 0; i < values.size(); ++i) buf[padded_index(i)] = values[i];
  fftw_execute(fwd);

  const double norm = 1.0 / static_cast<double>(real_size);
  const double dk = 2.0 * std::numbers::pi / (m * h);
  parallel_for(complex_size, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd k(dims);
    for (std::size_t c = begin; c < end; ++c) {
      std::size_t rest = c;
      for (int d = dims - 1; d >= 0; --d) {
        const std::size_t len = d == dims - 1 ? half : static_cast<std::size_t>(m);
        const int idx = static_cast<int>(rest % len);
        rest /= len;
        k(d) = dk * (idx <= m / 2 ? idx : idx - m);
      }
      const double factor = std::exp(-0.5 * k.dot(sigma * k)) * norm;
      spec[c][0] *= factor;
      spec[c][1] *= factor;
    }
  });
  fftw_execute(inv);

  // Transform roundoff leaves noise of order eps * peak everywhere; far tails
  // below that floor are set to zero so ratios against decaying references
  // stay meaningful.
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * peak;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = buf[padded_index(i)];
    out[i] = std::abs(v) > floor ? v : 0.0;
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(buf);
  fftw_free(spec);
  return out;
}

const GridSpec& require_grid(const SampledDistribution& f, const char* what) {
  const GridSpec* g = f.grid();
  if (!g) throw ConfigError(std::string(what) + ": needs a phase-space grid");
  return *g;
}

}  // namespace

void GaussianChannelSpec::validate() const {
  const auto d = X.rows();
  if (d == 0 || d % 2 || X.cols() != d) throw ConfigError("gaussian channel: X must be 2n x 2n");
  if (Y.rows() != d || Y.cols() != d) throw ConfigError("gaussian channel: Y must match X");
  if (delta.size() != d) throw ConfigError("gaussian channel: delta must have 2n entries");
  if (!is_symmetric_psd(Y)) throw ConfigError("gaussian channel: Y must be symmetric PSD");
}

GaussianChannelSpec GaussianChannelSpec::identity(int modes) {
  const int d = 2 * modes;
  return {Eigen::MatrixXd::Identity(d, d), Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};
}

GaussianChannelSpec GaussianChannelSpec::pure_loss(double eta, int modes) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("pure loss: eta must lie in [0, 1]");
  const int d = 2 * modes;
  return {std::sqrt(eta) * Eigen::MatrixXd::Identity(d, d),
          (1.0 - eta) * Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
}

GaussianChannelSpec GaussianChannelSpec::amplifier(double gain, int modes) {
  if (!(gain >= 1.0)) throw ConfigError("amplifier: gain must be >= 1");
  const int d = 2 * modes;
  return {std::sqrt(gain) * Eigen::MatrixXd::Identity(d, d),
          (gain - 1.0) * Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
}

GaussianChannelSpec GaussianChannelSpec::rotation(double theta) {
  GaussianChannelSpec ch = identity(1);
  ch.X << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return ch;
}

GaussianChannelSpec GaussianChannelSpec::displacement(double x0, double p0) {
  GaussianChannelSpec ch = identity(1);
  ch.delta << x0, p0;
  return ch;
}

SampledDistribution apply_gaussian(const GaussianChannelSpec& ch, const SampledDistribution& f,
                                   Rep rep, ChannelDiagnostics* diag) {
  ch.validate();
  const GridSpec& g = require_grid(f, "apply_gaussian");
  if (ch.modes() != g.modes) throw ConfigError("apply_gaussian: channel and grid mode counts differ");
  const double det = ch.X.determinant();
  if (std::abs(det) < 1e-12) throw NumericError("apply_gaussian: X is singular");

  const int d = g.dims();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  std::vector<double> values;
  if (ch.X == I && ch.delta.isZero(0.0)) {
    values.assign(f.values().begin(), f.values().end());
  } else {
    const Eigen::MatrixXd Xinv = ch.X.inverse();
    values = affine_resample(f, Xinv, -Xinv * ch.delta, 1.0 / std::abs(det));
  }

  // Husimi = Wigner smoothed by one vacuum; pushing that vacuum through X
  // leaves I - X X^T of it to be restored.
  Eigen::MatrixXd noise = ch.Y;
  if (rep == Rep::Husimi) noise += I - ch.X * ch.X.transpose();
  noise = 0.5 * (noise + noise.transpose()) * half_hbar(g.hbar);
  if (!is_symmetric_psd(noise, 1e-10))
    throw ConfigError("apply_gaussian: channel is not physical in the Husimi representation");
  if (noise.cwiseAbs().maxCoeff() > 1e-15) values = gaussian_convolve(g, values, noise);

  SampledDistribution out = f.with_values(std::move(values));
  check_leakage(f.total_integral(), out.total_integral(), "apply_gaussian", diag);
  return out;
}

std::vector<double> pure_loss_fock(int n, double eta) {
  if (n < 0) throw ConfigError("pure_loss_fock: n must be nonnegative");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("pure_loss_fock: eta must lie in [0, 1]");
  std::vector<double> p(n + 1);
  for (int k = 0; k <= n; ++k) p[k] = binomial(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k);
  return p;
}

SampledDistribution apply_dephasing(double gamma, const SampledDistribution& f, int k,
                                    ChannelDiagnostics* diag) {
  const GridSpec& g = require_grid(f, "apply_dephasing");
  if (g.modes != 1) throw UnsupportedError("apply_dephasing: single-mode grids only");
  if (!(gamma >= 0.0)) throw ConfigError("apply_dephasing: gamma must be nonnegative");
  if (k < 32) throw ConfigError("apply_dephasing: need at least 32 quadrature points");
  if (diag) diag->quadrature_points = k;
  if (gamma == 0.0) return f;

  std::vector<double> phi, w;
  const double pi = std::numbers::pi;
  if (5.0 * std::sqrt(gamma) > pi) {
    // Nearly uniform: wrapped normal density at equispaced angles.
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      const double a = 2.0 * pi * j / k;
      double dens = 0.0;
      for (int wrap = -50; wrap <= 50; ++wrap) {
        const double t = a + 2.0 * pi * wrap;
        dens += std::exp(-t * t / (2.0 * gamma));
      }
      phi.push_back(a);
      w.push_back(dens);
      total += dens;
    }
    for (double& x : w) x /= total;
  } else {
    const Quadrature q = gauss_hermite(k);
    for (int j = 0; j < k; ++j) {
      phi.push_back(q.nodes[j] * std::sqrt(2.0 * gamma));
      w.push_back(q.weights[j] / std::sqrt(pi));
    }
  }

  std::vector<double> acc(f.size(), 0.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  for (int j = 0; j < k; ++j) {
    if (w[j] < 1e-300) continue;
    Eigen::MatrixXd back(2, 2);
    back << std::cos(phi[j]), std::sin(phi[j]), -std::sin(phi[j]), std::cos(phi[j]);
    const auto rotated = affine_resample(f, back, zero, 1.0);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[j] * rotated[i];
  }
  SampledDistribution out = f.with_values(std::move(acc));
  check_leakage(f.total_integral(), out.total_integral(), "apply_dephasing", diag);
  return out;
}

const char* to_string(KernelClass c) {
  switch (c) {
    case KernelClass::DS:
      return "DS";
    case KernelClass::SDS:
      return "SDS";
    case KernelClass::AttenuatingWithFixedPoint:
      return "AttenuatingWithFixedPoint";
    case KernelClass::Other:
      return "Other";
  }
  return "?";
}

const char* to_string(DilationClass c) {
  switch (c) {
    case DilationClass::DS:
      return "DS";
    case DilationClass::SDS:
      return "SDS";
    case DilationClass::NotSDS:
      return "NotSDS";
  }
  return "?";
}

KernelClass classify_gaussian(const GaussianChannelSpec& ch) {
  if (ch.X.rows() != ch.X.cols() || ch.Y.rows() != ch.X.rows() || !is_symmetric_psd(ch.Y))
    return KernelClass::Other;
  const double det = std::abs(ch.X.determinant());
  if (std::abs(det - 1.0) <= 1e-9) return KernelClass::DS;
  if (det > 1.0) return KernelClass::SDS;
  return KernelClass::AttenuatingWithFixedPoint;
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return omega;
}

DilationVerdict classify_dilation(const SymplecticDilation& dil) {
  const int n = dil.system_modes;
  const int m = dil.environment_modes;
  const int total = n + m;
  if (n < 1 || m < 1 || dil.S.rows() != 2 * total || dil.S.cols() != 2 * total)
    throw ConfigError("classify_dilation: S must be 2(n+m) square");
  const Eigen::MatrixXd omega = symplectic_form(total);
  if ((dil.S.transpose() * omega * dil.S - omega).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericError("classify_dilation: S is not symplectic");

  const Eigen::MatrixXd T = dil.S.inverse();
  // Environment quadratures: x at n..n+m-1, p at total+n..total+n+m-1.
  std::vector<int> env;
  for (int j = 0; j < m; ++j) env.push_back(n + j);
  for (int j = 0; j < m; ++j) env.push_back(total + n + j);
  Eigen::MatrixXd tee(2 * m, 2 * m);
  for (int r = 0; r < 2 * m; ++r)
    for (int c = 0; c < 2 * m; ++c) tee(r, c) = T(env[r], env[c]);

  DilationVerdict v;
  v.det_tee = std::abs(tee.determinant());
  if (std::abs(v.det_tee - 1.0) <= 1e-9)
    v.cls = DilationClass::DS;
  else if (v.det_tee > 1.0)
    v.cls = DilationClass::SDS;
  else
    v.cls = DilationClass::NotSDS;
  return v;
}

SymplecticDilation dilation_for(const GaussianChannelSpec& ch) {
  ch.validate();
  if (ch.modes() != 1) throw UnsupportedError("dilation_for: single-mode channels only");
  const double tau = std::abs(ch.X.determinant());
  const Eigen::MatrixXd R = ch.X / std::sqrt(tau);
  if ((R.transpose() * R - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-9 ||
      R.determinant() < 0.0)
    throw UnsupportedError("dilation_for: X must be a scaled rotation");

  // Coupling on (x_s, x_e) and (p_s, p_e); index order x_s, x_e, p_s, p_e.
  Eigen::MatrixXd couple = Eigen::MatrixXd::Identity(4, 4);
  if (std::abs(tau - 1.0) > 1e-12) {
    if (tau < 1.0) {
      const double c = std::sqrt(tau), s = std::sqrt(1.0 - tau);
      couple << c, s, 0, 0, -s, c, 0, 0, 0, 0, c, s, 0, 0, -s, c;
    } else {
      const double c = std::sqrt(tau), s = std::sqrt(tau - 1.0);
      couple << c, s, 0, 0, s, c, 0, 0, 0, 0, c, -s, 0, 0, -s, c;
    }
  }
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(4, 4);
  rot(0, 0) = R(0, 0);
  rot(0, 2) = R(0, 1);
  rot(2, 0) = R(1, 0);
  rot(2, 2) = R(1, 1);

  SymplecticDilation dil;
  dil.S = rot * couple;
  dil.d = Eigen::VectorXd::Zero(4);
  dil.d(0) = ch.delta(0);
  dil.d(2) = ch.delta(1);
  return dil;
}

GaussianChannelSpec lon_to_gaussian(const Eigen::MatrixXcd& L) {
  const auto m = L.rows();
  if (m == 0 || L.cols() != m) throw ConfigError("lon_to_gaussian: L must be square");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L);
  if (svd.singularValues().maxCoeff() > 1.0 + 1e-9)
    throw ConfigError("lon_to_gaussian: singular value above 1");
  GaussianChannelSpec ch;
  ch.X.resize(2 * m, 2 * m);
  ch.X << L.real(), -L.imag(), L.imag(), L.real();
  ch.Y = Eigen::MatrixXd::Identity(2 * m, 2 * m) - ch.X * ch.X.transpose();
  ch.Y = 0.5 * (ch.Y + ch.Y.transpose());
  // Roundoff can leave eigenvalues of order -1e-16.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ch.Y);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  ch.Y = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  ch.delta = Eigen::VectorXd::Zero(2 * m);
  return ch;
}

namespace {

std::map<std::string, std::string> channel_args(const std::string& body, const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t i = 0;
  while (i < body.size()) {
    const auto eq = body.find('=', i);
    if (eq == std::string::npos) throw ParseError("channel: expected key=value in '" + text + "'", i);
    const std::string key = body.substr(i, eq - i);
    std::size_t j = eq + 1;
    int depth = 0;
    while (j < body.size() && (depth > 0 || body[j] != ',')) {
      if (body[j] == '[') ++depth;
      if (body[j] == ']') --depth;
      ++j;
    }
    kv[key] = body.substr(eq + 1, j - eq - 1);
    i = j + 1;
  }
  return kv;
}

double channel_number(const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::logic_error&) {
    throw ParseError("channel: bad number '" + v + "'", 0);
  }
}

std::vector<double> channel_list(const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ParseError("channel: expected [..] list, got '" + v + "'", 0);
  std::vector<double> out;
  std::size_t i = 1;
  while (i < v.size() - 1) {
    auto j = v.find(',', i);
    if (j == std::string::npos || j > v.size() - 1) j = v.size() - 1;
    out.push_back(channel_number(v.substr(i, j - i)));
    i = j + 1;
  }
  return out;
}

Eigen::MatrixXd square_matrix(const std::vector<double>& v) {
  const auto d = static_cast<long>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != static_cast<long>(v.size())) throw ParseError("channel: matrix is not square", 0);
  Eigen::MatrixXd m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) m(r, c) = v[static_cast<std::size_t>(r * d + c)];
  return m;
}

}  // namespace

ChannelSpec parse_channel(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("channel: expected kind:args in '" + raw + "'", 0);
  const std::string kind = text.substr(0, colon);
  auto kv = channel_args(text.substr(colon + 1), raw);
  auto need = [&](const char* key) {
    if (!kv.count(key)) throw ParseError(std::string("channel: missing '") + key + "'", colon + 1);
    return kv.at(key);
  };
  ChannelSpec out;
  if (kind == "plc") {
    out.gaussian = GaussianChannelSpec::pure_loss(channel_number(need("eta")));
  } else if (kind == "amp") {
    out.gaussian = GaussianChannelSpec::amplifier(channel_number(need("gain")));
  } else if (kind == "rot") {
    out.gaussian = GaussianChannelSpec::rotation(channel_number(need("theta")));
  } else if (kind == "disp") {
    out.gaussian = GaussianChannelSpec::displacement(channel_number(need("x")), channel_number(need("p")));
  } else if (kind == "dephase") {
    out.is_dephasing = true;
    out.gamma = channel_number(need("gamma"));
    if (!(out.gamma >= 0.0)) throw ConfigError("dephase: gamma must be nonnegative");
  } else if (kind == "gauss") {
    out.gaussian.X = square_matrix(channel_list(need("X")));
    const auto d = out.gaussian.X.rows();
    out.gaussian.Y = kv.count("Y") ? square_matrix(channel_list(kv.at("Y")))
                                   : Eigen::MatrixXd::Zero(d, d);
    out.gaussian.delta = Eigen::VectorXd::Zero(d);
    if (kv.count("delta")) {
      const auto v = channel_list(kv.at("delta"));
      if (static_cast<long>(v.size()) != d) throw ConfigError("channel: delta length mismatch");
      for (long i = 0; i < d; ++i) out.gaussian.delta(i) = v[static_cast<std::size_t>(i)];
    }
    out.gaussian.validate();
  } else {
    throw ParseError("channel: unknown kind '" + kind + "'", 0);
  }
  return out;
}

}  // namespace qmaj
