#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qmaj/measure_grid.hpp"
#include "qmaj/state_spec.hpp"

namespace qmaj {

// Gaussian kernel z -> X z + delta plus Gaussian noise. Matrices act on xxpp
// coordinates; Y is in vacuum units, so the added covariance is Y * hbar/2
// (Y = I adds one vacuum worth of noise in either convention).
struct GaussianChannelSpec {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  Eigen::VectorXd delta;

  int modes() const { return static_cast<int>(X.rows()) / 2; }
  void validate() const;

  static GaussianChannelSpec identity(int modes = 1);
  static GaussianChannelSpec pure_loss(double eta, int modes = 1);
  // Quantum-limited amplifier with gain G >= 1.
  static GaussianChannelSpec amplifier(double gain, int modes = 1);
  static GaussianChannelSpec rotation(double theta);
  static GaussianChannelSpec displacement(double x0, double p0);
};

struct ChannelDiagnostics {
  // |integral(out) - integral(in)|: mass pushed beyond the grid.
  double leakage = 0.0;
  int quadrature_points = 0;
};

// Leakage above 1e-3 raises NumericError. The output is not renormalized.
SampledDistribution apply_gaussian(const GaussianChannelSpec& ch, const SampledDistribution& f,
                                   Rep rep = Rep::Wigner, ChannelDiagnostics* diag = nullptr);

// Binomial photon-loss weights p_k, k = 0..n.
std::vector<double> pure_loss_fock(int n, double eta);

// Mixture of phase-space rotations with angular density of variance gamma
// (coherences m,n damped by exp(-gamma (m-n)^2 / 2)). Single mode; K >= 32.
SampledDistribution apply_dephasing(double gamma, const SampledDistribution& f, int k = 64,
                                    ChannelDiagnostics* diag = nullptr);

enum class KernelClass { DS, SDS, AttenuatingWithFixedPoint, Other };
enum class DilationClass { DS, SDS, NotSDS };

const char* to_string(KernelClass c);
const char* to_string(DilationClass c);

KernelClass classify_gaussian(const GaussianChannelSpec& ch);

// Symplectic S on system (n modes) + environment (m modes), xxpp ordering
// over all n + m modes with the system first.
struct SymplecticDilation {
  Eigen::MatrixXd S;
  Eigen::VectorXd d;
  int system_modes = 1;
  int environment_modes = 1;
};

struct DilationVerdict {
  DilationClass cls = DilationClass::DS;
  double det_tee = 1.0;  // |det (S^{-1})_EE|
};

DilationVerdict classify_dilation(const SymplecticDilation& dil);

// Single-mode dilation of X = sqrt(tau) R(theta): beamsplitter (tau < 1),
// two-mode squeezer (tau > 1) or rotation alongside an idle mode (tau = 1).
SymplecticDilation dilation_for(const GaussianChannelSpec& ch);

Eigen::MatrixXd symplectic_form(int modes);

// Passive linear-optics submatrix L (M x M, singular values <= 1) to kernel
// matrices: X = [[Re L, -Im L], [Im L, Re L]], Y = I - X X^T.
GaussianChannelSpec lon_to_gaussian(const Eigen::MatrixXcd& L);

// Channel mini-grammar: "plc:eta=0.7", "amp:gain=2", "rot:theta=0.3",
// "disp:x=1,p=0", "dephase:gamma=0.5" and
// "gauss:X=[a,b,c,d],Y=[...],delta=[x,p]" with row-major matrix literals.
struct ChannelSpec {
  bool is_dephasing = false;
  double gamma = 0.0;
  GaussianChannelSpec gaussian;
};

ChannelSpec parse_channel(const std::string& text);

}  // namespace qmaj
