#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "qmaj/measure_grid.hpp"
#include "qmaj/state_spec.hpp"

namespace qmaj {

// Wigner or Husimi function of `spec` at the cell centers of `grid`. The
// grid's hbar selects the coordinate convention and its mode count must match
// the state. Throws UnsupportedError for combinations without a rendering
// (Husimi of cubic phase states), SemanticError for invalid parameters.
SampledDistribution render(const StateSpec& spec, const GridSpec& grid, Rep rep = Rep::Wigner);

struct WavefunctionWigner {
  SampledDistribution wigner;
  double imaginary_residue = 0.0;  // max |Im W| before the real part was kept
};

// W(x, p) = (1/(pi hbar)) sum_m h psi*(x+mh) psi(x-mh) e^{2ipmh/hbar} on a
// single-mode grid, psi sampled at the axis centers. Requires a normalized psi
// and h <= pi hbar / (2L) so that the p range is not aliased.
WavefunctionWigner wigner_from_wavefunction(std::span<const std::complex<double>> psi,
                                            const GridSpec& grid);

// Fock and cubic phase wavefunctions at the grid's axis centers.
std::vector<std::complex<double>> fock_wavefunction(int n, const GridSpec& grid);
std::vector<std::complex<double>> cubic_wavefunction(double g, double s, double p, const GridSpec& grid);

// Strictly positive reference q. Thermal states with negative nbar render as
// the unnormalized Gaussian exp(-2 r^2 / (1 + 2 nbar)) (hbar = 1/2 units;
// Husimi: exp(-r^2 / (1 + nbar))), flagged non-integrable when it grows.
ReferenceDistribution reference(const StateSpec& spec, const GridSpec& grid, Rep rep = Rep::Wigner);
ReferenceDistribution reference(std::string_view text, const GridSpec& grid, Rep rep = Rep::Wigner);

// True when the state is invariant under phase-space rotations of each mode.
bool rotation_invariant(const StateSpec& spec);

}  // namespace qmaj
