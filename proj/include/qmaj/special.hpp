#pragma once

#include <vector>

namespace qmaj {

// L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

// Orthonormal Hermite function phi_n(y) = H_n(y) e^{-y^2/2} / sqrt(2^n n! sqrt(pi)),
// evaluated by the normalized recurrence (no factorials).
double hermite_function(int n, double y);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// K-point Gauss-Hermite rule for weight e^{-x^2} (weights sum to sqrt(pi)).
Quadrature gauss_hermite(int k);

double binomial(int n, int k);

}  // namespace qmaj
