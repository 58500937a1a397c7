#include "qmaj/special.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qmaj/error.hpp"

namespace qmaj {

double laguerre(int n, double x) {
  if (n < 0) throw ConfigError("laguerre: negative order");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_function(int n, double y) {
  if (n < 0) throw ConfigError("hermite function: negative order");
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * y * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Quadrature gauss_hermite(int k) {
  if (k < 1) throw ConfigError("gauss-hermite: need at least one node");
  // Golub-Welsch: eigenpairs of the symmetric Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  q.nodes.resize(k);
  q.weights.resize(k);
  const double mass = std::sqrt(std::numbers::pi);
  for (int i = 0; i < k; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    q.weights[i] = mass * v0 * v0;
  }
  return q;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qmaj
