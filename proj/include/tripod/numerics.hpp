#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "tripod/error.hpp"

namespace tripod {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Bessel J0

namespace detail {

template <typename Scalar>
Scalar bessel_j0_series(Scalar x) {
  const Scalar q = -x * x / Scalar(4);
  Scalar sum = 1;
  Scalar term = 1;
  for (int k = 1; k < 200; ++k) {
    term *= q / Scalar(k * k);
    sum += term;
    if (std::abs(term) < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-2)) break;
  }
  return sum;
}

// Hankel expansion, truncated at the smallest term.
template <typename Scalar>
Scalar bessel_j0_asymptotic(Scalar x) {
  Scalar p = 1;
  Scalar q = 0;
  Scalar coeff = 1;  // a_k / x^k
  Scalar previous = 1;
  for (int k = 1; k < 200; ++k) {
    const Scalar next = coeff * (-Scalar((2 * k - 1) * (2 * k - 1))) / (Scalar(8 * k) * x);
    if (std::abs(next) > std::abs(previous)) break;
    coeff = next;
    previous = next;
    const Scalar sign = ((k / 2) % 2 == 0) ? Scalar(1) : Scalar(-1);
    if (k % 2 == 0) {
      p += sign * coeff;
    } else {
      q += sign * coeff;
    }
    if (std::abs(coeff) < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-2)) break;
  }
  const Scalar chi = x - std::numbers::pi_v<Scalar> / Scalar(4);
  return std::sqrt(Scalar(2) / (std::numbers::pi_v<Scalar> * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Zero-order Bessel function of the first kind for x >= 0.
///
/// Power series up to x = 12, Hankel asymptotic expansion beyond. Both
/// branches agree to ~1e-12 at the crossover; absolute error stays below
/// 1e-10 on [0, 200].
template <typename Scalar>
Scalar bessel_j0(Scalar x) {
  if (!std::isfinite(x) || x < Scalar(0)) {
    throw DomainError("bessel_j0: argument must be finite and non-negative, got " +
                      std::to_string(static_cast<double>(x)));
  }
  constexpr Scalar crossover = 12;
  return x <= crossover ? detail::bessel_j0_series(x) : detail::bessel_j0_asymptotic(x);
}

// ---------------------------------------------------------------------------
// Quadrature

template <typename Scalar>
struct QuadratureGrid {
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;
  Scalar a = 0;
  Scalar b = 0;

  Eigen::Index size() const { return nodes.size(); }

  /// Weighted sum of samples taken at the nodes.
  Scalar integrate(const VectorX<Scalar>& values) const {
    Scalar sum = 0;
    for (Eigen::Index k = 0; k < nodes.size(); ++k) sum += weights[k] * values[k];
    return sum;
  }

  template <typename F>
    requires(std::invocable<F&, Scalar> &&
             !std::is_base_of_v<Eigen::EigenBase<std::decay_t<F>>, std::decay_t<F>>)
  Scalar integrate(F&& f) const {
    Scalar sum = 0;
    for (Eigen::Index k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

using Grid = QuadratureGrid<double>;

/// n-point Gauss-Legendre rule on [a, b], nodes ascending.
template <typename Scalar = double>
QuadratureGrid<Scalar> gauss_legendre(int n, Scalar a, Scalar b) {
  if (n < 1) throw ArgumentError("gauss_legendre: n must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw ArgumentError("gauss_legendre: need finite a < b");
  }
  QuadratureGrid<Scalar> grid;
  grid.a = a;
  grid.b = b;
  grid.nodes.resize(n);
  grid.weights.resize(n);

  const Scalar half_length = (b - a) / Scalar(2);
  const Scalar midpoint = (a + b) / Scalar(2);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) /
                        (Scalar(n) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1;
      Scalar p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
      const Scalar dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // Recompute the derivative at the converged node.
    {
      Scalar p0 = 1;
      Scalar p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? Scalar(1) : Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
    }
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    // x decreases with i: place -x at the front and +x at the back.
    grid.nodes[i] = midpoint - half_length * x;
    grid.nodes[n - 1 - i] = midpoint + half_length * x;
    grid.weights[i] = half_length * w;
    grid.weights[n - 1 - i] = half_length * w;
  }
  if (n % 2 == 1) grid.nodes[n / 2] = midpoint;
  return grid;
}

/// Barycentric polynomial interpolant through samples on a Gauss-Legendre grid.
template <typename Scalar>
class LegendreInterpolant {
 public:
  LegendreInterpolant(const QuadratureGrid<Scalar>& grid, VectorX<Scalar> values)
      : nodes_(grid.nodes), values_(std::move(values)), weights_(grid.size()) {
    if (values_.size() != grid.size()) {
      throw ArgumentError("LegendreInterpolant: value count does not match grid size");
    }
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      const Scalar r = (grid.nodes[j] - grid.a) * (grid.b - grid.nodes[j]) * grid.weights[j];
      weights_[j] = (j % 2 == 0 ? Scalar(1) : Scalar(-1)) * std::sqrt(r);
    }
  }

  Scalar operator()(Scalar x) const {
    Scalar numerator = 0;
    Scalar denominator = 0;
    for (Eigen::Index j = 0; j < nodes_.size(); ++j) {
      const Scalar diff = x - nodes_[j];
      if (diff == Scalar(0)) return values_[j];
      const Scalar c = weights_[j] / diff;
      numerator += c * values_[j];
      denominator += c;
    }
    return numerator / denominator;
  }

 private:
  VectorX<Scalar> nodes_;
  VectorX<Scalar> values_;
  VectorX<Scalar> weights_;
};

// ---------------------------------------------------------------------------
// Symmetric eigensolver

template <typename Scalar>
struct SymmetricEigenResult {
  VectorX<Scalar> eigenvalues;   // descending
  MatrixX<Scalar> eigenvectors;  // column k pairs with eigenvalue k
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// The input must be symmetric to 1e-10 relative to its largest entry; it is
/// symmetrized before rotation. Eigenpairs are returned in descending order.
template <typename Derived>
SymmetricEigenResult<typename Derived::Scalar> symmetric_eig(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw ArgumentError("symmetric_eig: matrix must be square");
  if (n > 2000) throw ArgumentError("symmetric_eig: dimension above 2000");

  SymmetricEigenResult<Scalar> result;
  if (n == 0) return result;

  const Scalar max_abs = input.cwiseAbs().maxCoeff();
  if (!std::isfinite(max_abs)) throw ArgumentError("symmetric_eig: non-finite entries");
  const Scalar asym = (input - input.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-10) * max_abs) {
    throw ArgumentError("symmetric_eig: matrix is not symmetric (max |A - A^T| = " +
                        std::to_string(static_cast<double>(asym)) + ")");
  }

  MatrixX<Scalar> a = (input + input.transpose()) / Scalar(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar frobenius = a.norm();
  const Scalar stop = eps * frobenius;
  const Scalar skip = Scalar(0.1) * eps * frobenius / Scalar(n);

  constexpr int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    Scalar off = 0;
    for (Eigen::Index q = 1; q < n; ++q) off += a.col(q).head(q).squaredNorm();
    if (std::sqrt(off) <= stop) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= skip) continue;
        Eigen::JacobiRotation<Scalar> rotation;
        rotation.makeJacobi(a, p, q);
        a.applyOnTheRight(p, q, rotation);
        a.applyOnTheLeft(p, q, rotation.adjoint());
        v.applyOnTheRight(p, q, rotation);
        a(p, q) = 0;
        a(q, p) = 0;
      }
    }
  }
  if (sweep == max_sweeps) throw NumericalError("symmetric_eig: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    result.eigenvalues[k] = a(order[k], order[k]);
    result.eigenvectors.col(k) = v.col(order[k]);
  }
  return result;
}

}  // namespace tripod
