#include "tripod/kernel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tripod/parallel.hpp"

namespace tripod {

namespace {

const Grid& reference_rule(int n) {
  thread_local int cached_n = 0;
  thread_local Grid cached;
  if (cached_n != n) {
    cached = gauss_legendre(n, -1.0, 1.0);
    cached_n = n;
  }
  return cached;
}

void check_mode_index(const SchmidtBasis& basis, Eigen::Index i) {
  if (i < 0 || i >= basis.n_modes) {
    throw ArgumentError("mode index " + std::to_string(i) + " out of range (n_modes = " +
                        std::to_string(basis.n_modes) + ")");
  }
}

}  // namespace

void KernelConfig::validate() const {
  if (!std::isfinite(t_w) || t_w <= 0) throw ArgumentError("t_w must be finite and positive");
  if (!std::isfinite(l) || l <= 0) throw ArgumentError("l must be finite and positive");
  if (n_t < 8) throw ArgumentError("n_t must be >= 8");
  if (n_z < 8) throw ArgumentError("n_z must be >= 8");
  if (n_inner < 8) throw ArgumentError("n_inner must be >= 8");
}

double write_kernel_cell(double t, double z, int n_inner) {
  if (t <= 0) return 0.0;
  const Grid& rule = reference_rule(n_inner);
  const double half = 0.5 * t;
  std::vector<double> bessel(n_inner);
  for (int k = 0; k < n_inner; ++k) {
    const double tp = half * (1.0 + rule.nodes[k]);
    bessel[k] = bessel_j0(std::sqrt(z * tp));
  }
  double sum = 0;
  for (int k = 0; k < n_inner; ++k) {
    const double tp = half * (1.0 + rule.nodes[k]);
    sum += rule.weights[k] * std::cos(t - 2.0 * tp) * bessel[k] * bessel[n_inner - 1 - k];
  }
  return half * sum;
}

std::complex<double> write_kernel_cell_literal(double t, double z, int n_inner) {
  if (t <= 0) return {0.0, 0.0};
  const Grid& rule = reference_rule(n_inner);
  const double half = 0.5 * t;
  std::complex<double> sum{0.0, 0.0};
  for (int k = 0; k < n_inner; ++k) {
    const double tp = half * (1.0 + rule.nodes[k]);
    const std::complex<double> absorb = std::polar(1.0, -tp) * bessel_j0(std::sqrt(z * tp));
    const std::complex<double> emit =
        std::polar(1.0, t - tp) * bessel_j0(std::sqrt(std::max(0.0, z * (t - tp))));
    sum += rule.weights[k] * absorb * emit;
  }
  return half * sum;
}

WriteKernel compute_write_kernel(const KernelConfig& config) {
  config.validate();
  WriteKernel kernel;
  kernel.config = config;
  kernel.t_grid = gauss_legendre(config.n_t, 0.0, config.t_w);
  kernel.z_grid = gauss_legendre(config.n_z, 0.0, config.l);
  kernel.values.resize(config.n_t, config.n_z);

  parallel_for(config.n_t, [&](long i) {
    for (Eigen::Index j = 0; j < config.n_z; ++j) {
      kernel.values(i, j) =
          write_kernel_cell(kernel.t_grid.nodes[i], kernel.z_grid.nodes[j], config.n_inner);
    }
  });
  return kernel;
}

FullCycleKernel compute_full_cycle(const WriteKernel& kernel) {
  const Eigen::Index n_t = kernel.values.rows();
  const Eigen::MatrixXd scaled =
      kernel.values * kernel.z_grid.weights.cwiseSqrt().asDiagonal();

  FullCycleKernel full;
  full.t_grid = kernel.t_grid;
  full.values.resize(n_t, n_t);
  parallel_for(n_t, [&](long i) {
    for (Eigen::Index j = i; j < n_t; ++j) {
      full.values(i, j) = 0.5 * scaled.row(i).dot(scaled.row(j));
    }
  });
  for (Eigen::Index i = 0; i < n_t; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) full.values(i, j) = full.values(j, i);
  }
  return full;
}

FullCycleKernel full_cycle_validation(const KernelConfig& config, int n_inner_read) {
  config.validate();
  if (n_inner_read < 8) throw ArgumentError("n_inner_read must be >= 8");
  const Grid t_grid = gauss_legendre(config.n_t, 0.0, config.t_w);
  const Grid z_grid = gauss_legendre(config.n_z, 0.0, config.l);

  Eigen::MatrixXd write(config.n_t, config.n_z);
  Eigen::MatrixXd read(config.n_t, config.n_z);
  parallel_for(config.n_t, [&](long i) {
    for (Eigen::Index k = 0; k < config.n_z; ++k) {
      write(i, k) = write_kernel_cell(t_grid.nodes[i], z_grid.nodes[k], config.n_inner);
      read(i, k) = write_kernel_cell_literal(t_grid.nodes[i], z_grid.nodes[k], n_inner_read).real();
    }
  });

  FullCycleKernel full;
  full.t_grid = t_grid;
  full.values.resize(config.n_t, config.n_t);
  parallel_for(config.n_t, [&](long i) {
    for (Eigen::Index j = 0; j < config.n_t; ++j) {
      double sum = 0;
      for (Eigen::Index k = 0; k < config.n_z; ++k) {
        sum += z_grid.weights[k] * write(i, k) * read(j, k);
      }
      full.values(i, j) = 0.5 * sum;
    }
  });
  return full;
}

SchmidtBasis schmidt_decompose(const FullCycleKernel& full_cycle, const WriteKernel& kernel,
                               double rank_tol) {
  const Eigen::Index n_t = full_cycle.values.rows();
  if (full_cycle.t_grid.size() != kernel.t_grid.size() ||
      (full_cycle.t_grid.nodes - kernel.t_grid.nodes).cwiseAbs().maxCoeff() > 0) {
    throw ArgumentError("schmidt_decompose: full-cycle and write kernels use different t grids");
  }
  if (!(rank_tol > 0) || rank_tol >= 1) throw ArgumentError("rank_tol must lie in (0, 1)");

  const Eigen::VectorXd sqrt_w = full_cycle.t_grid.weights.cwiseSqrt();
  Eigen::MatrixXd nystrom(n_t, n_t);
  for (Eigen::Index i = 0; i < n_t; ++i) {
    for (Eigen::Index j = i; j < n_t; ++j) {
      nystrom(i, j) = sqrt_w[i] * full_cycle.values(i, j) * sqrt_w[j];
      nystrom(j, i) = nystrom(i, j);
    }
  }
  const auto eig = symmetric_eig(nystrom);

  const double leading = eig.eigenvalues[0];
  if (!(leading > 0)) {
    throw DegenerateKernelError("schmidt_decompose: kernel has no positive eigenvalue");
  }
  Eigen::Index retained = 0;
  while (retained < n_t && eig.eigenvalues[retained] > 0 &&
         eig.eigenvalues[retained] >= rank_tol * leading) {
    ++retained;
  }

  SchmidtBasis basis;
  basis.t_grid = kernel.t_grid;
  basis.z_grid = kernel.z_grid;
  basis.t_w = kernel.config.t_w;
  basis.l = kernel.config.l;
  basis.n_modes = retained;
  basis.lambdas.resize(retained);
  basis.mu.resize(retained);
  basis.phi.resize(n_t, retained);
  basis.g.resize(kernel.z_grid.size(), retained);

  for (Eigen::Index i = 0; i < retained; ++i) {
    const double s = eig.eigenvalues[i];
    const double lambda = s * s;
    if (lambda > 1.0 + 1e-6) {
      throw NumericalError("schmidt_decompose: lambda_" + std::to_string(i) + " = " +
                           std::to_string(lambda) + " exceeds unity (quadrature failure)");
    }
    basis.lambdas[i] = lambda;
    basis.mu[i] = std::sqrt(4.0 * lambda);

    Eigen::VectorXd phi = eig.eigenvectors.col(i).cwiseQuotient(sqrt_w);
    if (phi[0] < 0) phi = -phi;
    basis.phi.col(i) = phi;

    const Eigen::VectorXd weighted = full_cycle.t_grid.weights.cwiseProduct(phi);
    basis.g.col(i) = kernel.values.transpose() * weighted / std::sqrt(basis.mu[i]);
  }
  return basis;
}

double phi_zero_frequency(const SchmidtBasis& basis, Eigen::Index i) {
  check_mode_index(basis, i);
  return basis.t_grid.integrate(Eigen::VectorXd(basis.phi.col(i))) / std::sqrt(basis.t_w);
}

Eigen::MatrixXd reconstruct_full_cycle(const SchmidtBasis& basis) {
  return basis.phi * basis.lambdas.cwiseSqrt().asDiagonal() * basis.phi.transpose();
}

LegendreInterpolant<double> temporal_mode(const SchmidtBasis& basis, Eigen::Index i) {
  check_mode_index(basis, i);
  return {basis.t_grid, basis.phi.col(i)};
}

LegendreInterpolant<double> spatial_mode(const SchmidtBasis& basis, Eigen::Index i) {
  check_mode_index(basis, i);
  return {basis.z_grid, basis.g.col(i)};
}

double max_imaginary_residual(const WriteKernel& kernel) {
  std::vector<double> row_max(kernel.t_grid.size(), 0.0);
  parallel_for(kernel.t_grid.size(), [&](long i) {
    for (Eigen::Index j = 0; j < kernel.z_grid.size(); ++j) {
      const auto value = write_kernel_cell_literal(kernel.t_grid.nodes[i], kernel.z_grid.nodes[j],
                                                   kernel.config.n_inner);
      row_max[i] = std::max(row_max[i], std::abs(value.imag()));
    }
  });
  double worst = 0;
  for (double v : row_max) worst = std::max(worst, v);
  return worst;
}

}  // namespace tripod
