#pragma once

#include <complex>

#include <Eigen/Dense>

#include "tripod/numerics.hpp"

namespace tripod {

/// Dimensionless memory geometry and quadrature resolution.
///
/// Time is measured in units of 1/Omega, length in units of Omega/(2 g^2 N).
struct KernelConfig {
  double t_w = 5.5;  ///< write duration
  double l = 10.0;   ///< medium length
  int n_t = 256;
  int n_z = 256;
  int n_inner = 128;  ///< Gauss-Legendre points for the convolution integral per cell

  void validate() const;
};

/// Spin-wave response G_ab(t, z) sampled on (t_grid x z_grid).
///
/// Reading uses the same kernel (G_ba = G_ab for backward retrieval).
struct WriteKernel {
  KernelConfig config;
  Grid t_grid;
  Grid z_grid;
  Eigen::MatrixXd values;  // rows: t nodes, cols: z nodes
};

struct FullCycleKernel {
  Grid t_grid;
  Eigen::MatrixXd values;
};

struct SchmidtBasis {
  Grid t_grid;
  Grid z_grid;
  double t_w = 0;
  double l = 0;
  Eigen::VectorXd lambdas;  ///< descending, lambda_i = s_i^2
  Eigen::MatrixXd phi;      ///< column i: temporal mode on t_grid
  Eigen::MatrixXd g;        ///< column i: spatial mode on z_grid
  Eigen::VectorXd mu;       ///< mu_i = sqrt(4 lambda_i)
  Eigen::Index n_modes = 0;
};

constexpr double kDefaultRankTolerance = 1e-6;

/// G_ab(t, z) = int_0^t cos(t - 2t') J0(sqrt(z t')) J0(sqrt(z (t - t'))) dt'.
///
/// The Gauss-Legendre nodes on [0, t] are symmetric under t' -> t - t', so
/// each Bessel value is computed once and reused for its mirror node.
double write_kernel_cell(double t, double z, int n_inner);

/// Same integral evaluated from the literal complex integrand
/// e^{-it'} J0(sqrt(z t')) e^{i(t - t')} J0(sqrt(z (t - t'))), without the
/// mirror-node shortcut. The imaginary part vanishes analytically.
std::complex<double> write_kernel_cell_literal(double t, double z, int n_inner);

WriteKernel compute_write_kernel(const KernelConfig& config);

/// G(t_i, t_j) = 1/2 sum_k w_k G_ab(t_i, z_k) G_ab(t_j, z_k); the upper
/// triangle is summed once and mirrored, so the result is exactly symmetric.
FullCycleKernel compute_full_cycle(const WriteKernel& kernel);

/// Independent route to the full-cycle kernel: every (t, t') cell pairs the
/// write kernel with a read kernel evaluated from the literal complex
/// integrand at a different inner resolution. No symmetry is imposed, so
/// max |G - G^T| measures how well G_ab = G_ba holds numerically.
FullCycleKernel full_cycle_validation(const KernelConfig& config, int n_inner_read);

/// Nystrom decomposition of the full-cycle kernel, retaining modes whose
/// eigenvalue sqrt(lambda) is at least rank_tol times the largest one.
SchmidtBasis schmidt_decompose(const FullCycleKernel& full_cycle, const WriteKernel& kernel,
                               double rank_tol = kDefaultRankTolerance);

/// phi_i(omega = 0) = T_W^{-1/2} int_0^{T_W} phi_i(t) dt.
double phi_zero_frequency(const SchmidtBasis& basis, Eigen::Index i);

/// sum_i sqrt(lambda_i) phi_i(t) phi_i(t') over the retained modes.
Eigen::MatrixXd reconstruct_full_cycle(const SchmidtBasis& basis);

LegendreInterpolant<double> temporal_mode(const SchmidtBasis& basis, Eigen::Index i);
LegendreInterpolant<double> spatial_mode(const SchmidtBasis& basis, Eigen::Index i);

/// Largest |Im G_ab| over the kernel grid from the literal complex integrand.
double max_imaginary_residual(const WriteKernel& kernel);

}  // namespace tripod
