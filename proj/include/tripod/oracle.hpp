#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tripod/kernel.hpp"
#include "tripod/protocol.hpp"

namespace tripod {

/// Uniform (t, z) mesh for direct integration of the dimensionless
/// light-matter equations
///   d_z a = -c/sqrt2,  d_t c = a/sqrt2 + w1 b1 + w2 b2,  d_t b_k = -w_k c.
struct PdeGrid {
  int n_t = 512;
  int n_z = 512;
  double t_w = 5.5;
  double l = 10.0;

  double dt() const { return t_w / n_t; }
  double dz() const { return l / n_z; }
  Eigen::VectorXd t_nodes() const;  ///< n_t + 1 points including both ends
  Eigen::VectorXd z_nodes() const;
  void validate() const;
};

/// Field amplitudes on the mesh; rows index t, columns index z.
struct FieldState {
  Eigen::MatrixXd a;
  Eigen::MatrixXd c;
  Eigen::MatrixXd b1;
  Eigen::MatrixXd b2;
};

enum class Retrieval {
  Backward,  ///< stored wave read with its spatial profile inverted (z -> L - z)
  Forward,
};

/// (w1, w2) for a driving configuration at unit total Rabi norm.
std::pair<double, double> drive_weights(DrivingConfig cfg);

/// Amplitude of the spin wave addressed by cfg, i.e. w1 b1 + w2 b2.
Eigen::MatrixXd addressed_wave(const FieldState& field, DrivingConfig cfg);

/// Box scheme: trapezoidal in both t and z, each mesh node solved
/// implicitly from its (t - dt) and (z - dz) neighbours. a(t, 0) = a_in(t);
/// at t = 0, c = 0 and the addressed wave equals b_init(z).
FieldState integrate_fields(const PdeGrid& grid, const Eigen::VectorXd& a_in,
                            const Eigen::VectorXd& b_init, DrivingConfig cfg);

/// Write stage: spin waves start empty. a_in is sampled on grid.t_nodes().
FieldState integrate_write(const PdeGrid& grid, const Eigen::VectorXd& a_in, DrivingConfig cfg);

/// Read stage: returns a(t, L) for a stored wave b_init sampled on grid.z_nodes().
Eigen::VectorXd integrate_read(const PdeGrid& grid, const Eigen::VectorXd& b_init,
                               DrivingConfig cfg, Retrieval direction = Retrieval::Backward);

/// a_in(tau) = phi_i(T_W - tau) on grid.t_nodes(): excites Schmidt mode i alone.
Eigen::VectorXd mode_input_envelope(const PdeGrid& grid, const SchmidtBasis& basis, Eigen::Index i);

/// Relative L2 distance with trapezoidal weights on a uniform mesh of step h.
double relative_l2(const Eigen::VectorXd& value, const Eigen::VectorXd& reference, double h);

/// int |a(t,0)|^2 dt - int |a(t,L)|^2 dt - int (|b1|^2 + |b2|^2 + |c|^2)(T_W, z) dz,
/// relative to the injected flux. Zero for the exact lossless dynamics.
double excitation_balance(const PdeGrid& grid, const FieldState& field);

struct OracleCase {
  std::string name;
  double rel_l2_error = 0;     ///< at the requested grid
  double coarse_error = 0;     ///< at half resolution
  double order = 0;            ///< log2(coarse_error / rel_l2_error)
};

struct DiscrepancyReport {
  PdeGrid grid;
  Retrieval retrieval = Retrieval::Backward;
  double lambda = 0;  ///< leading eigenvalue used in the predictions
  std::vector<OracleCase> cases;  ///< write, read, full_cycle
  double excitation_balance = 0;  ///< write run at the requested grid
  double max_abs_b_minus = 0;     ///< b_- under SymmetricPlus driving
};

/// Integrates the leading Schmidt mode through write, read and the full
/// cycle and compares with the kernel predictions
///   b_+(T_W, z) = -lambda^{1/4} g_1(z),  a_out = -lambda^{1/4} phi_1(t),
///   full cycle a_out = sqrt(lambda) phi_1(t).
/// Forward retrieval is offered for exploration; the kernel predictions
/// assume the backward convention.
DiscrepancyReport compare_with_kernel(const PdeGrid& grid, const SchmidtBasis& basis,
                                      const WriteKernel& kernel,
                                      Retrieval direction = Retrieval::Backward);

}  // namespace tripod
