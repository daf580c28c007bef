#include "tripod/oracle.hpp"

#include <cmath>
#include <string>

#include "tripod/error.hpp"

namespace tripod {

namespace {

constexpr double kGrowthLimit = 1e3;

double trapezoid_norm_sq(const Eigen::VectorXd& v, double h) {
  const Eigen::Index n = v.size();
  double sum = 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
  for (Eigen::Index k = 1; k + 1 < n; ++k) sum += v[k] * v[k];
  return h * sum;
}

bool same_geometry(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

}  // namespace

Eigen::VectorXd PdeGrid::t_nodes() const { return Eigen::VectorXd::LinSpaced(n_t + 1, 0.0, t_w); }
Eigen::VectorXd PdeGrid::z_nodes() const { return Eigen::VectorXd::LinSpaced(n_z + 1, 0.0, l); }

void PdeGrid::validate() const {
  if (n_t < 2 || n_z < 2) throw ArgumentError("PdeGrid: need at least two steps per axis");
  if (!std::isfinite(t_w) || t_w <= 0 || !std::isfinite(l) || l <= 0) {
    throw ArgumentError("PdeGrid: t_w and l must be finite and positive");
  }
}

std::pair<double, double> drive_weights(DrivingConfig cfg) {
  const double h = std::sqrt(0.5);
  switch (cfg) {
    case DrivingConfig::Omega1Only: return {1.0, 0.0};
    case DrivingConfig::Omega2Only: return {0.0, 1.0};
    case DrivingConfig::SymmetricPlus: return {h, h};
    case DrivingConfig::SymmetricMinus: return {h, -h};
  }
  return {1.0, 0.0};
}

Eigen::MatrixXd addressed_wave(const FieldState& field, DrivingConfig cfg) {
  const auto [w1, w2] = drive_weights(cfg);
  return w1 * field.b1 + w2 * field.b2;
}

FieldState integrate_fields(const PdeGrid& grid, const Eigen::VectorXd& a_in,
                            const Eigen::VectorXd& b_init, DrivingConfig cfg) {
  grid.validate();
  const int nt = grid.n_t;
  const int nz = grid.n_z;
  if (a_in.size() != nt + 1) throw ArgumentError("integrate: a_in must have n_t + 1 samples");
  if (b_init.size() != nz + 1) throw ArgumentError("integrate: b_init must have n_z + 1 samples");

  const auto [w1, w2] = drive_weights(cfg);
  const double coupling = std::sqrt(0.5);
  const double alpha = grid.dz() * coupling / 2.0;  // trapezoid weight along z
  const double beta = grid.dt() / 2.0;              // trapezoid weight along t
  const double drive_sq = w1 * w1 + w2 * w2;

  FieldState f;
  f.a = Eigen::MatrixXd::Zero(nt + 1, nz + 1);
  f.c = Eigen::MatrixXd::Zero(nt + 1, nz + 1);
  f.b1 = Eigen::MatrixXd::Zero(nt + 1, nz + 1);
  f.b2 = Eigen::MatrixXd::Zero(nt + 1, nz + 1);

  f.a.col(0) = a_in;
  f.a.row(0).setConstant(a_in[0]);  // c(0, z) = 0 keeps a constant along z
  f.b1.row(0) = w1 * b_init.transpose();
  f.b2.row(0) = w2 * b_init.transpose();

  for (int j = 0; j <= nz; ++j) {
    for (int n = 1; n <= nt; ++n) {
      // a = a0 - zeta c, b_k = bk0 - beta w_k c; on the entrance face a is given.
      double a0;
      double zeta;
      if (j == 0) {
        a0 = f.a(n, 0);
        zeta = 0.0;
      } else {
        a0 = f.a(n, j - 1) - alpha * f.c(n, j - 1);
        zeta = alpha;
      }
      const double b10 = f.b1(n - 1, j) - beta * w1 * f.c(n - 1, j);
      const double b20 = f.b2(n - 1, j) - beta * w2 * f.c(n - 1, j);
      const double rhs = f.c(n - 1, j) +
                         beta * (coupling * (f.a(n - 1, j) + a0) + w1 * (f.b1(n - 1, j) + b10) +
                                 w2 * (f.b2(n - 1, j) + b20));
      const double c = rhs / (1.0 + beta * zeta * coupling + beta * beta * drive_sq);
      f.c(n, j) = c;
      f.a(n, j) = a0 - zeta * c;
      f.b1(n, j) = b10 - beta * w1 * c;
      f.b2(n, j) = b20 - beta * w2 * c;
    }
  }

  const double input_scale = std::max(a_in.cwiseAbs().maxCoeff(), b_init.cwiseAbs().maxCoeff());
  const double field_scale = std::max({f.a.cwiseAbs().maxCoeff(), f.c.cwiseAbs().maxCoeff(),
                                       f.b1.cwiseAbs().maxCoeff(), f.b2.cwiseAbs().maxCoeff()});
  if (!std::isfinite(field_scale) || field_scale > kGrowthLimit * input_scale) {
    throw NumericalError("integrate: unstable growth, reduce the step sizes");
  }
  return f;
}

FieldState integrate_write(const PdeGrid& grid, const Eigen::VectorXd& a_in, DrivingConfig cfg) {
  return integrate_fields(grid, a_in, Eigen::VectorXd::Zero(grid.n_z + 1), cfg);
}

Eigen::VectorXd integrate_read(const PdeGrid& grid, const Eigen::VectorXd& b_init,
                               DrivingConfig cfg, Retrieval direction) {
  if (b_init.size() != grid.n_z + 1) throw ArgumentError("integrate_read: b_init must have n_z + 1 samples");
  const Eigen::VectorXd stored = direction == Retrieval::Backward ? Eigen::VectorXd(b_init.reverse())
                                                                   : b_init;
  const FieldState f = integrate_fields(grid, Eigen::VectorXd::Zero(grid.n_t + 1), stored, cfg);
  return f.a.col(grid.n_z);
}

Eigen::VectorXd mode_input_envelope(const PdeGrid& grid, const SchmidtBasis& basis, Eigen::Index i) {
  // The write map projects a_in(T_W - t) onto phi_i(t).
  const auto phi = temporal_mode(basis, i);
  const Eigen::VectorXd t = grid.t_nodes();
  Eigen::VectorXd a_in(t.size());
  for (Eigen::Index n = 0; n < t.size(); ++n) a_in[n] = phi(grid.t_w - t[n]);
  return a_in;
}

double relative_l2(const Eigen::VectorXd& value, const Eigen::VectorXd& reference, double h) {
  if (value.size() != reference.size() || value.size() < 2) {
    throw ArgumentError("relative_l2: size mismatch");
  }
  const double ref = trapezoid_norm_sq(reference, h);
  const double diff = trapezoid_norm_sq(value - reference, h);
  if (ref == 0) return diff == 0 ? 0.0 : std::sqrt(diff);
  return std::sqrt(diff / ref);
}

double excitation_balance(const PdeGrid& grid, const FieldState& field) {
  const double injected = trapezoid_norm_sq(field.a.col(0), grid.dt());
  const double transmitted = trapezoid_norm_sq(field.a.col(grid.n_z), grid.dt());
  const Eigen::VectorXd b1 = field.b1.row(grid.n_t).transpose();
  const Eigen::VectorXd b2 = field.b2.row(grid.n_t).transpose();
  const Eigen::VectorXd c = field.c.row(grid.n_t).transpose();
  const double stored = trapezoid_norm_sq(b1, grid.dz()) + trapezoid_norm_sq(b2, grid.dz()) +
                        trapezoid_norm_sq(c, grid.dz());
  if (injected == 0) return 0.0;
  return (injected - transmitted - stored) / injected;
}

namespace {

struct CycleErrors {
  double write = 0;
  double read = 0;
  double full_cycle = 0;
  double balance = 0;
  double b_minus = 0;
};

CycleErrors run_cycle(const PdeGrid& grid, const SchmidtBasis& basis, Retrieval direction) {
  const auto phi = temporal_mode(basis, 0);
  const auto g = spatial_mode(basis, 0);
  const double quarter = std::pow(basis.lambdas[0], 0.25);
  const Eigen::VectorXd t = grid.t_nodes();
  const Eigen::VectorXd z = grid.z_nodes();

  const Eigen::VectorXd a_in = mode_input_envelope(grid, basis, 0);
  Eigen::VectorXd phi_t(t.size());
  for (Eigen::Index n = 0; n < t.size(); ++n) phi_t[n] = phi(t[n]);
  Eigen::VectorXd g_z(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) g_z[k] = g(z[k]);

  CycleErrors e;
  const FieldState written = integrate_write(grid, a_in, DrivingConfig::SymmetricPlus);
  const Eigen::VectorXd stored =
      addressed_wave(written, DrivingConfig::SymmetricPlus).row(grid.n_t).transpose();
  e.write = relative_l2(stored, -quarter * g_z, grid.dz());
  e.balance = excitation_balance(grid, written);
  e.b_minus = addressed_wave(written, DrivingConfig::SymmetricMinus).cwiseAbs().maxCoeff();

  const Eigen::VectorXd read = integrate_read(grid, g_z, DrivingConfig::SymmetricPlus, direction);
  e.read = relative_l2(read, -quarter * phi_t, grid.dt());

  const Eigen::VectorXd cycled = integrate_read(grid, stored, DrivingConfig::SymmetricPlus, direction);
  e.full_cycle = relative_l2(cycled, std::sqrt(basis.lambdas[0]) * phi_t, grid.dt());
  return e;
}

}  // namespace

DiscrepancyReport compare_with_kernel(const PdeGrid& grid, const SchmidtBasis& basis,
                                      const WriteKernel& kernel, Retrieval direction) {
  grid.validate();
  if (!same_geometry(grid.t_w, kernel.config.t_w) || !same_geometry(grid.l, kernel.config.l) ||
      !same_geometry(basis.t_w, kernel.config.t_w) || !same_geometry(basis.l, kernel.config.l)) {
    throw ArgumentError("compare_with_kernel: (t_w, l) differ between the PDE grid and the kernel");
  }
  if (basis.n_modes < 1) throw ArgumentError("compare_with_kernel: basis has no modes");
  if (grid.n_t % 2 != 0 || grid.n_z % 2 != 0) {
    throw ArgumentError("compare_with_kernel: grid steps must be even for the refinement study");
  }

  PdeGrid coarse = grid;
  coarse.n_t /= 2;
  coarse.n_z /= 2;
  const CycleErrors fine_errors = run_cycle(grid, basis, direction);
  const CycleErrors coarse_errors = run_cycle(coarse, basis, direction);

  auto make_case = [](std::string name, double fine, double rough) {
    OracleCase c;
    c.name = std::move(name);
    c.rel_l2_error = fine;
    c.coarse_error = rough;
    c.order = (fine > 0 && rough > 0) ? std::log2(rough / fine) : 0.0;
    return c;
  };

  DiscrepancyReport report;
  report.grid = grid;
  report.retrieval = direction;
  report.lambda = basis.lambdas[0];
  report.cases.push_back(make_case("write", fine_errors.write, coarse_errors.write));
  report.cases.push_back(make_case("read", fine_errors.read, coarse_errors.read));
  report.cases.push_back(make_case("full_cycle", fine_errors.full_cycle, coarse_errors.full_cycle));
  report.excitation_balance = fine_errors.balance;
  report.max_abs_b_minus = fine_errors.b_minus;
  return report;
}

}  // namespace tripod
