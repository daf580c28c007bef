#include "tripod/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/SVD>

#include "tripod/error.hpp"
#include "tripod/numerics.hpp"

namespace tripod {

std::string ModeLabel::name() const {
  switch (kind) {
    case Kind::In1: return "in1";
    case Kind::In2: return "in2";
    case Kind::Spin1: return "spin1";
    case Kind::Spin2: return "spin2";
    case Kind::SpinPlus: return "spin+";
    case Kind::SpinMinus: return "spin-";
    case Kind::Out1: return "out1";
    case Kind::Out2: return "out2";
    case Kind::Loss: return "loss" + std::to_string(index);
  }
  return "?";
}

GaussianState::GaussianState(std::vector<ModeLabel> labels, Eigen::VectorXd mean,
                             Eigen::MatrixXd cov)
    : labels_(std::move(labels)), mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto dim = 2 * mode_count();
  if (mean_.size() != dim || cov_.rows() != dim || cov_.cols() != dim) {
    throw ArgumentError("GaussianState: mean/cov dimensions do not match the label count");
  }
  std::set<ModeLabel> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) throw ArgumentError("GaussianState: duplicate mode labels");
  if (dim > 0) {
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ArgumentError("GaussianState: covariance is not symmetric");
    }
  }
}

bool GaussianState::contains(ModeLabel label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Eigen::Index GaussianState::index_of(ModeLabel label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ArgumentError("mode " + label.name() + " not in register");
  return static_cast<Eigen::Index>(it - labels_.begin());
}

Eigen::Vector2d GaussianState::mean_of(ModeLabel label) const {
  return mean_.segment<2>(2 * index_of(label));
}

Eigen::Matrix2d GaussianState::block(ModeLabel label) const {
  const auto k = 2 * index_of(label);
  return cov_.block<2, 2>(k, k);
}

Eigen::Matrix2d GaussianState::cross(ModeLabel a, ModeLabel b) const {
  return cov_.block<2, 2>(2 * index_of(a), 2 * index_of(b));
}

GaussianState vacuum_register(std::vector<ModeLabel> labels) {
  const auto dim = 2 * static_cast<Eigen::Index>(labels.size());
  return {std::move(labels), Eigen::VectorXd::Zero(dim),
          kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim)};
}

GaussianState set_mode(const GaussianState& state, ModeLabel label, const ModeSpec& spec) {
  if (!(spec.var_x > 0) || !(spec.var_y > 0) ||
      spec.var_x * spec.var_y < kVacuumVariance * kVacuumVariance - 1e-12) {
    throw ArgumentError("set_mode: variances (" + std::to_string(spec.var_x) + ", " +
                        std::to_string(spec.var_y) + ") violate the uncertainty bound");
  }
  const auto k = 2 * state.index_of(label);
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  mean[k] = spec.mean_x;
  mean[k + 1] = spec.mean_y;
  cov.middleRows(k, 2).setZero();
  cov.middleCols(k, 2).setZero();
  cov(k, k) = spec.var_x;
  cov(k + 1, k + 1) = spec.var_y;
  return {state.labels(), std::move(mean), std::move(cov)};
}

GaussianState apply_passive(const GaussianState& state, std::span<const ModeLabel> labels,
                            const Eigen::MatrixXd& orthogonal) {
  const auto m = static_cast<Eigen::Index>(labels.size());
  if (orthogonal.rows() != m || orthogonal.cols() != m) {
    throw ArgumentError("apply_passive: matrix size does not match the mode list");
  }
  if ((orthogonal.transpose() * orthogonal - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() >
      1e-12) {
    throw ArgumentError("apply_passive: mixing matrix is not orthogonal");
  }
  std::vector<Eigen::Index> index(m);
  for (Eigen::Index r = 0; r < m; ++r) index[r] = state.index_of(labels[r]);
  if (std::set<Eigen::Index>(index.begin(), index.end()).size() != index.size()) {
    throw ArgumentError("apply_passive: repeated mode");
  }

  const auto dim = 2 * state.mode_count();
  Eigen::MatrixXd transform = Eigen::MatrixXd::Identity(dim, dim);
  for (Eigen::Index r = 0; r < m; ++r) {
    transform(2 * index[r], 2 * index[r]) = 0;
    transform(2 * index[r] + 1, 2 * index[r] + 1) = 0;
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      transform(2 * index[r], 2 * index[c]) = orthogonal(r, c);
      transform(2 * index[r] + 1, 2 * index[c] + 1) = orthogonal(r, c);
    }
  }
  Eigen::VectorXd mean = transform * state.mean();
  Eigen::MatrixXd cov = transform * state.cov() * transform.transpose();
  cov = (0.5 * (cov + cov.transpose())).eval();
  return {state.labels(), std::move(mean), std::move(cov)};
}

bool is_vacuum(const GaussianState& state, ModeLabel label, double tol) {
  const auto k = 2 * state.index_of(label);
  const auto dim = 2 * state.mode_count();
  if (state.mean().segment<2>(k).cwiseAbs().maxCoeff() > tol) return false;
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = k; r < k + 2; ++r) {
      const double expected = (r == c) ? kVacuumVariance : 0.0;
      if (std::abs(state.cov()(r, c) - expected) > tol) return false;
    }
  }
  return true;
}

GaussianState memory_half_cycle(const GaussianState& state, ModeLabel from, ModeLabel to,
                                double lam, ModeLabel loss, bool require_vacuum) {
  if (!std::isfinite(lam) || lam < 0 || lam > 1) {
    throw ArgumentError("memory_half_cycle: lambda must lie in [0, 1], got " + std::to_string(lam));
  }
  if (from == to || from == loss || to == loss) {
    throw ArgumentError("memory_half_cycle: from, to and loss must be distinct modes");
  }
  if (require_vacuum && (!is_vacuum(state, to) || !is_vacuum(state, loss))) {
    throw ArgumentError("memory_half_cycle: target " + to.name() + " or ancilla " + loss.name() +
                        " is not in vacuum");
  }
  const double transfer = std::pow(lam, 0.25);
  const double leak = std::sqrt(std::max(0.0, 1.0 - std::sqrt(lam)));

  // Permutation from <-> to, then mixing of (to, loss).
  Eigen::MatrixXd mixing(3, 3);
  mixing << 0, 1, 0,
            -transfer, 0, leak,
            leak, 0, transfer;
  const ModeLabel involved[] = {from, to, loss};
  return apply_passive(state, involved, mixing);
}

GaussianState rotate_pm_basis(const GaussianState& state, ModeLabel a, ModeLabel b) {
  if (a == b) throw ArgumentError("rotate_pm_basis: modes must differ");
  const double h = std::sqrt(0.5);
  Eigen::MatrixXd mixing(2, 2);
  mixing << h, h,
            h, -h;
  const ModeLabel involved[] = {a, b};
  return apply_passive(state, involved, mixing);
}

GaussianState relabel(const GaussianState& state, ModeLabel from, ModeLabel to) {
  auto labels = state.labels();
  labels[state.index_of(from)] = to;
  return {std::move(labels), state.mean(), state.cov()};
}

DuanResult duan(const GaussianState& state, ModeLabel a, ModeLabel b) {
  if (a == b) throw ArgumentError("duan: modes must differ");
  const Eigen::Matrix2d va = state.block(a);
  const Eigen::Matrix2d vb = state.block(b);
  const Eigen::Matrix2d cab = state.cross(a, b);
  const double local = va(0, 0) + vb(0, 0) + va(1, 1) + vb(1, 1);
  const double plus_x_minus_y = local + 2.0 * cab(0, 0) - 2.0 * cab(1, 1);
  const double minus_x_plus_y = local - 2.0 * cab(0, 0) + 2.0 * cab(1, 1);

  DuanResult result;
  result.pair = {a, b};
  if (minus_x_plus_y < plus_x_minus_y) {
    result.value = minus_x_plus_y;
    result.sign = DuanResult::Sign::MinusXPlusY;
  } else {
    result.value = plus_x_minus_y;
    result.sign = DuanResult::Sign::PlusXMinusY;
  }
  return result;
}

double photon_number(const GaussianState& state, ModeLabel label) {
  const Eigen::Vector2d m = state.mean_of(label);
  const Eigen::Matrix2d v = state.block(label);
  return m.squaredNorm() + (v(0, 0) - kVacuumVariance) + (v(1, 1) - kVacuumVariance);
}

Eigen::VectorXd symplectic_eigenvalues(const GaussianState& state) {
  const auto dim = 2 * state.mode_count();
  if (dim == 0) return {};
  // nu_k are the singular values of V^{1/2} Omega V^{1/2}, each twice. Working
  // with this product rather than its square keeps the error at |V| eps.
  const auto cov_eig = symmetric_eig(state.cov());
  const Eigen::VectorXd root = cov_eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sqrt_cov =
      cov_eig.eigenvectors * root.asDiagonal() * cov_eig.eigenvectors.transpose();

  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1;
    omega(k + 1, k) = -1;
  }
  const Eigen::MatrixXd skew = sqrt_cov * omega * sqrt_cov;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(skew).singularValues();

  const Eigen::Index n = state.mode_count();
  Eigen::VectorXd nu(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    nu[n - 1 - k] = 0.5 * (sv[2 * k] + sv[2 * k + 1]);  // ascending
  }
  return nu;
}

bool is_physical(const GaussianState& state, double tol) {
  if (state.mode_count() == 0) return true;
  return symplectic_eigenvalues(state).minCoeff() >= kVacuumVariance - tol;
}

}  // namespace tripod
