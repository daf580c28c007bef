#pragma once

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tripod {

/// Quadrature variance of the vacuum in the e = x + i y convention.
constexpr double kVacuumVariance = 0.25;

struct ModeLabel {
  enum class Kind { In1, In2, Spin1, Spin2, SpinPlus, SpinMinus, Out1, Out2, Loss };

  Kind kind = Kind::In1;
  int index = 0;  ///< distinguishes Loss(k); zero for every other kind

  static ModeLabel loss(int k) { return {Kind::Loss, k}; }

  std::string name() const;
  auto operator<=>(const ModeLabel&) const = default;
};

namespace modes {
inline constexpr ModeLabel in1{ModeLabel::Kind::In1, 0};
inline constexpr ModeLabel in2{ModeLabel::Kind::In2, 0};
inline constexpr ModeLabel spin1{ModeLabel::Kind::Spin1, 0};
inline constexpr ModeLabel spin2{ModeLabel::Kind::Spin2, 0};
inline constexpr ModeLabel spin_plus{ModeLabel::Kind::SpinPlus, 0};
inline constexpr ModeLabel spin_minus{ModeLabel::Kind::SpinMinus, 0};
inline constexpr ModeLabel out1{ModeLabel::Kind::Out1, 0};
inline constexpr ModeLabel out2{ModeLabel::Kind::Out2, 0};
}  // namespace modes

/// Means and (full, not normally ordered) variances of one uncorrelated mode.
struct ModeSpec {
  double mean_x = 0;
  double mean_y = 0;
  double var_x = kVacuumVariance;
  double var_y = kVacuumVariance;
};

/// Quadrature means and covariance of a labeled register of bosonic modes,
/// ordered (x_1, y_1, x_2, y_2, ...). Operations below return new states.
class GaussianState {
 public:
  GaussianState(std::vector<ModeLabel> labels, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  const std::vector<ModeLabel>& labels() const { return labels_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  Eigen::Index mode_count() const { return static_cast<Eigen::Index>(labels_.size()); }

  bool contains(ModeLabel label) const;
  Eigen::Index index_of(ModeLabel label) const;

  Eigen::Vector2d mean_of(ModeLabel label) const;
  Eigen::Matrix2d block(ModeLabel label) const;
  Eigen::Matrix2d cross(ModeLabel a, ModeLabel b) const;

 private:
  std::vector<ModeLabel> labels_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

struct DuanResult {
  enum class Sign {
    PlusXMinusY,  ///< <(x_a + x_b)^2> + <(y_a - y_b)^2>
    MinusXPlusY,  ///< mode a observed with flipped phase: <(x_a - x_b)^2> + <(y_a + y_b)^2>
  };
  double value = 0;
  std::pair<ModeLabel, ModeLabel> pair;
  Sign sign = Sign::PlusXMinusY;
};

GaussianState vacuum_register(std::vector<ModeLabel> labels);

/// Replaces one mode by an uncorrelated mode with the given statistics.
GaussianState set_mode(const GaussianState& state, ModeLabel label, const ModeSpec& spec);

/// Applies a real orthogonal (passive, number-preserving) mixing to the
/// listed modes, identically on the x and y blocks.
GaussianState apply_passive(const GaussianState& state, std::span<const ModeLabel> labels,
                            const Eigen::MatrixXd& orthogonal);

/// One memory half cycle (write or read) for a single Schmidt mode:
///   to       = -lam^{1/4} from + sqrt(1 - sqrt(lam)) loss
///   loss_out =  sqrt(1 - sqrt(lam)) from + lam^{1/4} loss
/// `from` is consumed and receives the previous content of `to`.
/// `to` and `loss` must be in vacuum unless require_vacuum is false.
GaussianState memory_half_cycle(const GaussianState& state, ModeLabel from, ModeLabel to,
                                double lam, ModeLabel loss, bool require_vacuum = true);

/// (a, b) -> ((a + b)/sqrt2, (a - b)/sqrt2). Involutive.
GaussianState rotate_pm_basis(const GaussianState& state, ModeLabel a, ModeLabel b);

GaussianState relabel(const GaussianState& state, ModeLabel from, ModeLabel to);

/// Duan sum for both phase conventions of mode a; returns the smaller one.
DuanResult duan(const GaussianState& state, ModeLabel a, ModeLabel b);

/// <e^dagger e> = mean_x^2 + mean_y^2 + (var_x - 1/4) + (var_y - 1/4).
double photon_number(const GaussianState& state, ModeLabel label);

/// Williamson eigenvalues, one per mode, descending.
Eigen::VectorXd symplectic_eigenvalues(const GaussianState& state);

bool is_physical(const GaussianState& state, double tol = 1e-9);
bool is_vacuum(const GaussianState& state, ModeLabel label, double tol = 1e-12);

}  // namespace tripod
