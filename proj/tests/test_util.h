#pragma once

// Shared fixtures for the test suites: finite-difference oracles, a linear
// test system, and a random LQ game generator. Nothing here calls into the
// code paths it is used to check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ilqgame/dynamics.h"
#include "ilqgame/lq_game.h"

namespace ilqgame::testing {

// |a - b| / max(|b|, 1). Jacobians and cost derivatives in these tests are
// O(1) or larger, so this is a relative error wherever it matters.
inline double relative_error(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1.0);
}

// Central-difference Jacobian of f at x.
inline MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& f,
                            const VectorXd& x, double h = 1e-6) {
  const VectorXd f0 = f(x);
  MatrixXd J(f0.size(), x.size());
  for (Index c = 0; c < x.size(); ++c) {
    VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    J.col(c) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f,
                            const VectorXd& x, double h = 1e-6) {
  VectorXd g(x.size());
  for (Index c = 0; c < x.size(); ++c) {
    VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    g(c) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// x' = A x + sum_i B_i u_i, time invariant.
class LinearSystem final : public DynamicalSystem {
 public:
  LinearSystem(MatrixXd A, std::vector<MatrixXd> B)
      : A_(std::move(A)), B_(std::move(B)) {}

  Index state_dim() const override { return A_.rows(); }
  std::size_t num_players() const override { return B_.size(); }
  Index control_dim(PlayerIndex i) const override { return B_.at(i).cols(); }

  VectorXd evaluate(Time, const VectorXd& x,
                    const ControlSet& u) const override {
    check_dimensions(x, u);
    VectorXd xdot = A_ * x;
    for (std::size_t i = 0; i < B_.size(); ++i) xdot += B_[i] * u[i];
    return xdot;
  }
  Linearization linearize(Time, const VectorXd& x,
                          const ControlSet& u) const override {
    check_dimensions(x, u);
    return {A_, B_};
  }

 private:
  MatrixXd A_;
  std::vector<MatrixXd> B_;
};

inline MatrixXd random_matrix(std::mt19937_64& rng, Index rows, Index cols,
                              double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  MatrixXd M(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) M(r, c) = normal(rng);
  return M;
}

inline VectorXd random_vector(std::mt19937_64& rng, Index n,
                              double scale = 1.0) {
  return random_matrix(rng, n, 1, scale);
}

// G G' + shift I, positive semidefinite (definite when shift > 0).
inline MatrixXd random_psd(std::mt19937_64& rng, Index n, double shift) {
  const MatrixXd G = random_matrix(rng, n, n);
  return G * G.transpose() / static_cast<double>(n) +
         shift * MatrixXd::Identity(n, n);
}

struct RandomGame {
  std::vector<LQGameStage> stages;
  ValueApprox terminal;
};

// Random time-varying LQ game with PSD Q_i, PSD R_ij (j != i), PD R_ii.
inline RandomGame random_lq_game(std::mt19937_64& rng,
                                 const std::vector<Index>& control_dims,
                                 Index n, std::size_t horizon,
                                 bool linear_terms = true) {
  const std::size_t N = control_dims.size();
  RandomGame g;
  for (std::size_t k = 0; k < horizon; ++k) {
    LQGameStage s;
    s.A = MatrixXd::Identity(n, n) + random_matrix(rng, n, n, 0.2);
    for (std::size_t i = 0; i < N; ++i)
      s.B.push_back(random_matrix(rng, n, control_dims[i], 0.5));
    for (std::size_t i = 0; i < N; ++i) {
      s.Q.push_back(random_psd(rng, n, 0.0));
      s.l.push_back(linear_terms ? random_vector(rng, n) : VectorXd::Zero(n));
      std::vector<MatrixXd> R;
      std::vector<VectorXd> r;
      for (std::size_t j = 0; j < N; ++j) {
        const Index m = control_dims[j];
        R.push_back(j == i ? random_psd(rng, m, 0.5)
                           : random_psd(rng, m, 0.0) * 0.3);
        r.push_back(linear_terms ? random_vector(rng, m) : VectorXd::Zero(m));
      }
      s.R.push_back(std::move(R));
      s.r.push_back(std::move(r));
    }
    g.stages.push_back(std::move(s));
  }
  g.terminal = ValueApprox::zeros(N, n);
  for (std::size_t i = 0; i < N; ++i) {
    g.terminal.Z[i] = random_psd(rng, n, 0.0);
    if (linear_terms) g.terminal.zeta[i] = random_vector(rng, n);
  }
  return g;
}

// Textbook discrete-time LQR, written independently of the game solver.
struct RiccatiOracle {
  std::vector<MatrixXd> K;
  std::vector<VectorXd> k;
  std::vector<MatrixXd> P;
};

inline RiccatiOracle lqr_oracle(const std::vector<LQGameStage>& stages,
                         const MatrixXd& PT, const VectorXd& pT) {
  RiccatiOracle o;
  const std::size_t T = stages.size();
  o.K.resize(T);
  o.k.resize(T);
  MatrixXd P = PT;
  VectorXd p = pT;
  for (std::size_t t = T; t-- > 0;) {
    const auto& s = stages[t];
    const MatrixXd& A = s.A;
    const MatrixXd& B = s.B[0];
    const MatrixXd H = s.R[0][0] + B.transpose() * P * B;
    const MatrixXd K = H.ldlt().solve(B.transpose() * P * A);
    const VectorXd k = H.ldlt().solve(B.transpose() * p + s.r[0][0]);
    // P = Q + A'PA - A'PB K; p = l + A'p - K'(B'p + r) ... with affine
    // correction from the closed loop.
    const MatrixXd Pn = s.Q[0] + A.transpose() * P * A -
                        A.transpose() * P * B * K;
    const VectorXd pn = s.l[0] + (A - B * K).transpose() * p -
                        K.transpose() * s.r[0][0] -
                        (A - B * K).transpose() * P * B * k +
                        K.transpose() * s.R[0][0] * k;
    o.K[t] = K;
    o.k[t] = k;
    P = 0.5 * (Pn + Pn.transpose());
    p = pn;
  }
  return o;
}

}  // namespace ilqgame::testing
