#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace conjparse::nn {

/// One LSTM direction. Gate rows are stacked (input, forget, output, cell).
struct LstmParams {
  Eigen::MatrixXd w;  // 4h x in
  Eigen::MatrixXd u;  // 4h x h
  Eigen::VectorXd b;  // 4h

  Eigen::Index hidden() const { return u.cols(); }
  Eigen::Index input() const { return w.cols(); }
  void resize(Eigen::Index in, Eigen::Index hidden);
  void set_zero();
};

/// Per-timestep activations kept for the backward pass (all h x T).
struct LstmCache {
  Eigen::MatrixXd i, f, o, g, c, tc, h;
};

/// Runs over the columns of x, right to left when reverse is set; column t of
/// the result is the hidden state after reading x.col(t).
Eigen::MatrixXd lstm_forward(const LstmParams& p, const Eigen::MatrixXd& x, bool reverse,
                             LstmCache* cache = nullptr);

/// Accumulates parameter gradients into grad and input gradients into d_x.
void lstm_backward(const LstmParams& p, const Eigen::MatrixXd& x, bool reverse,
                   const LstmCache& cache, const Eigen::MatrixXd& d_h, LstmParams& grad,
                   Eigen::MatrixXd& d_x);

/// tanh hidden layer followed by a linear output layer.
struct Mlp {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  Eigen::Index input() const { return w1.cols(); }
  Eigen::Index output() const { return w2.rows(); }
  void resize(Eigen::Index in, Eigen::Index hidden, Eigen::Index out);
  void set_zero();
};

/// Throws DimensionError when x does not match the input width.
Eigen::VectorXd mlp_forward(const Mlp& m, const Eigen::VectorXd& x,
                            Eigen::VectorXd* hidden = nullptr);

/// Given the output gradient, accumulates into grad and returns dL/dx.
Eigen::VectorXd mlp_backward(const Mlp& m, const Eigen::VectorXd& x, const Eigen::VectorXd& hidden,
                             const Eigen::VectorXd& d_out, Mlp& grad);

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace conjparse::nn
