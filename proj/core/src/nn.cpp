#include "conjparse/nn.hpp"

#include <string>

#include "conjparse/error.hpp"

namespace conjparse::nn {

void LstmParams::resize(Eigen::Index in, Eigen::Index hidden) {
  w.setZero(4 * hidden, in);
  u.setZero(4 * hidden, hidden);
  b.setZero(4 * hidden);
}

void LstmParams::set_zero() {
  w.setZero();
  u.setZero();
  b.setZero();
}

Eigen::MatrixXd lstm_forward(const LstmParams& p, const Eigen::MatrixXd& x, bool reverse,
                             LstmCache* cache) {
  const Eigen::Index steps = x.cols();
  const Eigen::Index hid = p.hidden();
  if (x.rows() != p.input()) {
    throw DimensionError("LSTM input has " + std::to_string(x.rows()) + " rows, expected " +
                         std::to_string(p.input()));
  }
  Eigen::MatrixXd out(hid, steps);
  if (cache) {
    for (auto* m : {&cache->i, &cache->f, &cache->o, &cache->g, &cache->c, &cache->tc, &cache->h}) {
      m->resize(hid, steps);
    }
  }
  const Eigen::MatrixXd wx = p.w * x;
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hid);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hid);
  Eigen::VectorXd z(4 * hid);
  for (Eigen::Index s = 0; s < steps; ++s) {
    const Eigen::Index t = reverse ? steps - 1 - s : s;
    z.noalias() = p.u * h;
    z += wx.col(t) + p.b;
    const Eigen::VectorXd i = z.segment(0, hid).unaryExpr(&sigmoid);
    const Eigen::VectorXd f = z.segment(hid, hid).unaryExpr(&sigmoid);
    const Eigen::VectorXd o = z.segment(2 * hid, hid).unaryExpr(&sigmoid);
    const Eigen::VectorXd g = z.segment(3 * hid, hid).array().tanh();
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    const Eigen::VectorXd tc = c.array().tanh();
    h = o.cwiseProduct(tc);
    out.col(t) = h;
    if (cache) {
      cache->i.col(t) = i;
      cache->f.col(t) = f;
      cache->o.col(t) = o;
      cache->g.col(t) = g;
      cache->c.col(t) = c;
      cache->tc.col(t) = tc;
      cache->h.col(t) = h;
    }
  }
  return out;
}

void lstm_backward(const LstmParams& p, const Eigen::MatrixXd& x, bool reverse,
                   const LstmCache& cache, const Eigen::MatrixXd& d_h, LstmParams& grad,
                   Eigen::MatrixXd& d_x) {
  const Eigen::Index steps = x.cols();
  const Eigen::Index hid = p.hidden();
  Eigen::MatrixXd d_z(4 * hid, steps);
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(hid);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(hid);
  for (Eigen::Index s = steps - 1; s >= 0; --s) {
    const Eigen::Index t = reverse ? steps - 1 - s : s;
    const Eigen::Index prev = reverse ? t + 1 : t - 1;
    const bool has_prev = s > 0;

    const Eigen::ArrayXd i = cache.i.col(t).array();
    const Eigen::ArrayXd f = cache.f.col(t).array();
    const Eigen::ArrayXd o = cache.o.col(t).array();
    const Eigen::ArrayXd g = cache.g.col(t).array();
    const Eigen::ArrayXd tc = cache.tc.col(t).array();

    const Eigen::ArrayXd dh = d_h.col(t).array() + dh_next.array();
    const Eigen::ArrayXd d_o = dh * tc;
    const Eigen::ArrayXd dc = dh * o * (1.0 - tc * tc) + dc_next.array();
    const Eigen::ArrayXd d_i = dc * g;
    const Eigen::ArrayXd d_g = dc * i;
    Eigen::ArrayXd d_f = Eigen::ArrayXd::Zero(hid);
    if (has_prev) d_f = dc * cache.c.col(prev).array();
    dc_next = (dc * f).matrix();

    auto dz = d_z.col(t);
    dz.segment(0, hid) = (d_i * i * (1.0 - i)).matrix();
    dz.segment(hid, hid) = (d_f * f * (1.0 - f)).matrix();
    dz.segment(2 * hid, hid) = (d_o * o * (1.0 - o)).matrix();
    dz.segment(3 * hid, hid) = (d_g * (1.0 - g * g)).matrix();

    if (has_prev) grad.u.noalias() += dz * cache.h.col(prev).transpose();
    dh_next.noalias() = p.u.transpose() * dz;
  }
  grad.w.noalias() += d_z * x.transpose();
  grad.b += d_z.rowwise().sum();
  d_x.noalias() += p.w.transpose() * d_z;
}

void Mlp::resize(Eigen::Index in, Eigen::Index hidden, Eigen::Index out) {
  w1.setZero(hidden, in);
  b1.setZero(hidden);
  w2.setZero(out, hidden);
  b2.setZero(out);
}

void Mlp::set_zero() {
  w1.setZero();
  b1.setZero();
  w2.setZero();
  b2.setZero();
}

Eigen::VectorXd mlp_forward(const Mlp& m, const Eigen::VectorXd& x, Eigen::VectorXd* hidden) {
  if (x.size() != m.input()) {
    throw DimensionError("MLP input has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(m.input()));
  }
  Eigen::VectorXd h = m.w1 * x + m.b1;
  h = h.array().tanh();
  Eigen::VectorXd out = m.w2 * h + m.b2;
  if (hidden) *hidden = std::move(h);
  return out;
}

Eigen::VectorXd mlp_backward(const Mlp& m, const Eigen::VectorXd& x, const Eigen::VectorXd& hidden,
                             const Eigen::VectorXd& d_out, Mlp& grad) {
  grad.w2.noalias() += d_out * hidden.transpose();
  grad.b2 += d_out;
  const Eigen::VectorXd d_pre =
      ((m.w2.transpose() * d_out).array() * (1.0 - hidden.array().square())).matrix();
  grad.w1.noalias() += d_pre * x.transpose();
  grad.b1 += d_pre;
  return m.w1.transpose() * d_pre;
}

}  // namespace conjparse::nn
