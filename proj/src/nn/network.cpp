#include "flightrl/nn/network.hpp"

#include <cmath>

namespace flightrl::nn {

void validate_spec(const std::vector<LayerSpec>& spec) {
  if (spec.empty()) throw ConfigError("network spec is empty");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec[i].in <= 0 || spec[i].out <= 0)
      throw ConfigError("layer " + std::to_string(i) + ": widths must be positive");
    if (i > 0 && spec[i].in != spec[i - 1].out)
      throw ConfigError("layer " + std::to_string(i) + ": input width " +
                        std::to_string(spec[i].in) + " does not match previous output " +
                        std::to_string(spec[i - 1].out));
  }
}

NetworkParams xavier_init(const std::vector<LayerSpec>& spec, Rng& rng) {
  validate_spec(spec);
  NetworkParams p;
  p.spec = spec;
  p.layers.resize(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& s = spec[i];
    auto& l = p.layers[i];
    const double bound = std::sqrt(6.0 / (s.in + s.out));
    l.W.resize(s.out, s.in);
    for (int c = 0; c < s.in; ++c)
      for (int r = 0; r < s.out; ++r) l.W(r, c) = rng.uniform(-bound, bound);
    l.b = VectorXd::Zero(s.out);
    if (s.kind == LayerKind::hidden) {
      l.gain = VectorXd::Ones(s.out);
      l.offset = VectorXd::Zero(s.out);
    }
  }
  return p;
}

NetworkParams zeros_like(const NetworkParams& p) {
  NetworkParams z;
  z.spec = p.spec;
  z.layers.resize(p.layers.size());
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const auto& l = p.layers[i];
    auto& o = z.layers[i];
    o.W = MatrixXd::Zero(l.W.rows(), l.W.cols());
    o.b = VectorXd::Zero(l.b.size());
    o.gain = VectorXd::Zero(l.gain.size());
    o.offset = VectorXd::Zero(l.offset.size());
  }
  return z;
}

std::array<Eigen::Map<Eigen::ArrayXd>, 4> block_views(LayerParams& l) {
  return {Eigen::Map<Eigen::ArrayXd>(l.W.data(), l.W.size()),
          Eigen::Map<Eigen::ArrayXd>(l.b.data(), l.b.size()),
          Eigen::Map<Eigen::ArrayXd>(l.gain.data(), l.gain.size()),
          Eigen::Map<Eigen::ArrayXd>(l.offset.data(), l.offset.size())};
}

std::array<Eigen::Map<const Eigen::ArrayXd>, 4> block_views(const LayerParams& l) {
  return {Eigen::Map<const Eigen::ArrayXd>(l.W.data(), l.W.size()),
          Eigen::Map<const Eigen::ArrayXd>(l.b.data(), l.b.size()),
          Eigen::Map<const Eigen::ArrayXd>(l.gain.data(), l.gain.size()),
          Eigen::Map<const Eigen::ArrayXd>(l.offset.data(), l.offset.size())};
}

std::int64_t parameter_count(const NetworkParams& p) {
  std::int64_t n = 0;
  for (const auto& l : p.layers)
    n += l.W.size() + l.b.size() + l.gain.size() + l.offset.size();
  return n;
}

MatrixXd forward(const NetworkParams& p, const MatrixXd& input, GradientTape* tape) {
  if (p.layers.empty()) throw UsageError("forward: uninitialized network");
  if (input.rows() != p.input_width())
    throw UsageError("forward: input has " + std::to_string(input.rows()) +
                     " rows, network expects " + std::to_string(p.input_width()));
  if (input.cols() == 0) throw UsageError("forward: empty batch");
  if (!input.allFinite()) throw NumericError("forward: non-finite input");

  const int B = static_cast<int>(input.cols());
  if (tape) {
    tape->layers.assign(p.layers.size(), {});
    tape->batch = B;
  }

  MatrixXd cur = input;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const auto& l = p.layers[i];
    LayerTrace* tr = tape ? &tape->layers[i] : nullptr;
    if (tr) tr->x = cur;

    MatrixXd z = l.W * cur;
    z.colwise() += l.b;

    if (p.spec[i].kind == LayerKind::linear) {
      cur = std::move(z);
      continue;
    }

    // Layer norm over the units of each sample (population variance), then
    // learned gain/offset, then ReLU.
    RowVectorXd mu = z.colwise().mean();
    z.rowwise() -= mu;
    RowVectorXd inv_std =
        (z.array().square().colwise().mean() + kLayerNormEps).sqrt().inverse();
    z.array().rowwise() *= inv_std.array();
    // z is now zhat
    MatrixXd pre =
        ((z.array().colwise() * l.gain.array()).colwise() + l.offset.array()).matrix();
    MatrixXd mask = (pre.array() > 0.0).cast<double>();
    if (tr) {
      tr->zhat = std::move(z);
      tr->inv_std = std::move(inv_std);
      tr->relu_mask = mask;
    }
    cur = pre.cwiseProduct(mask);
  }
  return cur;
}

VectorXd forward(const NetworkParams& p, const VectorXd& input) {
  return forward(p, MatrixXd(input), nullptr).col(0);
}

Gradients backward(const NetworkParams& p, const GradientTape& tape,
                   const MatrixXd& output_grad, const BackwardOptions& opt) {
  if (tape.layers.size() != p.layers.size())
    throw UsageError("backward: tape does not match network");
  if (output_grad.rows() != p.output_width() || output_grad.cols() != tape.batch)
    throw UsageError("backward: output_grad shape mismatch");

  Gradients g;
  if (opt.param_grads) g.layers = zeros_like(p).layers;

  MatrixXd G = output_grad;  // gradient w.r.t. the current layer's output
  for (int i = static_cast<int>(p.layers.size()) - 1; i >= 0; --i) {
    const auto& l = p.layers[i];
    const auto& tr = tape.layers[i];
    MatrixXd dZ;
    if (p.spec[i].kind == LayerKind::linear) {
      dZ = std::move(G);
    } else {
      // Through ReLU, gain/offset, then the layer-norm Jacobian:
      //   dz = inv_std * (ghat - mean(ghat) - zhat .* mean(ghat .* zhat))
      // with means taken over the units of each column.
      MatrixXd gm = G.cwiseProduct(tr.relu_mask);
      if (opt.param_grads) {
        g.layers[i].gain = gm.cwiseProduct(tr.zhat).rowwise().sum();
        g.layers[i].offset = gm.rowwise().sum();
      }
      MatrixXd ghat = gm.array().colwise() * l.gain.array();
      RowVectorXd m1 = ghat.colwise().mean();
      RowVectorXd m2 = ghat.cwiseProduct(tr.zhat).colwise().mean();
      dZ = ghat;
      dZ.rowwise() -= m1;
      dZ -= (tr.zhat.array().rowwise() * m2.array()).matrix();
      dZ.array().rowwise() *= tr.inv_std.array();
    }
    if (opt.param_grads) {
      g.layers[i].W = dZ * tr.x.transpose();
      g.layers[i].b = dZ.rowwise().sum();
    }
    G = l.W.transpose() * dZ;
  }
  g.input = std::move(G);
  return g;
}

}  // namespace flightrl::nn
