#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flightrl/rng.hpp"
#include "flightrl/types.hpp"

namespace flightrl::nn {

// Fully connected feed-forward networks, batched over columns: a batch of B
// inputs is an (in x B) matrix and every layer op is a dense product, which
// is where Eigen earns its keep. Hidden layers run affine -> layer norm
// (learned gain/offset) -> ReLU; output layers are affine only.

enum class LayerKind : std::uint8_t { hidden = 0, linear = 1 };

struct LayerSpec {
  int in = 0;
  int out = 0;
  LayerKind kind = LayerKind::hidden;
};

// Throws ConfigError on non-positive widths or mismatched chaining.
void validate_spec(const std::vector<LayerSpec>& spec);

struct LayerParams {
  MatrixXd W;        // out x in
  VectorXd b;        // out
  VectorXd gain;     // out, hidden layers only (size 0 otherwise)
  VectorXd offset;   // out, hidden layers only
};

struct NetworkParams {
  std::vector<LayerSpec> spec;
  std::vector<LayerParams> layers;

  int input_width() const { return spec.empty() ? 0 : spec.front().in; }
  int output_width() const { return spec.empty() ? 0 : spec.back().out; }
};

// Weights uniform on +-sqrt(6 / (fan_in + fan_out)), biases zero, layer norm
// gain 1 / offset 0.
NetworkParams xavier_init(const std::vector<LayerSpec>& spec, Rng& rng);

// Same shapes, all blocks zero. Used for gradient accumulators.
NetworkParams zeros_like(const NetworkParams& p);

// Flat views over a layer's parameter blocks (W, b, gain, offset) so
// optimizers and serialization can treat parameters uniformly. Empty blocks
// map with size 0.
std::array<Eigen::Map<Eigen::ArrayXd>, 4> block_views(LayerParams& l);
std::array<Eigen::Map<const Eigen::ArrayXd>, 4> block_views(const LayerParams& l);

std::int64_t parameter_count(const NetworkParams& p);

// Per-layer intermediates recorded during a taped forward pass.
struct LayerTrace {
  MatrixXd x;            // layer input, in x B
  MatrixXd zhat;         // normalized pre-activation (hidden only)
  RowVectorXd inv_std;   // 1/sqrt(var + eps) per column (hidden only)
  MatrixXd relu_mask;    // 1 where the unit was active (hidden only)
};

struct GradientTape {
  std::vector<LayerTrace> layers;
  int batch = 0;
};

inline constexpr double kLayerNormEps = 1e-5;

// Batched forward pass. `input` is (input_width x B); returns
// (output_width x B). Pass a tape to record intermediates for backward.
// Throws UsageError on a width mismatch or empty batch, NumericError if the
// input is not finite.
MatrixXd forward(const NetworkParams& p, const MatrixXd& input, GradientTape* tape = nullptr);

// Single-sample convenience.
VectorXd forward(const NetworkParams& p, const VectorXd& input);

struct Gradients {
  std::vector<LayerParams> layers;  // d(loss)/d(param), same shapes as the net
  MatrixXd input;                   // d(loss)/d(input), in x B
};

struct BackwardOptions {
  bool param_grads = true;  // skip the dW GEMMs when only input grads matter
};

// Reverse pass through a taped forward. `output_grad` is d(loss)/d(output)
// as (output_width x B); parameter gradients are summed over the batch.
Gradients backward(const NetworkParams& p, const GradientTape& tape,
                   const MatrixXd& output_grad, const BackwardOptions& opt = {});

}  // namespace flightrl::nn
