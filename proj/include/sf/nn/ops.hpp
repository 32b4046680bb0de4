#pragma once

#include <span>

#include "sf/nn/tape.hpp"

// Differentiable layer ops. Every op checks shapes eagerly and throws
// sf::ShapeMismatch on inconsistent inputs.

namespace sf::nn {

/// Cross-correlation of a C_in x H x W input with C_out x C_in x k x k
/// weights, zero "same" padding (k odd), output ceil(H/stride) x ceil(W/stride).
Var conv2d(Var input, Var weight, int stride = 1);

/// Per-channel k x k cross-correlation; weight is C x 1 x k x k.
Var depthwise_conv2d(Var input, Var weight, int stride = 1);

/// C_in x L input, C_out x C_in x k weights, zero "same" padding.
Var conv1d(Var input, Var weight);

/// Adds bias[c] to every element of channel c (axis 0).
Var add_channel_bias(Var x, Var bias);

/// Depthwise conv then pointwise 1x1 conv, each followed by Leaky ReLU.
Var depthwise_separable_block(Var input, Var depth_weight, Var point_weight, int stride, double slope);

/// x if x > 0, slope * x otherwise; the subgradient at 0 is `slope`.
Var leaky_relu(Var x, double slope);
Var sigmoid(Var x);

/// C x L -> C. Backward routes the gradient to the first maximal index.
Var global_max_pool_1d(Var x);

/// weight (m x n) * x (n) + bias (m).
Var dense(Var x, Var weight, Var bias);

/// Concatenation along axis 0; trailing dimensions must agree.
Var concat(std::span<const Var> parts);

/// C x H x W -> C
Var spatial_mean(Var x);
/// C -> C x length (copies the vector into every column)
Var tile(Var x, int length);
/// C x P -> C x length by linear interpolation along the column axis.
Var resample_columns(Var x, int length);
/// R x L -> L
Var row(Var x, int r);
Var reshape(Var x, Shape shape);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var x, double factor);
Var add_scalar(Var x, double c);
Var square(Var x);
/// log(clamp(x, lo, hi)); zero gradient where clamping is active.
Var log_clamped(Var x, double lo, double hi);
Var sum(Var x);
Var mean(Var x);

}  // namespace sf::nn
