#include "sf/nn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "sf/core/errors.hpp"
#include "sf/simd/kernels.hpp"

namespace sf::nn {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ShapeMismatch(what);
}

void add_into(Tensor* dst, const Tensor& src) {
  if (!dst) return;
  simd::axpy(1.0, src.data(), dst->data(), src.size());
}

int out_extent(int n, int stride) { return (n + stride - 1) / stride; }

struct ConvGeom {
  int c_in, h, w;
  int c_out, kh, kw;
  int sh, sw;
  int ho, wo;
  int ph() const { return kh / 2; }
  int pw() const { return kw / 2; }
  int patch() const { return c_in * kh * kw; }
  int positions() const { return ho * wo; }
};

// Row p of `col` holds the receptive field of output position p.
void im2col(const ConvGeom& g, const double* in, std::vector<double>& col) {
  const int K = g.patch();
  col.assign(static_cast<std::size_t>(g.positions()) * K, 0.0);
  for (int oy = 0; oy < g.ho; ++oy) {
    for (int ox = 0; ox < g.wo; ++ox) {
      double* dst = col.data() + static_cast<std::size_t>(oy * g.wo + ox) * K;
      for (int c = 0; c < g.c_in; ++c) {
        for (int a = 0; a < g.kh; ++a) {
          const int iy = oy * g.sh + a - g.ph();
          if (iy < 0 || iy >= g.h) continue;
          const double* src = in + (static_cast<std::size_t>(c) * g.h + iy) * g.w;
          for (int b = 0; b < g.kw; ++b) {
            const int ix = ox * g.sw + b - g.pw();
            if (ix < 0 || ix >= g.w) continue;
            dst[(c * g.kh + a) * g.kw + b] = src[ix];
          }
        }
      }
    }
  }
}

void col2im_add(const ConvGeom& g, const std::vector<double>& col, double* in_grad) {
  const int K = g.patch();
  for (int oy = 0; oy < g.ho; ++oy) {
    for (int ox = 0; ox < g.wo; ++ox) {
      const double* src = col.data() + static_cast<std::size_t>(oy * g.wo + ox) * K;
      for (int c = 0; c < g.c_in; ++c) {
        for (int a = 0; a < g.kh; ++a) {
          const int iy = oy * g.sh + a - g.ph();
          if (iy < 0 || iy >= g.h) continue;
          double* dst = in_grad + (static_cast<std::size_t>(c) * g.h + iy) * g.w;
          for (int b = 0; b < g.kw; ++b) {
            const int ix = ox * g.sw + b - g.pw();
            if (ix < 0 || ix >= g.w) continue;
            dst[ix] += src[(c * g.kh + a) * g.kw + b];
          }
        }
      }
    }
  }
}

Var conv_general(Var input, Var weight, const ConvGeom& g, Shape out_shape) {
  Tape& tape = *input.tape;
  std::vector<double> col;
  im2col(g, input.value().data(), col);
  const int K = g.patch();
  const int P = g.positions();
  Tensor out(std::move(out_shape), 0.0);
  const double* w = weight.value().data();
  for (int co = 0; co < g.c_out; ++co)
    for (int p = 0; p < P; ++p)
      out[static_cast<std::size_t>(co) * P + p] =
          simd::dot(w + static_cast<std::size_t>(co) * K, col.data() + static_cast<std::size_t>(p) * K,
                    static_cast<std::size_t>(K));

  const int in_id = input.id;
  const int w_id = weight.id;
  return tape.push(std::move(out), {in_id, w_id},
                   [g, in_id, w_id, col = std::move(col)](Tape& t, int self) {
                     const int K = g.patch();
                     const int P = g.positions();
                     const Tensor& gout = t.grad(self);
                     if (Tensor* gw = t.grad_mut(w_id)) {
                       for (int co = 0; co < g.c_out; ++co)
                         for (int p = 0; p < P; ++p) {
                           const double go = gout[static_cast<std::size_t>(co) * P + p];
                           if (go != 0.0)
                             simd::axpy(go, col.data() + static_cast<std::size_t>(p) * K,
                                        gw->data() + static_cast<std::size_t>(co) * K,
                                        static_cast<std::size_t>(K));
                         }
                     }
                     if (Tensor* gin = t.grad_mut(in_id)) {
                       const double* w = t.value(w_id).data();
                       std::vector<double> gcol(static_cast<std::size_t>(P) * K, 0.0);
                       for (int co = 0; co < g.c_out; ++co)
                         for (int p = 0; p < P; ++p) {
                           const double go = gout[static_cast<std::size_t>(co) * P + p];
                           if (go != 0.0)
                             simd::axpy(go, w + static_cast<std::size_t>(co) * K,
                                        gcol.data() + static_cast<std::size_t>(p) * K,
                                        static_cast<std::size_t>(K));
                         }
                       col2im_add(g, gcol, gin->data());
                     }
                   });
}

template <typename Fwd, typename Deriv>
Var elementwise(Var x, Fwd fwd, Deriv deriv) {
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [xid, deriv](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const Tensor& xv = t.value(xid);
    const Tensor& yv = t.value(self);
    const Tensor& gy = t.grad(self);
    for (std::size_t i = 0; i < xv.size(); ++i) (*gx)[i] += gy[i] * deriv(xv[i], yv[i]);
  });
}

void require_same_tape(Var a, Var b) {
  if (a.tape != b.tape) throw Error("ops: variables recorded on different tapes");
}

}  // namespace

Var conv2d(Var input, Var weight, int stride) {
  require_same_tape(input, weight);
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  require(is.size() == 3, "conv2d: input must be C x H x W, got " + shape_str(is));
  require(ws.size() == 4, "conv2d: weight must be Co x Ci x k x k, got " + shape_str(ws));
  require(ws[1] == is[0], "conv2d: weight expects " + std::to_string(ws[1]) + " input channels, input has " +
                              std::to_string(is[0]));
  require(ws[2] == ws[3] && ws[2] % 2 == 1, "conv2d: kernel must be square with odd size");
  require(stride >= 1, "conv2d: stride must be >= 1");
  ConvGeom g{is[0], is[1], is[2], ws[0], ws[2], ws[3], stride, stride, out_extent(is[1], stride),
             out_extent(is[2], stride)};
  return conv_general(input, weight, g, {g.c_out, g.ho, g.wo});
}

Var conv1d(Var input, Var weight) {
  require_same_tape(input, weight);
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  require(is.size() == 2, "conv1d: input must be C x L, got " + shape_str(is));
  require(ws.size() == 3, "conv1d: weight must be Co x Ci x k, got " + shape_str(ws));
  require(ws[1] == is[0], "conv1d: weight expects " + std::to_string(ws[1]) + " input channels, input has " +
                              std::to_string(is[0]));
  require(ws[2] % 2 == 1, "conv1d: kernel size must be odd");
  ConvGeom g{is[0], 1, is[1], ws[0], 1, ws[2], 1, 1, 1, is[1]};
  return conv_general(input, weight, g, {g.c_out, g.wo});
}

Var depthwise_conv2d(Var input, Var weight, int stride) {
  require_same_tape(input, weight);
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  require(is.size() == 3, "depthwise_conv2d: input must be C x H x W, got " + shape_str(is));
  require(ws.size() == 4 && ws[0] == is[0] && ws[1] == 1,
          "depthwise_conv2d: weight must be C x 1 x k x k with C = " + std::to_string(is[0]) + ", got " +
              shape_str(ws));
  require(ws[2] == ws[3] && ws[2] % 2 == 1, "depthwise_conv2d: kernel must be square with odd size");
  require(stride >= 1, "depthwise_conv2d: stride must be >= 1");
  const int C = is[0], H = is[1], W = is[2], k = ws[2], pad = k / 2;
  const int Ho = out_extent(H, stride), Wo = out_extent(W, stride);
  const double* in = input.value().data();
  const double* w = weight.value().data();
  Tensor out({C, Ho, Wo}, 0.0);
  for (int c = 0; c < C; ++c)
    for (int oy = 0; oy < Ho; ++oy)
      for (int ox = 0; ox < Wo; ++ox) {
        double s = 0.0;
        for (int a = 0; a < k; ++a) {
          const int iy = oy * stride + a - pad;
          if (iy < 0 || iy >= H) continue;
          for (int b = 0; b < k; ++b) {
            const int ix = ox * stride + b - pad;
            if (ix < 0 || ix >= W) continue;
            s += w[(c * k + a) * k + b] * in[(static_cast<std::size_t>(c) * H + iy) * W + ix];
          }
        }
        out[(static_cast<std::size_t>(c) * Ho + oy) * Wo + ox] = s;
      }
  const int in_id = input.id, w_id = weight.id;
  return input.tape->push(std::move(out), {in_id, w_id}, [=](Tape& t, int self) {
    const Tensor& gout = t.grad(self);
    const double* in = t.value(in_id).data();
    const double* w = t.value(w_id).data();
    Tensor* gin = t.grad_mut(in_id);
    Tensor* gw = t.grad_mut(w_id);
    for (int c = 0; c < C; ++c)
      for (int oy = 0; oy < Ho; ++oy)
        for (int ox = 0; ox < Wo; ++ox) {
          const double go = gout[(static_cast<std::size_t>(c) * Ho + oy) * Wo + ox];
          if (go == 0.0) continue;
          for (int a = 0; a < k; ++a) {
            const int iy = oy * stride + a - pad;
            if (iy < 0 || iy >= H) continue;
            for (int b = 0; b < k; ++b) {
              const int ix = ox * stride + b - pad;
              if (ix < 0 || ix >= W) continue;
              const std::size_t ii = (static_cast<std::size_t>(c) * H + iy) * W + ix;
              const std::size_t wi = static_cast<std::size_t>((c * k + a) * k + b);
              if (gw) (*gw)[wi] += go * in[ii];
              if (gin) (*gin)[ii] += go * w[wi];
            }
          }
        }
  });
}

Var add_channel_bias(Var x, Var bias) {
  require_same_tape(x, bias);
  const Shape& xs = x.shape();
  require(!xs.empty() && bias.shape().size() == 1 && bias.shape()[0] == xs[0],
          "add_channel_bias: bias " + shape_str(bias.shape()) + " does not match " + shape_str(xs));
  const std::size_t C = static_cast<std::size_t>(xs[0]);
  const std::size_t inner = x.value().size() / std::max<std::size_t>(C, 1);
  Tensor out = x.value();
  const double* b = bias.value().data();
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < inner; ++i) out[c * inner + i] += b[c];
  const int xid = x.id, bid = bias.id;
  return x.tape->push(std::move(out), {xid, bid}, [=](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    add_into(t.grad_mut(xid), g);
    if (Tensor* gb = t.grad_mut(bid))
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t i = 0; i < inner; ++i) (*gb)[c] += g[c * inner + i];
  });
}

Var depthwise_separable_block(Var input, Var depth_weight, Var point_weight, int stride, double slope) {
  Var h = leaky_relu(depthwise_conv2d(input, depth_weight, stride), slope);
  return leaky_relu(conv2d(h, point_weight, 1), slope);
}

Var leaky_relu(Var x, double slope) {
  if (slope < 0.0) throw Error("leaky_relu: slope must be >= 0");
  return elementwise(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Var sigmoid(Var x) {
  return elementwise(
      x,
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var global_max_pool_1d(Var x) {
  const Shape& s = x.shape();
  require(s.size() == 2 && s[1] >= 1, "global_max_pool_1d: input must be C x L with L >= 1, got " + shape_str(s));
  const int C = s[0], L = s[1];
  const Tensor& xv = x.value();
  Tensor out({C});
  std::vector<int> argmax(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    int best = 0;
    for (int l = 1; l < L; ++l)
      if (xv[static_cast<std::size_t>(c) * L + l] > xv[static_cast<std::size_t>(c) * L + best]) best = l;
    argmax[static_cast<std::size_t>(c)] = best;
    out[static_cast<std::size_t>(c)] = xv[static_cast<std::size_t>(c) * L + best];
  }
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [=, argmax = std::move(argmax)](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const Tensor& g = t.grad(self);
    for (int c = 0; c < C; ++c)
      (*gx)[static_cast<std::size_t>(c) * L + argmax[static_cast<std::size_t>(c)]] += g[static_cast<std::size_t>(c)];
  });
}

Var dense(Var x, Var weight, Var bias) {
  require_same_tape(x, weight);
  require_same_tape(x, bias);
  const Shape& ws = weight.shape();
  require(ws.size() == 2, "dense: weight must be m x n, got " + shape_str(ws));
  const int m = ws[0], n = ws[1];
  require(x.value().size() == static_cast<std::size_t>(n),
          "dense: input has " + std::to_string(x.value().size()) + " values, weight expects " + std::to_string(n));
  require(bias.value().size() == static_cast<std::size_t>(m), "dense: bias must have " + std::to_string(m) + " values");
  const double* w = weight.value().data();
  const double* xv = x.value().data();
  Tensor out({m});
  for (int i = 0; i < m; ++i)
    out[static_cast<std::size_t>(i)] =
        simd::dot(w + static_cast<std::size_t>(i) * n, xv, static_cast<std::size_t>(n)) + bias.value()[static_cast<std::size_t>(i)];
  const int xid = x.id, wid = weight.id, bid = bias.id;
  return x.tape->push(std::move(out), {xid, wid, bid}, [=](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    add_into(t.grad_mut(bid), g);
    if (Tensor* gw = t.grad_mut(wid)) {
      const double* xv = t.value(xid).data();
      for (int i = 0; i < m; ++i)
        simd::axpy(g[static_cast<std::size_t>(i)], xv, gw->data() + static_cast<std::size_t>(i) * n,
                   static_cast<std::size_t>(n));
    }
    if (Tensor* gx = t.grad_mut(xid)) {
      const double* w = t.value(wid).data();
      for (int i = 0; i < m; ++i)
        simd::axpy(g[static_cast<std::size_t>(i)], w + static_cast<std::size_t>(i) * n, gx->data(),
                   static_cast<std::size_t>(n));
    }
  });
}

Var concat(std::span<const Var> parts) {
  require(!parts.empty(), "concat: no inputs");
  Shape shape = parts.front().shape();
  require(!shape.empty(), "concat: inputs must have rank >= 1");
  Shape tail(shape.begin() + 1, shape.end());
  int total = 0;
  std::vector<int> ids;
  std::vector<std::size_t> sizes;
  for (const Var& p : parts) {
    require_same_tape(parts.front(), p);
    const Shape& s = p.shape();
    require(s.size() == shape.size() && Shape(s.begin() + 1, s.end()) == tail,
            "concat: " + shape_str(s) + " incompatible with " + shape_str(shape));
    total += s[0];
    ids.push_back(p.id);
    sizes.push_back(p.value().size());
  }
  shape[0] = total;
  Tensor out(shape);
  std::size_t off = 0;
  for (const Var& p : parts) {
    std::copy(p.value().storage().begin(), p.value().storage().end(), out.data() + off);
    off += p.value().size();
  }
  auto inputs = ids;
  return parts.front().tape->push(std::move(out), std::move(inputs), [ids, sizes](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    std::size_t off = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (Tensor* gp = t.grad_mut(ids[k])) simd::axpy(1.0, g.data() + off, gp->data(), sizes[k]);
      off += sizes[k];
    }
  });
}

Var spatial_mean(Var x) {
  const Shape& s = x.shape();
  require(s.size() == 3, "spatial_mean: input must be C x H x W, got " + shape_str(s));
  const int C = s[0];
  const std::size_t n = static_cast<std::size_t>(s[1]) * s[2];
  require(n > 0, "spatial_mean: empty spatial extent");
  Tensor out({C});
  const double* xv = x.value().data();
  for (int c = 0; c < C; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += xv[static_cast<std::size_t>(c) * n + i];
    out[static_cast<std::size_t>(c)] = acc / static_cast<double>(n);
  }
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [=](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const Tensor& g = t.grad(self);
    for (int c = 0; c < C; ++c) {
      const double v = g[static_cast<std::size_t>(c)] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) (*gx)[static_cast<std::size_t>(c) * n + i] += v;
    }
  });
}

Var tile(Var x, int length) {
  const Shape& s = x.shape();
  require(s.size() == 1 && length >= 1, "tile: input must be a vector and length >= 1");
  const int C = s[0];
  Tensor out({C, length});
  for (int c = 0; c < C; ++c)
    for (int l = 0; l < length; ++l) out[static_cast<std::size_t>(c) * length + l] = x.value()[static_cast<std::size_t>(c)];
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [=](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const Tensor& g = t.grad(self);
    for (int c = 0; c < C; ++c)
      for (int l = 0; l < length; ++l) (*gx)[static_cast<std::size_t>(c)] += g[static_cast<std::size_t>(c) * length + l];
  });
}

Var resample_columns(Var x, int length) {
  const Shape& s = x.shape();
  require(s.size() == 2 && s[1] >= 1 && length >= 1, "resample_columns: input must be C x P, length >= 1");
  const int C = s[0], P = s[1];
  // column l samples position l*(P-1)/(L-1) of the source
  std::vector<int> lo(static_cast<std::size_t>(length));
  std::vector<double> frac(static_cast<std::size_t>(length));
  for (int l = 0; l < length; ++l) {
    const double pos = length == 1 ? 0.0 : static_cast<double>(l) * (P - 1) / (length - 1);
    int i0 = std::min(static_cast<int>(std::floor(pos)), P - 1);
    lo[static_cast<std::size_t>(l)] = i0;
    frac[static_cast<std::size_t>(l)] = pos - i0;
  }
  Tensor out({C, length});
  const double* xv = x.value().data();
  for (int c = 0; c < C; ++c)
    for (int l = 0; l < length; ++l) {
      const int i0 = lo[static_cast<std::size_t>(l)];
      const int i1 = std::min(i0 + 1, P - 1);
      const double f = frac[static_cast<std::size_t>(l)];
      out[static_cast<std::size_t>(c) * length + l] =
          (1.0 - f) * xv[static_cast<std::size_t>(c) * P + i0] + f * xv[static_cast<std::size_t>(c) * P + i1];
    }
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [=](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const Tensor& g = t.grad(self);
    for (int c = 0; c < C; ++c)
      for (int l = 0; l < length; ++l) {
        const int i0 = lo[static_cast<std::size_t>(l)];
        const int i1 = std::min(i0 + 1, P - 1);
        const double f = frac[static_cast<std::size_t>(l)];
        const double go = g[static_cast<std::size_t>(c) * length + l];
        (*gx)[static_cast<std::size_t>(c) * P + i0] += (1.0 - f) * go;
        (*gx)[static_cast<std::size_t>(c) * P + i1] += f * go;
      }
  });
}

Var row(Var x, int r) {
  const Shape& s = x.shape();
  require(s.size() == 2 && r >= 0 && r < s[0], "row: index out of range for " + shape_str(s));
  const int L = s[1];
  Tensor out({L});
  std::copy_n(x.value().data() + static_cast<std::size_t>(r) * L, L, out.data());
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [=](Tape& t, int self) {
    if (Tensor* gx = t.grad_mut(xid))
      simd::axpy(1.0, t.grad(self).data(), gx->data() + static_cast<std::size_t>(r) * L, static_cast<std::size_t>(L));
  });
}

Var reshape(Var x, Shape shape) {
  Tensor out = x.value().reshaped(std::move(shape));
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [xid](Tape& t, int self) { add_into(t.grad_mut(xid), t.grad(self)); });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  require(a.shape() == b.shape(), "add: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Tensor out = a.value();
  simd::axpy(1.0, b.value().data(), out.data(), out.size());
  const int ai = a.id, bi = b.id;
  return a.tape->push(std::move(out), {ai, bi}, [=](Tape& t, int self) {
    add_into(t.grad_mut(ai), t.grad(self));
    add_into(t.grad_mut(bi), t.grad(self));
  });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b);
  require(a.shape() == b.shape(), "sub: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Tensor out = a.value();
  simd::axpy(-1.0, b.value().data(), out.data(), out.size());
  const int ai = a.id, bi = b.id;
  return a.tape->push(std::move(out), {ai, bi}, [=](Tape& t, int self) {
    add_into(t.grad_mut(ai), t.grad(self));
    if (Tensor* gb = t.grad_mut(bi)) simd::axpy(-1.0, t.grad(self).data(), gb->data(), gb->size());
  });
}

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  require(a.shape() == b.shape(), "mul: " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] * b.value()[i];
  const int ai = a.id, bi = b.id;
  return a.tape->push(std::move(out), {ai, bi}, [=](Tape& t, int self) {
    const Tensor& g = t.grad(self);
    if (Tensor* ga = t.grad_mut(ai))
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * t.value(bi)[i];
    if (Tensor* gb = t.grad_mut(bi))
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * t.value(ai)[i];
  });
}

Var scale(Var x, double factor) {
  return elementwise(
      x, [factor](double v) { return factor * v; }, [factor](double, double) { return factor; });
}

Var add_scalar(Var x, double c) {
  return elementwise(
      x, [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Var square(Var x) {
  return elementwise(
      x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var log_clamped(Var x, double lo, double hi) {
  return elementwise(
      x, [=](double v) { return std::log(std::clamp(v, lo, hi)); },
      [=](double v, double) { return (v < lo || v > hi) ? 0.0 : 1.0 / v; });
}

Var sum(Var x) {
  Tensor out = Tensor::scalar(0.0);
  for (double v : x.value().values()) out[0] += v;
  const int xid = x.id;
  return x.tape->push(std::move(out), {xid}, [xid](Tape& t, int self) {
    Tensor* gx = t.grad_mut(xid);
    if (!gx) return;
    const double g = t.grad(self)[0];
    for (auto& v : gx->values()) v += g;
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  require(n > 0, "mean: empty input");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

}  // namespace sf::nn
