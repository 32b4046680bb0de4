#include "sf/priors/prior_bank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sf/core/errors.hpp"

namespace sf::priors {

double GaussianPrior::sigma_x() const { return std::exp(log_sigma_x.value[0]); }
double GaussianPrior::sigma_y() const { return std::exp(log_sigma_y.value[0]); }

void GaussianPrior::for_each_parameter(const nn::ParameterVisitor& fn) {
  fn(mu_x);
  fn(mu_y);
  fn(log_sigma_x);
  fn(log_sigma_y);
}

namespace {

struct Sample {
  double value;
  double dx;  // (x - mx) / sx^2
  double dy;
  double zx;  // (x - mx)^2 / sx^2
  double zy;
};

Sample sample(double mx, double my, double sx, double sy, double x, double y) {
  const double ex = x - mx, ey = y - my;
  const double zx = ex * ex / (sx * sx), zy = ey * ey / (sy * sy);
  const double v = std::exp(-0.5 * (zx + zy)) / (2.0 * std::numbers::pi * sx * sy);
  return {v, ex / (sx * sx), ey / (sy * sy), zx, zy};
}

}  // namespace

double eval_gaussian(const GaussianPrior& p, double x, double y) {
  return sample(p.mean_x(), p.mean_y(), p.sigma_x(), p.sigma_y(), x, y).value;
}

void PriorBank::for_each_parameter(const nn::ParameterVisitor& fn) {
  for (auto& p : priors_) p.for_each_parameter(fn);
}

void PriorBank::clamp_means() {
  for (auto& p : priors_) {
    p.mu_x.value[0] = std::clamp(p.mu_x.value[0], 0.0, 1.0);
    p.mu_y.value[0] = std::clamp(p.mu_y.value[0], 0.0, 1.0);
  }
}

PriorBank init_bank(int n, bool trainable_means, const std::string& prefix) {
  const int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(std::max(n, 0)))));
  if (n < 1 || g * g != n) throw NotSquare("prior count " + std::to_string(n) + " is not a perfect square");
  const double log_sigma = std::log(0.15);
  std::vector<GaussianPrior> priors;
  priors.reserve(static_cast<std::size_t>(n));
  auto grid = [g](int k) { return g == 1 ? 0.5 : 0.125 + 0.75 * k / (g - 1); };
  for (int i = 0; i < n; ++i) {
    const std::string base = prefix + "." + std::to_string(i) + ".";
    const int row = i / g, col = i % g;
    GaussianPrior p{
        nn::Parameter(base + "mu_x", nn::Tensor::scalar(grid(col)), trainable_means),
        nn::Parameter(base + "mu_y", nn::Tensor::scalar(grid(row)), trainable_means),
        nn::Parameter(base + "log_sigma_x", nn::Tensor::scalar(log_sigma), !trainable_means),
        nn::Parameter(base + "log_sigma_y", nn::Tensor::scalar(log_sigma), !trainable_means),
    };
    priors.push_back(std::move(p));
  }
  return PriorBank(std::move(priors));
}

nn::Tensor render_bank(const PriorBank& bank, int h, int w) {
  if (h < 1 || w < 1) throw ShapeMismatch("render_bank: grid must be at least 1 x 1");
  const int N = static_cast<int>(bank.size());
  nn::Tensor out({N, h, w});
  for (int n = 0; n < N; ++n) {
    const auto& p = bank[static_cast<std::size_t>(n)];
    const double mx = p.mean_x(), my = p.mean_y(), sx = p.sigma_x(), sy = p.sigma_y();
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        out[(static_cast<std::size_t>(n) * h + r) * w + c] =
            sample(mx, my, sx, sy, (c + 0.5) / w, (r + 0.5) / h).value;
  }
  return out;
}

nn::Var render_bank(nn::Tape& tape, PriorBank& bank, int h, int w, bool track) {
  nn::Tensor out = render_bank(static_cast<const PriorBank&>(bank), h, w);
  const int N = static_cast<int>(bank.size());
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(4 * N));
  bank.for_each_parameter([&](nn::Parameter& p) { ids.push_back(tape.param(p, track).id); });
  auto inputs = ids;
  return tape.push(std::move(out), std::move(inputs), [ids, N, h, w](nn::Tape& t, int self) {
    const nn::Tensor& g = t.grad(self);
    for (int n = 0; n < N; ++n) {
      const auto id = [&](int f) { return ids[static_cast<std::size_t>(4 * n + f)]; };
      const double mx = t.value(id(0))[0], my = t.value(id(1))[0];
      const double sx = std::exp(t.value(id(2))[0]), sy = std::exp(t.value(id(3))[0]);
      double gmx = 0, gmy = 0, gsx = 0, gsy = 0;
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
          const double go = g[(static_cast<std::size_t>(n) * h + r) * w + c];
          if (go == 0.0) continue;
          const Sample s = sample(mx, my, sx, sy, (c + 0.5) / w, (r + 0.5) / h);
          const double gv = go * s.value;
          gmx += gv * s.dx;
          gmy += gv * s.dy;
          gsx += gv * (s.zx - 1.0);
          gsy += gv * (s.zy - 1.0);
        }
      const double grads[4] = {gmx, gmy, gsx, gsy};
      for (int f = 0; f < 4; ++f)
        if (nn::Tensor* gp = t.grad_mut(id(f))) (*gp)[0] += grads[f];
    }
  });
}

}  // namespace sf::priors
