#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "train_util.hpp"

namespace skyselect {

namespace {

// Dual coordinate pair update (sequential minimal optimization). Labels are
// +-1, Q_ij = y_i y_j K_ij, gradient G = Q alpha - 1. The working pair is the
// most violating one; convergence when the KKT gap m - M falls to tol.
struct SmoState {
  size_t n = 0;
  double C = 1.0;
  const std::vector<double>* K = nullptr;  // n x n kernel matrix
  std::vector<int> y;
  std::vector<double> alpha, grad;

  double k(size_t i, size_t j) const { return (*K)[i * n + j]; }

  bool in_up(size_t i) const { return (y[i] > 0 && alpha[i] < C) || (y[i] < 0 && alpha[i] > 0); }
  bool in_low(size_t i) const { return (y[i] > 0 && alpha[i] > 0) || (y[i] < 0 && alpha[i] < C); }

  // Returns the current gap and the argmax/argmin pair.
  double select_pair(size_t* out_i, size_t* out_j) const {
    double m = -std::numeric_limits<double>::infinity();
    double M = std::numeric_limits<double>::infinity();
    size_t bi = n, bj = n;
    for (size_t i = 0; i < n; ++i) {
      const double v = -y[i] * grad[i];
      if (in_up(i) && v > m) { m = v; bi = i; }
      if (in_low(i) && v < M) { M = v; bj = i; }
    }
    *out_i = bi;
    *out_j = bj;
    return m - M;
  }
};

}  // namespace

void Standardizer::fit(const FeatureMatrix& m) {
  const size_t n = m.rows(), d = m.cols();
  mean.assign(d, 0.0);
  scale.assign(d, 1.0);
  if (n == 0) return;
  for (size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += m.at(i, j);
    mean[j] = s / static_cast<double>(n);
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double dv = m.at(i, j) - mean[j];
      ss += dv * dv;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    scale[j] = sd > 1e-12 ? sd : 1.0;
  }
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
  if (row.size() != mean.size())
    throw ValidationError(strprintf("standardizer: expected %zu features, got %zu", mean.size(), row.size()));
  std::vector<double> out(row.size());
  for (size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
  return out;
}

std::unique_ptr<SvmModel> SvmModel::train(const FeatureMatrix& data, const SvmOptions& opts) {
  detail::require_trainable(data, "svm");
  if (opts.C <= 0.0) throw ValidationError("svm: C must be positive");
  if (opts.tol <= 0.0) throw ValidationError("svm: tol must be positive");

  auto model = std::unique_ptr<SvmModel>(new SvmModel());
  const size_t n = data.rows(), d = data.cols();
  model->dim_ = d;
  model->kernel_ = opts.kernel;

  std::vector<double> X;
  if (opts.standardize) {
    X = detail::fit_standardized(model->scaler_, data);
  } else {
    model->scaler_.mean.assign(d, 0.0);
    model->scaler_.scale.assign(d, 1.0);
    X = data.values;
  }

  double gamma = opts.gamma;
  if (gamma <= 0.0) {
    // 1 / (d * var) over all matrix entries, matching the usual "scale" rule.
    double s = 0.0, ss = 0.0;
    for (double v : X) { s += v; ss += v * v; }
    const double cnt = static_cast<double>(X.size());
    const double var = ss / cnt - (s / cnt) * (s / cnt);
    gamma = var > 1e-12 ? 1.0 / (static_cast<double>(d) * var) : 1.0;
  }
  model->gamma_ = gamma;

  std::vector<double> K(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double v;
      if (opts.kernel == SvmOptions::Kernel::kLinear) {
        double dot = 0.0;
        for (size_t c = 0; c < d; ++c) dot += X[i * d + c] * X[j * d + c];
        v = dot;
      } else {
        double sq = 0.0;
        for (size_t c = 0; c < d; ++c) {
          const double diff = X[i * d + c] - X[j * d + c];
          sq += diff * diff;
        }
        v = std::exp(-gamma * sq);
      }
      K[i * n + j] = v;
      K[j * n + i] = v;
    }
  }

  SmoState smo;
  smo.n = n;
  smo.C = opts.C;
  smo.K = &K;
  smo.y.resize(n);
  for (size_t i = 0; i < n; ++i) smo.y[i] = data.labels[i] == 1 ? 1 : -1;
  smo.alpha.assign(n, 0.0);
  smo.grad.assign(n, -1.0);  // Q*0 - 1

  size_t iter = 0;
  double gap = 0.0;
  for (;; ++iter) {
    size_t i, j;
    gap = smo.select_pair(&i, &j);
    if (gap <= opts.tol) break;
    if (iter >= opts.max_iter)
      throw ValidationError(strprintf("svm: no convergence after %zu iterations (gap %.3e)", iter, gap));

    const int yi = smo.y[i], yj = smo.y[j];
    const double ai_old = smo.alpha[i], aj_old = smo.alpha[j];
    double L, H;
    if (yi != yj) {
      L = std::max(0.0, aj_old - ai_old);
      H = std::min(opts.C, opts.C + aj_old - ai_old);
    } else {
      L = std::max(0.0, ai_old + aj_old - opts.C);
      H = std::min(opts.C, ai_old + aj_old);
    }
    double eta = smo.k(i, i) + smo.k(j, j) - 2.0 * smo.k(i, j);
    if (eta < 1e-12) eta = 1e-12;
    // E_i - E_j from the gradient: y_k G_k = f~(x_k) y_k - ... reduces to
    // f~_i - y_i - (f~_j - y_j) = y_i G_i - y_j G_j with f~ the biasless score.
    const double Ei_minus_Ej = yi * smo.grad[i] - yj * smo.grad[j];
    double aj = aj_old + yj * Ei_minus_Ej / eta;
    aj = std::clamp(aj, L, H);
    // Snap to the exact box bounds so the up/low membership tests stay
    // consistent; otherwise rounding leaves an alpha a few ulps inside the
    // box and the same pair gets reselected with no room to move.
    const double snap = 1e-12 * std::max(1.0, opts.C);
    if (aj < snap) aj = 0.0;
    else if (aj > opts.C - snap) aj = opts.C;
    double ai = ai_old + yi * yj * (aj_old - aj);
    if (ai < snap) ai = 0.0;
    else if (ai > opts.C - snap) ai = opts.C;
    const double dai = ai - ai_old, daj = aj - aj_old;
    if (std::abs(dai) < 1e-14 && std::abs(daj) < 1e-14) {
      // Safety net only: a most-violating pair with snapped alphas always
      // has room to move, so this cannot fire short of pathological input.
      break;
    }
    smo.alpha[i] = ai;
    smo.alpha[j] = aj;
    for (size_t t = 0; t < n; ++t)
      smo.grad[t] += smo.y[t] * (yi * smo.k(t, i) * dai + yj * smo.k(t, j) * daj);
  }
  model->iterations_ = iter;
  {
    size_t i, j;
    model->kkt_violation_ = std::max(0.0, smo.select_pair(&i, &j));
  }

  // Bias: mean of y_i - f~_i over free support vectors, which equals
  // -y_i G_i there; otherwise the midpoint of the feasible interval.
  double free_sum = 0.0;
  size_t free_count = 0;
  double up_max = -std::numeric_limits<double>::infinity();
  double low_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const double v = -smo.y[i] * smo.grad[i];
    if (smo.alpha[i] > 1e-12 && smo.alpha[i] < opts.C - 1e-12) {
      free_sum += v;
      ++free_count;
    }
    if (smo.in_up(i)) up_max = std::max(up_max, v);
    if (smo.in_low(i)) low_min = std::min(low_min, v);
  }
  model->bias_ = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (up_max + low_min);

  // G = Q*alpha - 1, so alpha.(G - 1) = alpha'Q alpha - 2*sum(alpha); half of
  // its negation is the maximized dual W = sum(alpha) - alpha'Q alpha / 2.
  double obj = 0.0;
  for (size_t i = 0; i < n; ++i) obj += smo.alpha[i] * (smo.grad[i] - 1.0);
  model->dual_objective_ = -0.5 * obj;

  model->alpha_ = smo.alpha;
  model->y_ = smo.y;
  for (size_t i = 0; i < n; ++i) {
    if (smo.alpha[i] > 1e-12) {
      model->sv_coef_.push_back(smo.alpha[i] * smo.y[i]);
      for (size_t c = 0; c < d; ++c) model->sv_.push_back(X[i * d + c]);
    }
  }
  return model;
}

double SvmModel::kernel_eval(const double* a, const std::vector<double>& b) const {
  if (kernel_ == SvmOptions::Kernel::kLinear) {
    double dot = 0.0;
    for (size_t c = 0; c < dim_; ++c) dot += a[c] * b[c];
    return dot;
  }
  double sq = 0.0;
  for (size_t c = 0; c < dim_; ++c) {
    const double diff = a[c] - b[c];
    sq += diff * diff;
  }
  return std::exp(-gamma_ * sq);
}

double SvmModel::score(const std::vector<double>& row) const {
  const std::vector<double> x = scaler_.apply(row);
  double f = bias_;
  for (size_t s = 0; s < sv_coef_.size(); ++s) f += sv_coef_[s] * kernel_eval(&sv_[s * dim_], x);
  return f;
}

double SvmModel::sum_alpha_y() const {
  double s = 0.0;
  for (size_t i = 0; i < alpha_.size(); ++i) s += alpha_[i] * y_[i];
  return s;
}

std::vector<double> SvmModel::linear_weights() const {
  if (kernel_ != SvmOptions::Kernel::kLinear)
    throw ValidationError("svm: primal weights are only defined for the linear kernel");
  std::vector<double> w(dim_, 0.0);
  for (size_t s = 0; s < sv_coef_.size(); ++s)
    for (size_t c = 0; c < dim_; ++c) w[c] += sv_coef_[s] * sv_[s * dim_ + c];
  return w;
}

void SvmModel::save(std::ostream& out) const {
  out << "kernel " << (kernel_ == SvmOptions::Kernel::kLinear ? "linear" : "rbf") << "\n";
  out << "gamma " << strprintf("%.17g", gamma_) << "\n";
  out << "bias " << strprintf("%.17g", bias_) << "\n";
  out << "dim " << dim_ << "\n";
  out << "mean";
  for (double v : scaler_.mean) out << ' ' << strprintf("%.17g", v);
  out << "\nscale";
  for (double v : scaler_.scale) out << ' ' << strprintf("%.17g", v);
  out << "\nnsv " << sv_coef_.size() << "\n";
  for (size_t s = 0; s < sv_coef_.size(); ++s) {
    out << strprintf("%.17g", sv_coef_[s]);
    for (size_t c = 0; c < dim_; ++c) out << ' ' << strprintf("%.17g", sv_[s * dim_ + c]);
    out << "\n";
  }
}

}  // namespace skyselect
