#include <cmath>
#include <ostream>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "train_util.hpp"

namespace skyselect {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(sigmoid(z)) without overflow at either tail.
double log_sigmoid(double z) {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

}  // namespace

double logreg_objective(const std::vector<double>& X, size_t n, size_t d, const std::vector<int>& y,
                        const std::vector<double>& w, double b, double lambda, std::vector<double>* grad) {
  if (grad) grad->assign(d + 1, 0.0);
  double ll = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double z = b;
    for (size_t j = 0; j < d; ++j) z += w[j] * X[i * d + j];
    // y log s + (1-y) log(1-s), with log(1-s(z)) = log(s(-z)).
    ll += y[i] == 1 ? log_sigmoid(z) : log_sigmoid(-z);
    if (grad) {
      const double resid = static_cast<double>(y[i]) - sigmoid(z);
      for (size_t j = 0; j < d; ++j) (*grad)[j] += resid * X[i * d + j];
      (*grad)[d] += resid;
    }
  }
  double penalty = 0.0;
  for (size_t j = 0; j < d; ++j) penalty += w[j] * w[j];
  ll -= 0.5 * lambda * penalty;
  if (grad)
    for (size_t j = 0; j < d; ++j) (*grad)[j] -= lambda * w[j];
  return ll;
}

std::unique_ptr<LogRegModel> LogRegModel::train(const FeatureMatrix& data, const LogRegOptions& opts) {
  detail::require_trainable(data, "logreg");
  if (opts.C <= 0.0) throw ValidationError("logreg: C must be positive");
  auto model = std::unique_ptr<LogRegModel>(new LogRegModel());
  const size_t n = data.rows(), d = data.cols();
  const double lambda = 1.0 / opts.C;
  const std::vector<double> X = detail::fit_standardized(model->scaler_, data);

  std::vector<double> w(d, 0.0), grad;
  double b = 0.0;
  double value = logreg_objective(X, n, d, data.labels, w, b, lambda, &grad);
  size_t iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    double gnorm = 0.0;
    for (double g : grad) gnorm += g * g;
    gnorm = std::sqrt(gnorm);
    if (gnorm < opts.grad_tol) break;

    // Ascent along the gradient with Armijo backtracking.
    double step = 1.0;
    const double slope = gnorm * gnorm;
    std::vector<double> w_try(d);
    double b_try = 0.0, value_try = 0.0;
    bool moved = false;
    for (int half = 0; half < 60; ++half) {
      for (size_t j = 0; j < d; ++j) w_try[j] = w[j] + step * grad[j];
      b_try = b + step * grad[d];
      value_try = logreg_objective(X, n, d, data.labels, w_try, b_try, lambda, nullptr);
      if (value_try >= value + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no uphill step at machine precision
    w.swap(w_try);
    b = b_try;
    value = logreg_objective(X, n, d, data.labels, w, b, lambda, &grad);
  }
  model->w_ = std::move(w);
  model->b_ = b;
  model->iterations_ = iter;
  return model;
}

double LogRegModel::score(const std::vector<double>& row) const {
  const std::vector<double> x = scaler_.apply(row);
  double z = b_;
  for (size_t j = 0; j < w_.size(); ++j) z += w_[j] * x[j];
  return sigmoid(z);
}

void LogRegModel::save(std::ostream& out) const {
  out << "dim " << w_.size() << "\n";
  out << "mean";
  for (double v : scaler_.mean) out << ' ' << strprintf("%.17g", v);
  out << "\nscale";
  for (double v : scaler_.scale) out << ' ' << strprintf("%.17g", v);
  out << "\nbias " << strprintf("%.17g", b_) << "\n";
  out << "weights";
  for (double v : w_) out << ' ' << strprintf("%.17g", v);
  out << "\n";
}

}  // namespace skyselect
