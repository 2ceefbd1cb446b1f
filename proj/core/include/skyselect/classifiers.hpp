#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "skyselect/dataset.hpp"

namespace skyselect {

enum class ModelKind { kSvm, kKnn, kLogReg, kGbm, kDtree };

const std::array<ModelKind, 5>& all_model_kinds();
std::string model_kind_name(ModelKind k);           // "svm", "knn", "lr", "lgbm", "dtree"
ModelKind parse_model_kind(std::string_view text);  // accepts the names above

// Per-column affine scaling fitted on training rows: (x - mean) / sd with
// population SD; near-constant columns get scale 1 so they map to ~0.
struct Standardizer {
  std::vector<double> mean, scale;
  void fit(const FeatureMatrix& m);
  std::vector<double> apply(const std::vector<double>& row) const;
};

// A trained binary classifier. score() is the model's native decision value
// (SVM margin; probability-like value for the others); predict() applies the
// decision threshold: score > 0 for SVM, score > 0.5 otherwise, so exact ties
// resolve to class 0.
class Model {
 public:
  virtual ~Model() = default;
  virtual ModelKind kind() const = 0;
  virtual double score(const std::vector<double>& row) const = 0;
  virtual double threshold() const { return 0.5; }
  int predict(const std::vector<double>& row) const { return score(row) > threshold() ? 1 : 0; }
  virtual void save(std::ostream& out) const = 0;
};

// ---------------------------------------------------------------------------
// Support vector machine trained by sequential minimal optimization on the
// dual (box constraint C, equality sum alpha_i y_i = 0), most-violating-pair
// working set selection, KKT gap tolerance as the stopping rule.
struct SvmOptions {
  enum class Kernel { kRbf, kLinear };
  double C = 1.0;
  Kernel kernel = Kernel::kRbf;
  // gamma <= 0 means 1 / (n_features * variance of the training matrix
  // entries as seen by the kernel).
  double gamma = 0.0;
  double tol = 1e-3;
  size_t max_iter = 1000000;
  bool standardize = true;
};

class SvmModel : public Model {
 public:
  static std::unique_ptr<SvmModel> train(const FeatureMatrix& data, const SvmOptions& opts = {});

  ModelKind kind() const override { return ModelKind::kSvm; }
  double threshold() const override { return 0.0; }
  double score(const std::vector<double>& row) const override;
  void save(std::ostream& out) const override;

  // Introspection (tests, recursive elimination).
  double dual_objective() const { return dual_objective_; }
  double max_kkt_violation() const { return kkt_violation_; }
  double sum_alpha_y() const;
  double bias() const { return bias_; }
  double gamma_value() const { return gamma_; }
  size_t iterations() const { return iterations_; }
  const std::vector<double>& alpha() const { return alpha_; }  // per training row, in row order
  // Primal weights in the standardized feature space; linear kernel only.
  std::vector<double> linear_weights() const;

 private:
  friend struct ModelReader;
  SvmOptions::Kernel kernel_ = SvmOptions::Kernel::kRbf;
  double gamma_ = 0.0;
  double bias_ = 0.0;
  double dual_objective_ = 0.0;
  double kkt_violation_ = 0.0;
  size_t iterations_ = 0;
  Standardizer scaler_;
  std::vector<double> sv_;        // n_sv x d, standardized
  std::vector<double> sv_coef_;   // alpha_i * y_i per support vector
  std::vector<double> alpha_;     // all alphas (training order), for diagnostics
  std::vector<int> y_;            // +-1 per training row
  size_t dim_ = 0;
  double kernel_eval(const double* a, const std::vector<double>& b) const;
};

// ---------------------------------------------------------------------------
struct KnnOptions {
  size_t k = 5;  // capped at the training-set size
};

class KnnModel : public Model {
 public:
  static std::unique_ptr<KnnModel> train(const FeatureMatrix& data, const KnnOptions& opts = {});
  ModelKind kind() const override { return ModelKind::kKnn; }
  double score(const std::vector<double>& row) const override;  // expert share among k nearest
  void save(std::ostream& out) const override;

 private:
  friend struct ModelReader;
  size_t k_ = 5;
  Standardizer scaler_;
  std::vector<double> points_;  // n x d standardized
  std::vector<int> labels_;
  size_t dim_ = 0;
};

// ---------------------------------------------------------------------------
// L2-regularized logistic regression, gradient ascent with backtracking line
// search on the penalized log-likelihood until the gradient norm drops under
// grad_tol (or max_iter).
struct LogRegOptions {
  double C = 1.0;  // inverse penalty strength; lambda = 1 / C
  double grad_tol = 1e-4;
  size_t max_iter = 1000;
};

class LogRegModel : public Model {
 public:
  static std::unique_ptr<LogRegModel> train(const FeatureMatrix& data, const LogRegOptions& opts = {});
  ModelKind kind() const override { return ModelKind::kLogReg; }
  double score(const std::vector<double>& row) const override;  // sigmoid(w.x + b)
  void save(std::ostream& out) const override;

  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }
  size_t iterations() const { return iterations_; }

 private:
  friend struct ModelReader;
  Standardizer scaler_;
  std::vector<double> w_;
  double b_ = 0.0;
  size_t iterations_ = 0;
};

// Penalized log-likelihood sum_i [y_i log s_i + (1-y_i) log(1-s_i)] -
// lambda/2 |w|^2 with s = sigmoid(w.x + b); bias unpenalized. X is row-major
// n x d with rows as given (no internal scaling). If grad is non-null it
// receives d+1 entries: d/dw then d/db.
double logreg_objective(const std::vector<double>& X, size_t n, size_t d, const std::vector<int>& y,
                        const std::vector<double>& w, double b, double lambda, std::vector<double>* grad);

// ---------------------------------------------------------------------------
// CART with Gini impurity grown to purity (subject to min_samples_split);
// deterministic tie-breaks: best decrease, then lower feature index, then
// lower threshold.
struct DtreeOptions {
  size_t min_samples_split = 2;
  size_t min_samples_leaf = 1;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1, right = -1;
  size_t n = 0, n_pos = 0;
  double gini = 0.0;
  double value = 0.0;  // leaf probability of class 1
};

class DtreeModel : public Model {
 public:
  static std::unique_ptr<DtreeModel> train(const FeatureMatrix& data, const DtreeOptions& opts = {});
  ModelKind kind() const override { return ModelKind::kDtree; }
  double score(const std::vector<double>& row) const override;  // leaf class-1 share
  void save(std::ostream& out) const override;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  // Gini importance per training column, normalized to sum 1 when the tree
  // has at least one split.
  std::vector<double> importances() const;

 private:
  friend struct ModelReader;
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_raw_;
  size_t dim_ = 0;
};

// ---------------------------------------------------------------------------
// Gradient boosting with logistic loss: leaf-wise regression trees capped at
// max_leaves leaves and min_leaf samples per leaf, Newton leaf values,
// constant learning rate. With fewer than 2*min_leaf training rows every
// round degenerates to the intercept, i.e. the class-prior log-odds.
struct GbmOptions {
  size_t rounds = 100;
  double learning_rate = 0.1;
  size_t max_leaves = 31;
  size_t min_leaf = 20;
  double min_hessian = 1e-3;
};

class GbmModel : public Model {
 public:
  static std::unique_ptr<GbmModel> train(const FeatureMatrix& data, const GbmOptions& opts = {});
  ModelKind kind() const override { return ModelKind::kGbm; }
  double score(const std::vector<double>& row) const override;  // sigmoid of the boosted sum
  void save(std::ostream& out) const override;

  size_t tree_count() const { return trees_.size(); }
  double base_score() const { return base_; }

 private:
  friend struct ModelReader;
  struct GbmNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;
  };
  double base_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<std::vector<GbmNode>> trees_;
  size_t dim_ = 0;
};

// ---------------------------------------------------------------------------
struct TrainOptions {
  SvmOptions svm;
  KnnOptions knn;
  LogRegOptions logreg;
  DtreeOptions dtree;
  GbmOptions gbm;
};

std::unique_ptr<Model> train_model(ModelKind kind, const FeatureMatrix& data, const TrainOptions& opts = {});

// Self-describing text format recording the feature columns the model was
// trained on; load restores a model whose predictions match exactly.
void save_model_file(const std::string& path, const Model& model, const std::vector<std::string>& columns);

struct LoadedModel {
  std::unique_ptr<Model> model;
  std::vector<std::string> columns;
};
LoadedModel load_model_file(const std::string& path);

}  // namespace skyselect
