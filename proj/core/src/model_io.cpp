#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/csv.hpp"

namespace skyselect {

const std::array<ModelKind, 5>& all_model_kinds() {
  static const std::array<ModelKind, 5> kinds = {ModelKind::kSvm, ModelKind::kKnn, ModelKind::kLogReg,
                                                 ModelKind::kGbm, ModelKind::kDtree};
  return kinds;
}

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kSvm: return "svm";
    case ModelKind::kKnn: return "knn";
    case ModelKind::kLogReg: return "lr";
    case ModelKind::kGbm: return "lgbm";
    case ModelKind::kDtree: return "dtree";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  const std::string t = lower(trim(std::string(text)));
  for (ModelKind k : all_model_kinds())
    if (t == model_kind_name(k)) return k;
  throw ValidationError(strprintf("unknown model '%s' (expected svm, knn, lr, lgbm or dtree)", t.c_str()));
}

std::unique_ptr<Model> train_model(ModelKind kind, const FeatureMatrix& data, const TrainOptions& opts) {
  switch (kind) {
    case ModelKind::kSvm: return SvmModel::train(data, opts.svm);
    case ModelKind::kKnn: return KnnModel::train(data, opts.knn);
    case ModelKind::kLogReg: return LogRegModel::train(data, opts.logreg);
    case ModelKind::kGbm: return GbmModel::train(data, opts.gbm);
    case ModelKind::kDtree: return DtreeModel::train(data, opts.dtree);
  }
  throw ValidationError("unknown model kind");
}

namespace {

class LineSource {
 public:
  LineSource(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  // Next non-empty line split on single spaces; first token must equal key.
  std::vector<std::string> expect(const std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> tokens = split(line, ' ');
      if (tokens.empty() || tokens[0] != key)
        throw DataError(strprintf("%s:%zu: expected '%s', found '%s'", path_.c_str(), line_no_,
                                  key.c_str(), tokens.empty() ? "" : tokens[0].c_str()));
      return tokens;
    }
    throw DataError(strprintf("%s: unexpected end of file, expected '%s'", path_.c_str(), key.c_str()));
  }

  // Raw next line (for untagged rows such as support vectors).
  std::vector<std::string> row() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return split(line, ' ');
    }
    throw DataError(strprintf("%s: unexpected end of file", path_.c_str()));
  }

  double num(const std::string& text, const char* what) {
    return parse_double_cell(text, strprintf("%s:%zu: %s", path_.c_str(), line_no_, what));
  }
  long integer(const std::string& text, const char* what) {
    return parse_long_cell(text, strprintf("%s:%zu: %s", path_.c_str(), line_no_, what));
  }
  size_t line_no() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::istream& in_;
  std::string path_;
  size_t line_no_ = 0;
};

std::vector<double> parse_values(LineSource& src, const std::vector<std::string>& tokens, size_t count,
                                 const char* what) {
  if (tokens.size() != count + 1)
    throw DataError(strprintf("%s:%zu: expected %zu %s values, found %zu", src.path().c_str(),
                              src.line_no(), count, what, tokens.size() - 1));
  std::vector<double> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = src.num(tokens[i + 1], what);
  return out;
}

}  // namespace

struct ModelReader {
  static std::unique_ptr<Model> read(LineSource& src, const std::string& kind_name) {
    if (kind_name == "svm") return read_svm(src);
    if (kind_name == "knn") return read_knn(src);
    if (kind_name == "lr") return read_logreg(src);
    if (kind_name == "dtree") return read_dtree(src);
    if (kind_name == "lgbm") return read_gbm(src);
    throw DataError(strprintf("%s: unknown model kind '%s'", src.path().c_str(), kind_name.c_str()));
  }

  static std::unique_ptr<Model> read_svm(LineSource& src) {
    auto m = std::unique_ptr<SvmModel>(new SvmModel());
    const std::string kernel = src.expect("kernel").at(1);
    if (kernel == "linear") m->kernel_ = SvmOptions::Kernel::kLinear;
    else if (kernel == "rbf") m->kernel_ = SvmOptions::Kernel::kRbf;
    else throw DataError(strprintf("%s: unknown kernel '%s'", src.path().c_str(), kernel.c_str()));
    m->gamma_ = src.num(src.expect("gamma").at(1), "gamma");
    m->bias_ = src.num(src.expect("bias").at(1), "bias");
    m->dim_ = static_cast<size_t>(src.integer(src.expect("dim").at(1), "dim"));
    m->scaler_.mean = parse_values(src, src.expect("mean"), m->dim_, "mean");
    m->scaler_.scale = parse_values(src, src.expect("scale"), m->dim_, "scale");
    const size_t nsv = static_cast<size_t>(src.integer(src.expect("nsv").at(1), "nsv"));
    m->sv_coef_.resize(nsv);
    m->sv_.resize(nsv * m->dim_);
    for (size_t s = 0; s < nsv; ++s) {
      const std::vector<std::string> tokens = src.row();
      if (tokens.size() != m->dim_ + 1)
        throw DataError(strprintf("%s:%zu: support vector needs %zu fields", src.path().c_str(),
                                  src.line_no(), m->dim_ + 1));
      m->sv_coef_[s] = src.num(tokens[0], "sv coefficient");
      for (size_t c = 0; c < m->dim_; ++c) m->sv_[s * m->dim_ + c] = src.num(tokens[c + 1], "sv");
    }
    return m;
  }

  static std::unique_ptr<Model> read_knn(LineSource& src) {
    auto m = std::unique_ptr<KnnModel>(new KnnModel());
    m->k_ = static_cast<size_t>(src.integer(src.expect("k").at(1), "k"));
    m->dim_ = static_cast<size_t>(src.integer(src.expect("dim").at(1), "dim"));
    m->scaler_.mean = parse_values(src, src.expect("mean"), m->dim_, "mean");
    m->scaler_.scale = parse_values(src, src.expect("scale"), m->dim_, "scale");
    const size_t n = static_cast<size_t>(src.integer(src.expect("n").at(1), "n"));
    m->labels_.resize(n);
    m->points_.resize(n * m->dim_);
    for (size_t i = 0; i < n; ++i) {
      const std::vector<std::string> tokens = src.row();
      if (tokens.size() != m->dim_ + 1)
        throw DataError(
            strprintf("%s:%zu: point needs %zu fields", src.path().c_str(), src.line_no(), m->dim_ + 1));
      m->labels_[i] = static_cast<int>(src.integer(tokens[0], "label"));
      for (size_t c = 0; c < m->dim_; ++c) m->points_[i * m->dim_ + c] = src.num(tokens[c + 1], "point");
    }
    return m;
  }

  static std::unique_ptr<Model> read_logreg(LineSource& src) {
    auto m = std::unique_ptr<LogRegModel>(new LogRegModel());
    const size_t dim = static_cast<size_t>(src.integer(src.expect("dim").at(1), "dim"));
    m->scaler_.mean = parse_values(src, src.expect("mean"), dim, "mean");
    m->scaler_.scale = parse_values(src, src.expect("scale"), dim, "scale");
    m->b_ = src.num(src.expect("bias").at(1), "bias");
    m->w_ = parse_values(src, src.expect("weights"), dim, "weights");
    return m;
  }

  static std::unique_ptr<Model> read_dtree(LineSource& src) {
    auto m = std::unique_ptr<DtreeModel>(new DtreeModel());
    m->dim_ = static_cast<size_t>(src.integer(src.expect("dim").at(1), "dim"));
    const size_t count = static_cast<size_t>(src.integer(src.expect("nodes").at(1), "nodes"));
    m->nodes_.resize(count);
    for (size_t i = 0; i < count; ++i) {
      const std::vector<std::string> tokens = src.row();
      if (tokens.size() != 8)
        throw DataError(strprintf("%s:%zu: tree node needs 8 fields", src.path().c_str(), src.line_no()));
      TreeNode& node = m->nodes_[i];
      node.feature = static_cast<int>(src.integer(tokens[0], "feature"));
      node.threshold = src.num(tokens[1], "threshold");
      node.left = static_cast<int>(src.integer(tokens[2], "left"));
      node.right = static_cast<int>(src.integer(tokens[3], "right"));
      node.n = static_cast<size_t>(src.integer(tokens[4], "n"));
      node.n_pos = static_cast<size_t>(src.integer(tokens[5], "n_pos"));
      node.gini = src.num(tokens[6], "gini");
      node.value = src.num(tokens[7], "value");
    }
    m->importance_raw_ = parse_values(src, src.expect("importance"), m->dim_, "importance");
    return m;
  }

  static std::unique_ptr<Model> read_gbm(LineSource& src) {
    auto m = std::unique_ptr<GbmModel>(new GbmModel());
    m->dim_ = static_cast<size_t>(src.integer(src.expect("dim").at(1), "dim"));
    m->base_ = src.num(src.expect("base").at(1), "base");
    m->learning_rate_ = src.num(src.expect("learning_rate").at(1), "learning_rate");
    const size_t trees = static_cast<size_t>(src.integer(src.expect("trees").at(1), "trees"));
    m->trees_.resize(trees);
    for (size_t t = 0; t < trees; ++t) {
      const size_t count = static_cast<size_t>(src.integer(src.expect("tree").at(1), "tree"));
      m->trees_[t].resize(count);
      for (size_t i = 0; i < count; ++i) {
        const std::vector<std::string> tokens = src.row();
        if (tokens.size() != 5)
          throw DataError(strprintf("%s:%zu: tree node needs 5 fields", src.path().c_str(), src.line_no()));
        GbmModel::GbmNode& node = m->trees_[t][i];
        node.feature = static_cast<int>(src.integer(tokens[0], "feature"));
        node.threshold = src.num(tokens[1], "threshold");
        node.left = static_cast<int>(src.integer(tokens[2], "left"));
        node.right = static_cast<int>(src.integer(tokens[3], "right"));
        node.value = src.num(tokens[4], "value");
      }
    }
    return m;
  }
};

void save_model_file(const std::string& path, const Model& model, const std::vector<std::string>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(strprintf("cannot open '%s' for writing", path.c_str()));
  out << "skyselect-model v1\n";
  out << "kind " << model_kind_name(model.kind()) << "\n";
  out << "columns " << columns.size() << "\n";
  for (const std::string& name : columns) out << name << "\n";
  model.save(out);
  out << "end\n";
  out.flush();
  if (!out) throw DataError(strprintf("failed writing '%s'", path.c_str()));
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(strprintf("cannot open model file '%s'", path.c_str()));
  LineSource src(in, path);
  const std::vector<std::string> magic = src.expect("skyselect-model");
  if (magic.size() != 2 || magic[1] != "v1")
    throw DataError(strprintf("%s: unsupported model file version", path.c_str()));
  const std::string kind_name = src.expect("kind").at(1);
  const size_t n_columns = static_cast<size_t>(src.integer(src.expect("columns").at(1), "columns"));
  LoadedModel loaded;
  loaded.columns.reserve(n_columns);
  for (size_t i = 0; i < n_columns; ++i) {
    const std::vector<std::string> tokens = src.row();
    if (tokens.size() != 1)
      throw DataError(strprintf("%s:%zu: malformed column name", path.c_str(), src.line_no()));
    loaded.columns.push_back(tokens[0]);
  }
  loaded.model = ModelReader::read(src, kind_name);
  src.expect("end");
  return loaded;
}

}  // namespace skyselect
