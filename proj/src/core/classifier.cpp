#include "core/classifier.hpp"

#include "core/rng.hpp"

#include <cmath>
#include <fstream>
#include <random>

namespace sgrasp {

namespace {

struct ForwardTrace {
  Eigen::MatrixXd pre1, h1m, pre2, h2m;
  Eigen::VectorXd pooled, pre3, h3v;
  std::vector<int> argmax;  // per h2 feature, first maximal column
  Eigen::Vector2d logits, probs;
};

void run_forward(const ClassifierModel& m, const PointMatrix& pts,
                 ForwardTrace& t) {
  if (pts.cols() < 1)
    throw std::invalid_argument("forward: need at least one point");
  const Eigen::Index n = pts.cols();
  t.pre1 = (m.W1 * pts).colwise() + m.b1;
  t.h1m = t.pre1.cwiseMax(0.0);
  t.pre2 = (m.W2 * t.h1m).colwise() + m.b2;
  t.h2m = t.pre2.cwiseMax(0.0);

  t.pooled.resize(m.h2);
  t.argmax.assign(size_t(m.h2), 0);
  for (int f = 0; f < m.h2; ++f) {
    double best = t.h2m(f, 0);
    int best_j = 0;
    for (Eigen::Index j = 1; j < n; ++j) {
      if (t.h2m(f, j) > best) {  // strict: first index wins ties
        best = t.h2m(f, j);
        best_j = int(j);
      }
    }
    t.pooled[f] = best;
    t.argmax[size_t(f)] = best_j;
  }

  t.pre3 = m.W3 * t.pooled + m.b3;
  t.h3v = t.pre3.cwiseMax(0.0);
  t.logits = m.W4 * t.h3v + m.b4;

  const double mx = t.logits.maxCoeff();
  const Eigen::Vector2d e = (t.logits.array() - mx).exp();
  t.probs = e / e.sum();
}

}  // namespace

ClassifierModel ClassifierModel::zeros(int h1, int h2, int h3) {
  ClassifierModel m;
  m.h1 = h1;
  m.h2 = h2;
  m.h3 = h3;
  m.W1 = Eigen::MatrixXd::Zero(h1, 3);
  m.W2 = Eigen::MatrixXd::Zero(h2, h1);
  m.W3 = Eigen::MatrixXd::Zero(h3, h2);
  m.W4 = Eigen::MatrixXd::Zero(2, h3);
  m.b1 = Eigen::VectorXd::Zero(h1);
  m.b2 = Eigen::VectorXd::Zero(h2);
  m.b3 = Eigen::VectorXd::Zero(h3);
  m.b4 = Eigen::VectorXd::Zero(2);
  return m;
}

ClassifierModel ClassifierModel::random_init(uint64_t seed, int h1, int h2,
                                             int h3) {
  ClassifierModel m = zeros(h1, h2, h3);
  std::mt19937_64 rng(derive_seed(seed, {0x1417u}));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& w, int fan_in) {
    const double scale = std::sqrt(2.0 / double(fan_in));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = scale * normal(rng);
  };
  fill(m.W1, 3);
  fill(m.W2, h1);
  fill(m.W3, h2);
  fill(m.W4, h3);
  return m;
}

size_t ClassifierModel::parameter_count() const {
  return size_t(W1.size() + W2.size() + W3.size() + W4.size() + b1.size() +
                b2.size() + b3.size() + b4.size());
}

bool ClassifierModel::finite() const {
  return W1.allFinite() && W2.allFinite() && W3.allFinite() && W4.allFinite() &&
         b1.allFinite() && b2.allFinite() && b3.allFinite() && b4.allFinite();
}

ForwardResult forward(const ClassifierModel& model, const PointMatrix& points) {
  ForwardTrace t;
  run_forward(model, points, t);
  return {t.logits, t.probs};
}

ModelGrad ModelGrad::zeros_like(const ClassifierModel& m) {
  ModelGrad g;
  g.W1 = Eigen::MatrixXd::Zero(m.W1.rows(), m.W1.cols());
  g.W2 = Eigen::MatrixXd::Zero(m.W2.rows(), m.W2.cols());
  g.W3 = Eigen::MatrixXd::Zero(m.W3.rows(), m.W3.cols());
  g.W4 = Eigen::MatrixXd::Zero(m.W4.rows(), m.W4.cols());
  g.b1 = Eigen::VectorXd::Zero(m.b1.size());
  g.b2 = Eigen::VectorXd::Zero(m.b2.size());
  g.b3 = Eigen::VectorXd::Zero(m.b3.size());
  g.b4 = Eigen::VectorXd::Zero(m.b4.size());
  return g;
}

void ModelGrad::add_scaled(const ModelGrad& g, double s) {
  W1 += s * g.W1;
  W2 += s * g.W2;
  W3 += s * g.W3;
  W4 += s * g.W4;
  b1 += s * g.b1;
  b2 += s * g.b2;
  b3 += s * g.b3;
  b4 += s * g.b4;
}

double loss_and_grad(const ClassifierModel& model,
                     std::span<const TrainSample> batch, ModelGrad& grad,
                     size_t* n_correct_out) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  grad = ModelGrad::zeros_like(model);

  double loss_sum = 0;
  size_t correct = 0;
  ForwardTrace t;
  for (const TrainSample& sample : batch) {
    if (sample.label != 0 && sample.label != 1)
      throw std::invalid_argument("loss_and_grad: labels must be 0 or 1");
    run_forward(model, sample.points, t);

    const double mx = t.logits.maxCoeff();
    loss_sum += std::log((t.logits.array() - mx).exp().sum()) + mx -
                t.logits[sample.label];
    int pred = t.logits[1] > t.logits[0] ? 1 : 0;
    if (pred == sample.label) ++correct;

    Eigen::Vector2d dlogits = t.probs;
    dlogits[sample.label] -= 1.0;

    grad.W4 += dlogits * t.h3v.transpose();
    grad.b4 += dlogits;
    Eigen::VectorXd dpre3 =
        (model.W4.transpose() * dlogits).cwiseProduct(
            (t.pre3.array() > 0).cast<double>().matrix());
    grad.W3 += dpre3 * t.pooled.transpose();
    grad.b3 += dpre3;
    const Eigen::VectorXd dpooled = model.W3.transpose() * dpre3;

    // max pool: each feature's gradient flows to its argmax point only
    Eigen::MatrixXd dh1 = Eigen::MatrixXd::Zero(model.h1, sample.points.cols());
    for (int f = 0; f < model.h2; ++f) {
      const int j = t.argmax[size_t(f)];
      if (t.pre2(f, j) <= 0) continue;  // pooled value was the ReLU floor
      const double d = dpooled[f];
      if (d == 0) continue;
      grad.W2.row(f) += d * t.h1m.col(j).transpose();
      grad.b2[f] += d;
      dh1.col(j) += d * model.W2.row(f).transpose();
    }
    for (int f = 0; f < model.h2; ++f) {
      const int j = t.argmax[size_t(f)];
      if (dh1.col(j).isZero(0.0)) continue;
      const Eigen::VectorXd dpre1 =
          dh1.col(j).cwiseProduct((t.pre1.col(j).array() > 0).cast<double>().matrix());
      grad.W1 += dpre1 * sample.points.col(j).transpose();
      grad.b1 += dpre1;
      dh1.col(j).setZero();  // each touched column contributes once
    }
  }

  const double inv = 1.0 / double(batch.size());
  grad.add_scaled(grad, inv - 1.0);  // scale in place: g = g * inv
  if (n_correct_out) *n_correct_out = correct;
  return loss_sum * inv;
}

ClassifierModel train(std::span<const TrainSample> train_split,
                      std::span<const TrainSample> test_split,
                      const TrainConfig& config, std::vector<EpochLog>* log) {
  if (config.learning_rate <= 0 || config.batch_size < 1 || config.epochs < 1)
    throw std::invalid_argument("train: bad config");
  size_t n_pos = 0;
  for (const TrainSample& s : train_split) n_pos += size_t(s.label == 1);
  if (n_pos == 0 || n_pos == train_split.size())
    throw std::invalid_argument(
        "train: the train split must contain both classes");

  ClassifierModel model = ClassifierModel::random_init(config.seed);
  ModelGrad velocity = ModelGrad::zeros_like(model);
  ModelGrad grad = ModelGrad::zeros_like(model);
  std::mt19937_64 rng(derive_seed(config.seed, {0x7124u}));

  std::vector<size_t> order(train_split.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<TrainSample> batch;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::uniform_int_distribution<size_t> d(0, i - 1);
      std::swap(order[i - 1], order[d(rng)]);
    }

    double loss_sum = 0;
    size_t correct = 0, seen = 0;
    for (size_t start = 0; start < order.size();
         start += size_t(config.batch_size)) {
      const size_t end =
          std::min(order.size(), start + size_t(config.batch_size));
      batch.clear();
      for (size_t i = start; i < end; ++i)
        batch.push_back(train_split[order[i]]);

      size_t batch_correct = 0;
      const double loss = loss_and_grad(model, batch, grad, &batch_correct);
      loss_sum += loss * double(batch.size());
      correct += batch_correct;
      seen += batch.size();

      velocity.add_scaled(velocity, config.momentum - 1.0);
      velocity.add_scaled(grad, -config.learning_rate);
      model.W1 += velocity.W1;
      model.W2 += velocity.W2;
      model.W3 += velocity.W3;
      model.W4 += velocity.W4;
      model.b1 += velocity.b1;
      model.b2 += velocity.b2;
      model.b3 += velocity.b3;
      model.b4 += velocity.b4;
      if (!model.finite())
        throw std::runtime_error("train: weights diverged to non-finite values");
    }

    if (log) {
      EpochLog entry;
      entry.epoch = epoch;
      entry.train_loss = loss_sum / double(seen);
      entry.train_acc = double(correct) / double(seen);
      entry.test_acc = test_split.empty()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : evaluate(model, test_split).accuracy;
      log->push_back(entry);
    }
  }
  return model;
}

EvalResult evaluate(const ClassifierModel& model,
                    std::span<const TrainSample> samples) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty split");
  EvalResult result;
  result.scores.reserve(samples.size());
  size_t tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0}, correct = 0;
  for (const TrainSample& s : samples) {
    const ForwardResult f = forward(model, s.points);
    const int pred = f.logits[1] > f.logits[0] ? 1 : 0;
    result.scores.push_back(f.probs[1]);
    if (pred == s.label) {
      ++correct;
      ++tp[pred];
    } else {
      ++fp[pred];
      ++fn[s.label];
    }
  }
  result.accuracy = double(correct) / double(samples.size());
  for (int c = 0; c < 2; ++c) {
    const size_t denom_p = tp[c] + fp[c], denom_r = tp[c] + fn[c];
    result.precision[c] = denom_p ? double(tp[c]) / double(denom_p) : 0.0;
    result.recall[c] = denom_r ? double(tp[c]) / double(denom_r) : 0.0;
  }
  return result;
}

namespace {

void write_block(std::ofstream& f, const Eigen::MatrixXd& m) {
  std::vector<double> buf;
  buf.reserve(size_t(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) buf.push_back(m(r, c));
  f.write(reinterpret_cast<const char*>(buf.data()),
          std::streamsize(buf.size() * sizeof(double)));
}

void read_block(std::ifstream& f, Eigen::MatrixXd& m) {
  std::vector<double> buf(size_t(m.size()));
  f.read(reinterpret_cast<char*>(buf.data()),
         std::streamsize(buf.size() * sizeof(double)));
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = buf[i++];
}

}  // namespace

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write model: " + path.string());
  f << "GQNET1 3 " << model.h1 << ' ' << model.h2 << ' ' << model.h3 << " 2\n";
  Eigen::MatrixXd b;
  write_block(f, model.W1);
  write_block(f, b = model.b1);
  write_block(f, model.W2);
  write_block(f, b = model.b2);
  write_block(f, model.W3);
  write_block(f, b = model.b3);
  write_block(f, model.W4);
  write_block(f, b = model.b4);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open model: " + path.string());
  std::string magic;
  int in_dim = 0, h1 = 0, h2 = 0, h3 = 0, out_dim = 0;
  f >> magic >> in_dim >> h1 >> h2 >> h3 >> out_dim;
  if (magic != "GQNET1" || in_dim != 3 || out_dim != 2 || h1 < 1 || h2 < 1 ||
      h3 < 1)
    throw std::runtime_error("bad model header: " + path.string());
  f.get();  // newline

  ClassifierModel m = ClassifierModel::zeros(h1, h2, h3);
  Eigen::MatrixXd b;
  read_block(f, m.W1);
  b.resize(h1, 1); read_block(f, b); m.b1 = b;
  read_block(f, m.W2);
  b.resize(h2, 1); read_block(f, b); m.b2 = b;
  read_block(f, m.W3);
  b.resize(h3, 1); read_block(f, b); m.b3 = b;
  read_block(f, m.W4);
  b.resize(2, 1); read_block(f, b); m.b4 = b;
  if (!f) throw std::runtime_error("truncated model file: " + path.string());
  if (!m.finite()) throw std::runtime_error("non-finite weights in " + path.string());
  return m;
}

void write_train_log(const std::filesystem::path& path,
                     const std::vector<EpochLog>& log) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write training log: " + path.string());
  f << "epoch,train_loss,train_acc,test_acc\n";
  for (const EpochLog& e : log) {
    f << e.epoch << ',';
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", e.train_loss,
                  e.train_acc, e.test_acc);
    f << buf;
  }
}

}  // namespace sgrasp
