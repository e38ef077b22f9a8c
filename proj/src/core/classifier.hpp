#pragma once

#include "core/geometry.hpp"

#include <filesystem>
#include <span>

namespace sgrasp {

using PointMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

/// Minimal PointNet-style grasp quality net: shared per-point affine+ReLU
/// layers 3 -> h1 -> h2, feature-wise max over the points, then an
/// h2 -> h3 -> 2 head. No input/feature transform nets. Class 0 = negative,
/// class 1 = positive. All math in double precision.
struct ClassifierModel {
  int h1 = 64, h2 = 128, h3 = 64;
  Eigen::MatrixXd W1, W2, W3, W4;
  Eigen::VectorXd b1, b2, b3, b4;

  static ClassifierModel zeros(int h1 = 64, int h2 = 128, int h3 = 64);
  /// He-style init: weights ~ N(0, sqrt(2/fan_in)), zero biases, seeded.
  static ClassifierModel random_init(uint64_t seed, int h1 = 64, int h2 = 128,
                                     int h3 = 64);

  size_t parameter_count() const;
  bool finite() const;
};

struct ForwardResult {
  Eigen::Vector2d logits;
  Eigen::Vector2d probs;  // softmax(logits)
};

/// Accepts any point count >= 1; the 1024-point contract is enforced where
/// closing-region samples enter (file IO and the C API).
ForwardResult forward(const ClassifierModel& model, const PointMatrix& points);

struct TrainSample {
  PointMatrix points;
  int label = 0;  // 0 negative, 1 positive
};

/// Gradients with the same shapes as the model parameters.
struct ModelGrad {
  Eigen::MatrixXd W1, W2, W3, W4;
  Eigen::VectorXd b1, b2, b3, b4;

  static ModelGrad zeros_like(const ClassifierModel& m);
  void add_scaled(const ModelGrad& g, double s);
};

/// Mean softmax cross-entropy over the batch plus analytic gradients.
/// Gradient through the max pool routes to the argmax point only (first
/// index on ties). n_correct_out, when given, receives the number of
/// argmax-correct predictions in the batch.
double loss_and_grad(const ClassifierModel& model,
                     std::span<const TrainSample> batch, ModelGrad& grad,
                     size_t* n_correct_out = nullptr);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 50;
  uint64_t seed = 0;
};

struct EpochLog {
  int epoch;
  double train_loss, train_acc, test_acc;
};

/// Seeded SGD with momentum over shuffled mini-batches. test may be empty
/// (test_acc logged as NaN then). Throws when train has a single class.
ClassifierModel train(std::span<const TrainSample> train_split,
                      std::span<const TrainSample> test_split,
                      const TrainConfig& config,
                      std::vector<EpochLog>* log = nullptr);

struct EvalResult {
  double accuracy = 0;
  double precision[2] = {0, 0};
  double recall[2] = {0, 0};
  std::vector<double> scores;  // positive-class probability per sample
};

EvalResult evaluate(const ClassifierModel& model,
                    std::span<const TrainSample> samples);

/// Text header "GQNET1 3 h1 h2 h3 2" then little-endian float64 blocks
/// W1 b1 W2 b2 W3 b3 W4 b4 (row-major weights).
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

void write_train_log(const std::filesystem::path& path,
                     const std::vector<EpochLog>& log);

}  // namespace sgrasp
