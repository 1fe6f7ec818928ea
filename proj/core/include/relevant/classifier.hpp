#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relevant/corpus.hpp"
#include "relevant/features.hpp"

namespace relevant {

/// Hidden layer widths; the single sigmoid output unit is implicit.
struct MlpArchitecture {
    std::vector<std::size_t> hidden_sizes;

    static MlpArchitecture a1() { return {{512, 256, 128, 64}}; }
    static MlpArchitecture a2() { return {{1024, 512, 256, 128, 64, 32}}; }
    static MlpArchitecture a3() { return {{2048, 256, 64}}; }

    /// "A1" / "A2" / "A3" (any case) or a comma-separated width list such as
    /// "64,32". An empty list is a plain logistic regression.
    static MlpArchitecture parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const MlpArchitecture&, const MlpArchitecture&) = default;
};

/// Affine layer with `outputs x inputs` weights stored column-major, so the
/// weights reading input j are contiguous: weight(i, j) = weights[j * outputs + i].
struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out) : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

    [[nodiscard]] double weight(std::size_t out, std::size_t in) const { return weights[in * outputs + out]; }
    double& weight(std::size_t out, std::size_t in) { return weights[in * outputs + out]; }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct TrainingMeta {
    std::size_t epochs_run = 0;
    double final_val_loss = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct Prediction {
    Label label = Label::Irrelevant;
    double probability = 0.0;
};

inline constexpr double kDefaultThreshold = 0.4;

/// Feed-forward binary classifier: rectifier hidden layers, logistic output.
class MlpModel {
public:
    /// All weights and biases zero.
    MlpModel(std::size_t input_dim, MlpArchitecture architecture, double threshold = kDefaultThreshold);

    /// Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases.
    static MlpModel initialize(std::size_t input_dim, MlpArchitecture architecture, std::uint64_t seed,
                               double threshold = kDefaultThreshold);

    [[nodiscard]] std::size_t input_dim() const noexcept { return input_dim_; }
    [[nodiscard]] const MlpArchitecture& architecture() const noexcept { return architecture_; }
    [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    std::vector<DenseLayer>& layers() noexcept { return layers_; }
    [[nodiscard]] double threshold() const noexcept { return threshold_; }
    void set_threshold(double threshold);
    [[nodiscard]] const TrainingMeta& training_meta() const noexcept { return meta_; }
    void set_training_meta(TrainingMeta meta) { meta_ = meta; }

    /// Output logit. Only nonzero inputs touch the first layer.
    [[nodiscard]] double logit(const FeatureVector& x) const;
    /// Probability of Relevant, clamped to [1e-12, 1 - 1e-12].
    [[nodiscard]] double forward(const FeatureVector& x) const;
    /// Relevant iff probability >= threshold.
    [[nodiscard]] Prediction predict(const FeatureVector& x) const;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;

private:
    std::size_t input_dim_;
    MlpArchitecture architecture_;
    std::vector<DenseLayer> layers_;
    double threshold_;
    TrainingMeta meta_;
};

inline constexpr double kProbabilityFloor = 1e-12;

double sigmoid(double z) noexcept;

enum class Optimizer { Sgd, Adam };

struct TrainConfig {
    std::size_t max_iterations = 500;  // epochs
    double initial_lr = 1e-3;
    std::size_t batch_size = 200;
    double val_fraction = 0.1;
    /// Stop after this many epochs without beating the best validation loss.
    std::size_t early_stop_patience = 10;
    /// Divide the learning rate after `lr_adapt_patience` consecutive epochs
    /// whose validation loss did not beat the preceding epoch's.
    double lr_adapt_divisor = 5.0;
    std::size_t lr_adapt_patience = 2;
    /// Minimum decrease of the validation loss that counts as improvement.
    double tol = 1e-4;
    Optimizer optimizer = Optimizer::Adam;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double learning_rate = 0.0;
};

struct TrainResult {
    MlpModel model;
    std::vector<EpochRecord> history;
};

/// Mini-batch training of the mean binary cross-entropy. Returns the
/// parameters with the best validation loss. Deterministic for a given seed.
TrainResult train(std::span<const FeatureVector> vectors, std::span<const Label> labels,
                  const MlpArchitecture& architecture, const TrainConfig& config,
                  double threshold = kDefaultThreshold);

/// Per-layer gradients with the same layout as the model's layers.
struct LossGradients {
    double loss = 0.0;
    std::vector<DenseLayer> layers;
};

/// Mean binary cross-entropy (computed from logits) and its gradient over the
/// given examples, using the same batched code path as training.
LossGradients loss_and_gradients(const MlpModel& model, std::span<const FeatureVector> vectors,
                                 std::span<const Label> labels);

void write_model(std::ostream& out, const MlpModel& model);
void save_model(const std::filesystem::path& path, const MlpModel& model);
/// Throws CorruptModelFile on unparsable input, VersionMismatch on an unknown
/// version or declared dimensions that disagree with the stored layers.
MlpModel read_model(std::istream& in);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace relevant
