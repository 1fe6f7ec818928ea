#include "relevant/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <json.hpp>

#include "relevant/error.hpp"
#include "relevant/util.hpp"

namespace relevant {

namespace {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

ConstMatrixMap weights_of(const DenseLayer& layer)
{
    return {layer.weights.data(), static_cast<Eigen::Index>(layer.outputs), static_cast<Eigen::Index>(layer.inputs)};
}

MatrixMap weights_of(DenseLayer& layer)
{
    return {layer.weights.data(), static_cast<Eigen::Index>(layer.outputs), static_cast<Eigen::Index>(layer.inputs)};
}

ConstVectorMap bias_of(const DenseLayer& layer)
{
    return {layer.bias.data(), static_cast<Eigen::Index>(layer.outputs)};
}

VectorMap bias_of(DenseLayer& layer) { return {layer.bias.data(), static_cast<Eigen::Index>(layer.outputs)}; }

/// log(1 + e^z) without overflow.
double softplus(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_dim(const FeatureVector& x, std::size_t input_dim)
{
    if (x.dim != input_dim) {
        throw Error(ErrorKind::DimensionMismatch, "vector has dim " + std::to_string(x.dim) + ", model expects " +
                                                      std::to_string(input_dim));
    }
}

SparseMatrix gather_columns(std::span<const FeatureVector> vectors, std::span<const std::size_t> rows,
                            std::size_t input_dim)
{
    SparseMatrix x(static_cast<Eigen::Index>(input_dim), static_cast<Eigen::Index>(rows.size()));
    Eigen::VectorXi nnz(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        nnz[static_cast<Eigen::Index>(c)] = static_cast<int>(vectors[rows[c]].entries.size());
    }
    x.reserve(nnz);
    for (std::size_t c = 0; c < rows.size(); ++c) {
        for (const auto& e : vectors[rows[c]].entries) {
            x.insert(static_cast<Eigen::Index>(e.index), static_cast<Eigen::Index>(c)) = e.value;
        }
    }
    x.makeCompressed();
    return x;
}

RowVector gather_targets(std::span<const Label> labels, std::span<const std::size_t> rows)
{
    RowVector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        y[static_cast<Eigen::Index>(c)] = labels[rows[c]] == Label::Relevant ? 1.0 : 0.0;
    }
    return y;
}

/// Forward (and optionally backward) pass over one batch; returns the mean
/// loss. Gradients are written into `grads` laid out like the model's layers.
double batch_pass(const std::vector<DenseLayer>& layers, const SparseMatrix& x, const RowVector& y,
                  std::vector<DenseLayer>* grads)
{
    const std::size_t depth = layers.size();
    const auto m = static_cast<double>(x.cols());
    std::vector<Matrix> pre(depth);
    std::vector<Matrix> act(depth);

    for (std::size_t l = 0; l < depth; ++l) {
        const auto w = weights_of(layers[l]);
        if (l == 0) {
            pre[l] = w * x;
        } else {
            pre[l] = w * act[l - 1];
        }
        pre[l].colwise() += bias_of(layers[l]);
        if (l + 1 < depth) {
            act[l] = pre[l].cwiseMax(0.0);
        }
    }

    const RowVector z = pre.back().row(0);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        loss += softplus(z[i]) - y[i] * z[i];
    }
    loss /= m;

    if (grads == nullptr) {
        return loss;
    }
    grads->resize(depth);
    Matrix delta(1, z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        delta(0, i) = (sigmoid(z[i]) - y[i]) / m;
    }
    for (std::size_t l = depth; l-- > 0;) {
        auto& g = (*grads)[l];
        g.inputs = layers[l].inputs;
        g.outputs = layers[l].outputs;
        g.weights.resize(layers[l].weights.size());
        g.bias.resize(layers[l].bias.size());
        if (l == 0) {
            weights_of(g) = delta * x.transpose();
        } else {
            weights_of(g) = delta * act[l - 1].transpose();
        }
        bias_of(g) = delta.rowwise().sum().transpose();
        if (l > 0) {
            Matrix back = weights_of(layers[l]).transpose() * delta;
            delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

double mean_loss(const std::vector<DenseLayer>& layers, std::span<const FeatureVector> vectors,
                 std::span<const Label> labels, std::span<const std::size_t> rows, std::size_t input_dim,
                 std::size_t chunk)
{
    double total = 0.0;
    for (std::size_t start = 0; start < rows.size(); start += chunk) {
        const auto part = rows.subspan(start, std::min(chunk, rows.size() - start));
        const double l = batch_pass(layers, gather_columns(vectors, part, input_dim), gather_targets(labels, part),
                                    nullptr);
        total += l * static_cast<double>(part.size());
    }
    return total / static_cast<double>(rows.size());
}

class Updater {
public:
    Updater(const std::vector<DenseLayer>& layers, Optimizer kind) : kind_(kind)
    {
        if (kind_ == Optimizer::Adam) {
            for (const auto& layer : layers) {
                first_.emplace_back(layer.inputs, layer.outputs);
                second_.emplace_back(layer.inputs, layer.outputs);
            }
        }
    }

    void apply(std::vector<DenseLayer>& layers, const std::vector<DenseLayer>& grads, double lr)
    {
        if (kind_ == Optimizer::Sgd) {
            for (std::size_t l = 0; l < layers.size(); ++l) {
                weights_of(layers[l]) -= lr * weights_of(grads[l]);
                bias_of(layers[l]) -= lr * bias_of(grads[l]);
            }
            return;
        }
        constexpr double kBeta1 = 0.9;
        constexpr double kBeta2 = 0.999;
        constexpr double kEps = 1e-8;
        ++step_;
        const double step_size = lr * std::sqrt(1.0 - std::pow(kBeta2, static_cast<double>(step_))) /
                                 (1.0 - std::pow(kBeta1, static_cast<double>(step_)));
        auto update = [&](auto param, auto grad, auto m, auto v) {
            m = kBeta1 * m + (1.0 - kBeta1) * grad;
            v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
            param.array() -= step_size * m.array() / (v.array().sqrt() + kEps);
        };
        for (std::size_t l = 0; l < layers.size(); ++l) {
            update(weights_of(layers[l]), weights_of(grads[l]), weights_of(first_[l]), weights_of(second_[l]));
            update(bias_of(layers[l]), bias_of(grads[l]), bias_of(first_[l]), bias_of(second_[l]));
        }
    }

private:
    Optimizer kind_;
    std::vector<DenseLayer> first_;
    std::vector<DenseLayer> second_;
    std::size_t step_ = 0;
};

}  // namespace

double sigmoid(double z) noexcept
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

MlpArchitecture MlpArchitecture::parse(std::string_view text)
{
    std::string t;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    if (t == "A1") {
        return a1();
    }
    if (t == "A2") {
        return a2();
    }
    if (t == "A3") {
        return a3();
    }
    MlpArchitecture arch;
    if (t.empty() || t == "NONE") {
        return arch;
    }
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long width = 0;
        try {
            width = std::stoll(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used != item.size() || width < 1) {
            throw Error(ErrorKind::InvalidConfig, "bad architecture '" + std::string(text) + "'");
        }
        arch.hidden_sizes.push_back(static_cast<std::size_t>(width));
    }
    return arch;
}

std::string MlpArchitecture::to_string() const
{
    if (*this == a1()) {
        return "A1";
    }
    if (*this == a2()) {
        return "A2";
    }
    if (*this == a3()) {
        return "A3";
    }
    std::string out;
    for (std::size_t i = 0; i < hidden_sizes.size(); ++i) {
        out += (i == 0 ? "" : ",") + std::to_string(hidden_sizes[i]);
    }
    return out.empty() ? "none" : out;
}

MlpModel::MlpModel(std::size_t input_dim, MlpArchitecture architecture, double threshold)
    : input_dim_(input_dim), architecture_(std::move(architecture)), threshold_(kDefaultThreshold)
{
    if (input_dim_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "model input dimension must be positive");
    }
    set_threshold(threshold);
    std::size_t fan_in = input_dim_;
    for (const auto width : architecture_.hidden_sizes) {
        if (width == 0) {
            throw Error(ErrorKind::InvalidConfig, "layer widths must be >= 1");
        }
        layers_.emplace_back(fan_in, width);
        fan_in = width;
    }
    layers_.emplace_back(fan_in, 1);
}

MlpModel MlpModel::initialize(std::size_t input_dim, MlpArchitecture architecture, std::uint64_t seed,
                              double threshold)
{
    MlpModel model(input_dim, std::move(architecture), threshold);
    Rng rng(seed);
    for (auto& layer : model.layers_) {
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        for (auto& w : layer.weights) {
            w = rng.uniform(-bound, bound);
        }
    }
    return model;
}

void MlpModel::set_threshold(double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "threshold must lie in (0, 1)");
    }
    threshold_ = threshold;
}

double MlpModel::logit(const FeatureVector& x) const
{
    check_dim(x, input_dim_);
    std::vector<double> current;
    std::vector<double> next(layers_.front().bias);
    for (const auto& e : x.entries) {
        const double* column = layers_.front().weights.data() + static_cast<std::size_t>(e.index) * next.size();
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] += column[i] * e.value;
        }
    }
    for (std::size_t l = 1; l < layers_.size(); ++l) {
        current.swap(next);
        for (auto& a : current) {
            a = std::max(a, 0.0);
        }
        const auto& layer = layers_[l];
        next = layer.bias;
        for (std::size_t j = 0; j < current.size(); ++j) {
            if (current[j] == 0.0) {
                continue;
            }
            const double* column = layer.weights.data() + j * layer.outputs;
            for (std::size_t i = 0; i < layer.outputs; ++i) {
                next[i] += column[i] * current[j];
            }
        }
    }
    return next.front();
}

double MlpModel::forward(const FeatureVector& x) const
{
    return std::clamp(sigmoid(logit(x)), kProbabilityFloor, 1.0 - kProbabilityFloor);
}

Prediction MlpModel::predict(const FeatureVector& x) const
{
    const double p = forward(x);
    return {p >= threshold_ ? Label::Relevant : Label::Irrelevant, p};
}

void TrainConfig::validate() const
{
    auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); };
    if (max_iterations < 1) {
        fail("train.max_iterations must be >= 1");
    }
    if (!(initial_lr > 0.0)) {
        fail("train.initial_lr must be positive");
    }
    if (batch_size < 1) {
        fail("train.batch_size must be >= 1");
    }
    if (!(val_fraction > 0.0 && val_fraction < 0.5)) {
        fail("train.val_fraction must lie in (0, 0.5)");
    }
    if (early_stop_patience < 1 || lr_adapt_patience < 1) {
        fail("patience values must be >= 1");
    }
    if (!(lr_adapt_divisor >= 1.0)) {
        fail("train.lr_adapt_divisor must be >= 1");
    }
    if (!(tol >= 0.0)) {
        fail("train.tol must be >= 0");
    }
}

LossGradients loss_and_gradients(const MlpModel& model, std::span<const FeatureVector> vectors,
                                 std::span<const Label> labels)
{
    if (vectors.size() != labels.size() || vectors.empty()) {
        throw Error(ErrorKind::LengthMismatch, "need equally many (non-zero) vectors and labels");
    }
    for (const auto& v : vectors) {
        check_dim(v, model.input_dim());
    }
    std::vector<std::size_t> rows(vectors.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    LossGradients out;
    out.loss = batch_pass(model.layers(), gather_columns(vectors, rows, model.input_dim()),
                          gather_targets(labels, rows), &out.layers);
    return out;
}

TrainResult train(std::span<const FeatureVector> vectors, std::span<const Label> labels,
                  const MlpArchitecture& architecture, const TrainConfig& config, double threshold)
{
    config.validate();
    if (vectors.size() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "vectors and labels differ in length");
    }
    if (vectors.empty()) {
        throw Error(ErrorKind::InvalidArgument, "no training examples");
    }
    const std::size_t input_dim = vectors.front().dim;
    for (const auto& v : vectors) {
        check_dim(v, input_dim);
    }
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Relevant));
    if (positives == 0 || positives == labels.size()) {
        throw Error(ErrorKind::SingleClassTrainingSet, "training labels contain a single class");
    }
    if (vectors.size() < 2) {
        throw Error(ErrorKind::InvalidArgument, "need at least two examples to hold out a validation set");
    }

    // separate streams so that changing one consumer leaves the others alone
    Rng split_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    Rng order_rng(config.seed ^ 0xc2b2ae3d27d4eb4fULL);

    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    split_rng.shuffle(std::span<std::size_t>(order));
    auto n_val = static_cast<std::size_t>(std::llround(config.val_fraction * static_cast<double>(order.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, order.size() - 1);
    std::vector<std::size_t> fit_rows(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
    const std::vector<std::size_t> val_rows(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());

    MlpModel model = MlpModel::initialize(input_dim, architecture, config.seed, threshold);
    std::vector<DenseLayer> best = model.layers();
    double best_loss = std::numeric_limits<double>::infinity();
    double previous_loss = best_loss;
    double lr = config.initial_lr;
    std::size_t stale_for_stop = 0;
    std::size_t stale_for_lr = 0;
    std::vector<EpochRecord> history;
    Updater updater(model.layers(), config.optimizer);
    std::vector<DenseLayer> grads;

    for (std::size_t epoch = 1; epoch <= config.max_iterations; ++epoch) {
        order_rng.shuffle(std::span<std::size_t>(fit_rows));
        double train_total = 0.0;
        for (std::size_t start = 0; start < fit_rows.size(); start += config.batch_size) {
            const auto batch = std::span<const std::size_t>(fit_rows).subspan(
                start, std::min(config.batch_size, fit_rows.size() - start));
            const double loss = batch_pass(model.layers(), gather_columns(vectors, batch, input_dim),
                                           gather_targets(labels, batch), &grads);
            if (!std::isfinite(loss)) {
                throw Error(ErrorKind::NonFiniteLoss,
                            "training loss diverged in epoch " + std::to_string(epoch) + "; reduce train.initial_lr");
            }
            train_total += loss * static_cast<double>(batch.size());
            updater.apply(model.layers(), grads, lr);
        }
        const double val_loss = mean_loss(model.layers(), vectors, labels, val_rows, input_dim, 1024);
        if (!std::isfinite(val_loss)) {
            throw Error(ErrorKind::NonFiniteLoss,
                        "validation loss diverged in epoch " + std::to_string(epoch) + "; reduce train.initial_lr");
        }
        history.push_back({epoch, train_total / static_cast<double>(fit_rows.size()), val_loss, lr});

        // early stopping compares against the best epoch, the learning-rate
        // rule against the preceding one
        stale_for_stop = val_loss > best_loss - config.tol ? stale_for_stop + 1 : 0;
        stale_for_lr = val_loss > previous_loss - config.tol ? stale_for_lr + 1 : 0;
        previous_loss = val_loss;
        if (val_loss < best_loss) {
            best_loss = val_loss;
            best = model.layers();
        }
        if (stale_for_stop >= config.early_stop_patience) {
            break;
        }
        if (stale_for_lr >= config.lr_adapt_patience) {
            lr /= config.lr_adapt_divisor;
            stale_for_lr = 0;
        }
    }

    model.layers() = std::move(best);
    model.set_training_meta({history.size(), best_loss, config.seed});
    return {std::move(model), std::move(history)};
}

void write_model(std::ostream& out, const MlpModel& model)
{
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    doc["input_dim"] = model.input_dim();
    doc["hidden_sizes"] = model.architecture().hidden_sizes;
    doc["threshold"] = model.threshold();
    auto& layers = doc["layers"] = nlohmann::ordered_json::array();
    for (const auto& layer : model.layers()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < layer.outputs; ++i) {
            std::vector<double> row(layer.inputs);
            for (std::size_t j = 0; j < layer.inputs; ++j) {
                row[j] = layer.weight(i, j);
            }
            rows.push_back(std::move(row));
        }
        layers.push_back({{"w", std::move(rows)}, {"b", layer.bias}});
    }
    const auto& meta = model.training_meta();
    doc["training_meta"] = {
        {"epochs_run", meta.epochs_run}, {"final_val_loss", meta.final_val_loss}, {"seed", meta.seed}};
    out << doc.dump() << '\n';
}

void save_model(const std::filesystem::path& path, const MlpModel& model)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write model file " + path.string());
    }
    write_model(out, model);
}

MlpModel read_model(std::istream& in)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModelFile, e.what());
    }
    try {
        if (doc.at("version").get<int>() != 1) {
            throw Error(ErrorKind::VersionMismatch, "unsupported model version " + doc.at("version").dump());
        }
        const auto input_dim = doc.at("input_dim").get<std::size_t>();
        MlpArchitecture arch{doc.at("hidden_sizes").get<std::vector<std::size_t>>()};
        const auto& layers_json = doc.at("layers");
        if (input_dim == 0 || layers_json.size() != arch.hidden_sizes.size() + 1 ||
            std::find(arch.hidden_sizes.begin(), arch.hidden_sizes.end(), std::size_t{0}) !=
                arch.hidden_sizes.end()) {
            throw Error(ErrorKind::VersionMismatch, "declared dimensions disagree with the stored layers");
        }
        MlpModel model(input_dim, arch, doc.at("threshold").get<double>());
        for (std::size_t l = 0; l < model.layers().size(); ++l) {
            auto& layer = model.layers()[l];
            const auto& w = layers_json[l].at("w");
            const auto& b = layers_json[l].at("b");
            if (w.size() != layer.outputs || b.size() != layer.outputs) {
                throw Error(ErrorKind::VersionMismatch, "layer " + std::to_string(l) + " shape disagrees");
            }
            for (std::size_t i = 0; i < layer.outputs; ++i) {
                if (w[i].size() != layer.inputs) {
                    throw Error(ErrorKind::VersionMismatch, "layer " + std::to_string(l) + " shape disagrees");
                }
                for (std::size_t j = 0; j < layer.inputs; ++j) {
                    layer.weight(i, j) = w[i][j].get<double>();
                }
                layer.bias[i] = b[i].get<double>();
            }
        }
        const auto& meta = doc.at("training_meta");
        model.set_training_meta({meta.at("epochs_run").get<std::size_t>(), meta.at("final_val_loss").get<double>(),
                                 meta.at("seed").get<std::uint64_t>()});
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModelFile, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::InvalidArgument) {
            throw Error(ErrorKind::CorruptModelFile, e.what());
        }
        throw;
    }
}

MlpModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open model file " + path.string());
    }
    return read_model(in);
}

}  // namespace relevant
