#pragma once

#include "jobrel/embed.hpp"
#include "jobrel/graphembed.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace jobrel {

/// Two-layer feed-forward map from text space into graph space:
///   o = W2 relu(W1 x + b1) + b2,  output o / |o|.
struct AlignmentModel {
    Eigen::MatrixXd w1; // hidden x input
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2; // output x hidden
    Eigen::VectorXd b2;
    std::uint64_t seed = 0;

    std::size_t input_dim() const { return static_cast<std::size_t>(w1.cols()); }
    std::size_t hidden_dim() const { return static_cast<std::size_t>(w1.rows()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(w2.rows()); }

    std::vector<Eigen::MatrixXd*> tensors();
    std::vector<Eigen::VectorXd*> biases();
    bool operator==(const AlignmentModel&) const = default;
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero.
AlignmentModel init_alignment(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                              std::uint64_t seed);

/// Unit-norm image of a text embedding in graph space.
EmbeddingVector map_text_to_graph(std::span<const double> text_embedding, const AlignmentModel& model);

struct AlignExample {
    EmbeddingVector input;
    EmbeddingVector target;
};

struct AlignTrainConfig {
    std::size_t epochs = 300;
    double learning_rate = 20.0; // loss is a per-component mean, so gradients are 1/output_dim scale
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;
    std::size_t patience = 30;
    std::size_t hidden_dim = 1024;
    double validation_fraction = 0.1;
};

/// Mean over examples and components of (o/|o| - t/|t|)^2. When `grad` is
/// non-null it receives the gradient with the model's shapes.
double alignment_loss(const AlignmentModel& model, std::span<const AlignExample> examples,
                      AlignmentModel* grad = nullptr);

struct AlignTrainResult {
    AlignmentModel model; // best validation epoch, including the untrained start
    double initial_validation_mse = 0.0;
    double best_validation_mse = 0.0;
    std::size_t best_epoch = 0; // 0 = initialization
    std::vector<double> train_mse;      // per epoch, mean over mini-batches
    std::vector<double> validation_mse; // per epoch
    std::size_t train_size = 0;
    std::size_t validation_size = 0;
};

/// Mini-batch SGD with a seeded shuffle, early stopping on validation MSE.
AlignTrainResult train_alignment(const std::vector<AlignExample>& examples, const AlignTrainConfig& config);

GradientCheck gradient_check_alignment(const AlignmentModel& model, std::span<const AlignExample> examples,
                                       double step = 1e-6, double floor = 1e-5);

/// str_score of the two mapped title embeddings.
double predict_str(std::string_view title_a, std::string_view title_b, const TextEncoder& encoder,
                   const AlignmentModel& model);

void save_alignment(const AlignmentModel& model, const std::filesystem::path& path);
AlignmentModel load_alignment(const std::filesystem::path& path);

} // namespace jobrel
