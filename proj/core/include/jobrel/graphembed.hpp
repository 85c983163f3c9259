#pragma once

#include "jobrel/embed.hpp"
#include "jobrel/kg.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace jobrel {

/// Message-passing relations: each stored relation plus its inverse, so that
/// jobs receive messages from their skills and parents from children.
enum class EncoderRelation : std::size_t {
    HasSkill = 0,      // skill <- job
    SubskillOf = 1,    // parent <- child
    HasSkillInv = 2,   // job <- skill
    SubskillOfInv = 3, // child <- parent
};
inline constexpr std::size_t kEncoderRelations = 4;
inline constexpr std::size_t kDecoderRelations = 2; // HAS_SKILL, SUBSKILL_OF

struct GraphModelConfig {
    std::size_t num_layers = 2;
    std::size_t base_dim = 64;
    std::size_t hidden_dim = 256;
    std::size_t output_dim = 500;
};

struct GraphTrainConfig {
    std::size_t epochs = 15;
    double learning_rate = 0.01;
    std::size_t negatives_per_positive = 1;
    std::uint64_t seed = 42;
};

struct GraphLayer {
    std::array<Eigen::MatrixXd, kEncoderRelations> relation_weights; // d_in x d_out
    Eigen::MatrixXd self_weight;                                     // d_in x d_out
};

struct GraphParams {
    Eigen::MatrixXd base;             // nodes x base_dim, learned input features
    std::vector<GraphLayer> layers;
    Eigen::MatrixXd relation_vectors; // kDecoderRelations x output_dim

    std::vector<Eigen::MatrixXd*> tensors();
    std::vector<const Eigen::MatrixXd*> tensors() const;
    GraphParams zeros_like() const;
    bool operator==(const GraphParams& other) const;
};

struct RelGraphModel {
    GraphModelConfig config;
    std::vector<std::string> node_ids; // row order of params.base
    GraphParams params;
};

/// Node-index view of a knowledge graph: sorted node order, row-normalized
/// per-relation adjacency (row v holds 1/|N_r(v)| for each u in N_r(v)),
/// and the positive triples used for link prediction.
struct GraphIndex {
    struct Triple {
        std::size_t head = 0;
        std::size_t relation = 0; // 0 = HAS_SKILL, 1 = SUBSKILL_OF
        std::size_t tail = 0;
        bool operator==(const Triple&) const = default;
    };

    std::vector<std::string> node_ids;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> skill_nodes;
    std::array<Eigen::SparseMatrix<double, Eigen::RowMajor>, kEncoderRelations> adjacency;
    std::vector<Triple> positives;

    explicit GraphIndex(const KnowledgeGraph& kg);
    bool is_positive(const Triple& t) const;
};

/// Intermediate values of one encoder pass, kept for backpropagation.
struct ForwardPass {
    std::vector<Eigen::MatrixXd> inputs;          // H_l fed into layer l
    std::vector<Eigen::MatrixXd> preactivations;  // P_l
    Eigen::MatrixXd output;                       // Z, before normalization
    Eigen::VectorXd norms;                        // |Z_v|
    Eigen::MatrixXd embeddings;                   // Z_v / |Z_v|
};

/// Uniform initialization in +-1/sqrt(fan_in) for every parameter block.
RelGraphModel init_model(const KnowledgeGraph& kg, const GraphModelConfig& config, std::uint64_t seed);

/// P_l = sum_r A_r H_l W_r + H_l W_0; rectifier between layers, identity at
/// the output, then row-wise l2 normalization.
ForwardPass forward(const GraphIndex& index, const GraphParams& params);

/// Per-node unit-norm embeddings keyed by node id. The model's base rows
/// are matched to graph nodes by id.
EmbeddingStore encode(const KnowledgeGraph& kg, const RelGraphModel& model);

/// Bilinear-diagonal score: sum_i h_i r_i t_i.
double score_edge(std::span<const double> head, std::span<const double> relation, std::span<const double> tail);

struct LabeledTriples {
    std::vector<GraphIndex::Triple> triples;
    std::vector<double> labels; // 1 positive, 0 negative
};

/// Positives plus `negatives_per_positive` tail corruptions each, drawn from
/// skill nodes and rejecting true edges.
LabeledTriples sample_training_set(const GraphIndex& index, std::size_t negatives_per_positive, std::uint64_t seed,
                                   std::string_view stream);

/// Mean binary cross-entropy of sigmoid(score) over the labeled triples.
/// When `grad` is non-null it receives dLoss/dParams (same shapes).
double graph_loss(const GraphIndex& index, const GraphParams& params, const LabeledTriples& data,
                  GraphParams* grad = nullptr);

struct GraphTrainResult {
    RelGraphModel model;
    EmbeddingStore embeddings;
    std::vector<double> epoch_losses;
    double initial_loss = 0.0; // on a fixed held-aside negative sample
    double final_loss = 0.0;   // same sample, after training
};

/// Full-batch Adam on the link-prediction loss, fresh negatives each epoch.
GraphTrainResult train_graph(const KnowledgeGraph& kg, const GraphModelConfig& model_config,
                             const GraphTrainConfig& config);

/// |a - n| / max(|a|, |n|, floor) between analytic gradients and central
/// differences with the given step, maximized over every parameter.
struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t parameters_checked = 0;
};
GradientCheck gradient_check_graph(const KnowledgeGraph& kg, const RelGraphModel& model, double step = 1e-6,
                                   double floor = 1e-5);

void save_graph_model(const RelGraphModel& model, const std::filesystem::path& path);
RelGraphModel load_graph_model(const std::filesystem::path& path);

} // namespace jobrel
