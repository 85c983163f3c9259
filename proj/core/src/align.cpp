#include "jobrel/align.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"
#include "jobrel/random.hpp"
#include "matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace jobrel {

namespace {

void fill_uniform(Eigen::MatrixXd& m, double bound, Rng& rng)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-bound, bound);
    }
}

struct Batch {
    Eigen::MatrixXd x; // input x B
    Eigen::MatrixXd t; // output x B, unit columns
};

Batch make_batch(const AlignmentModel& model, std::span<const AlignExample> examples)
{
    const auto in = static_cast<Eigen::Index>(model.input_dim());
    const auto out = static_cast<Eigen::Index>(model.output_dim());
    Batch b{Eigen::MatrixXd(in, static_cast<Eigen::Index>(examples.size())),
            Eigen::MatrixXd(out, static_cast<Eigen::Index>(examples.size()))};
    for (std::size_t k = 0; k < examples.size(); ++k) {
        const auto& ex = examples[k];
        if (static_cast<Eigen::Index>(ex.input.size()) != in || static_cast<Eigen::Index>(ex.target.size()) != out) {
            throw DataError("alignment: example " + std::to_string(k) + " has dimensions (" +
                            std::to_string(ex.input.size()) + " -> " + std::to_string(ex.target.size()) +
                            "), model expects (" + std::to_string(in) + " -> " + std::to_string(out) + ")");
        }
        const auto col = static_cast<Eigen::Index>(k);
        b.x.col(col) = Eigen::Map<const Eigen::VectorXd>(ex.input.data(), in);
        const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(ex.target.data(), out);
        const double n = t.norm();
        if (n == 0.0) throw DataError("alignment: zero target vector in example " + std::to_string(k));
        b.t.col(col) = t / n;
    }
    return b;
}

double batch_loss(const AlignmentModel& m, const Batch& b, AlignmentModel* grad)
{
    const Eigen::MatrixXd a = (m.w1 * b.x).colwise() + m.b1;
    const Eigen::MatrixXd h = a.cwiseMax(0.0);
    const Eigen::MatrixXd o = (m.w2 * h).colwise() + m.b2;
    const Eigen::RowVectorXd norms = o.colwise().norm();
    if ((norms.array() == 0.0).any()) throw DataError("alignment: network produced a zero vector");
    const Eigen::MatrixXd p = o.array().rowwise() / norms.array();
    const Eigen::MatrixXd diff = p - b.t;
    const double scale = 1.0 / static_cast<double>(diff.size());
    const double loss = diff.squaredNorm() * scale;
    if (!grad) return loss;

    const Eigen::MatrixXd dp = 2.0 * scale * diff;
    // through the column normalization: do = (dp - p (p . dp)) / |o|
    const Eigen::RowVectorXd proj = (p.array() * dp.array()).colwise().sum();
    const Eigen::MatrixXd d_o = ((dp - (p.array().rowwise() * proj.array()).matrix()).array().rowwise() /
                                 norms.array()).matrix();
    grad->w2.noalias() = d_o * h.transpose();
    grad->b2 = d_o.rowwise().sum();
    const Eigen::MatrixXd d_a = (m.w2.transpose() * d_o).cwiseProduct((a.array() > 0.0).cast<double>().matrix());
    grad->w1.noalias() = d_a * b.x.transpose();
    grad->b1 = d_a.rowwise().sum();
    return loss;
}

void sgd_step(AlignmentModel& m, const AlignmentModel& g, double lr)
{
    m.w1 -= lr * g.w1;
    m.b1 -= lr * g.b1;
    m.w2 -= lr * g.w2;
    m.b2 -= lr * g.b2;
}

} // namespace

std::vector<Eigen::MatrixXd*> AlignmentModel::tensors()
{
    return {&w1, &w2};
}

std::vector<Eigen::VectorXd*> AlignmentModel::biases()
{
    return {&b1, &b2};
}

AlignmentModel init_alignment(std::size_t input_dim, std::size_t hidden_dim, std::size_t output_dim,
                              std::uint64_t seed)
{
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1) throw UsageError("alignment: dimensions must be >= 1");
    AlignmentModel m;
    m.seed = seed;
    m.w1.resize(static_cast<Eigen::Index>(hidden_dim), static_cast<Eigen::Index>(input_dim));
    m.b1.resize(static_cast<Eigen::Index>(hidden_dim));
    m.w2.resize(static_cast<Eigen::Index>(output_dim), static_cast<Eigen::Index>(hidden_dim));
    m.b2.resize(static_cast<Eigen::Index>(output_dim));
    Rng rng(seed, "align-init");
    const double b_in = 1.0 / std::sqrt(static_cast<double>(input_dim));
    const double b_hidden = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    fill_uniform(m.w1, b_in, rng);
    fill_uniform(m.w2, b_hidden, rng);
    m.b1.setZero();
    m.b2.setZero();
    return m;
}

EmbeddingVector map_text_to_graph(std::span<const double> text_embedding, const AlignmentModel& model)
{
    if (text_embedding.size() != model.input_dim()) {
        throw DataError("alignment: input dimension " + std::to_string(text_embedding.size()) + ", model expects " +
                        std::to_string(model.input_dim()));
    }
    const Eigen::Map<const Eigen::VectorXd> x(text_embedding.data(), static_cast<Eigen::Index>(text_embedding.size()));
    const Eigen::VectorXd h = (model.w1 * x + model.b1).cwiseMax(0.0);
    const Eigen::VectorXd o = model.w2 * h + model.b2;
    const double n = o.norm();
    if (n == 0.0) throw DataError("alignment: network produced a zero vector");
    EmbeddingVector out(static_cast<std::size_t>(o.size()));
    for (Eigen::Index i = 0; i < o.size(); ++i) out[static_cast<std::size_t>(i)] = o(i) / n;
    return out;
}

double alignment_loss(const AlignmentModel& model, std::span<const AlignExample> examples, AlignmentModel* grad)
{
    if (examples.empty()) throw DataError("alignment: no examples");
    if (grad) *grad = model;
    return batch_loss(model, make_batch(model, examples), grad);
}

AlignTrainResult train_alignment(const std::vector<AlignExample>& examples, const AlignTrainConfig& config)
{
    if (examples.empty()) throw DataError("train_alignment: empty training set");
    if (config.epochs < 1) throw UsageError("train_alignment: epochs must be >= 1");
    if (!(config.learning_rate > 0.0)) throw UsageError("train_alignment: learning rate must be > 0");
    if (config.batch_size < 1) throw UsageError("train_alignment: batch size must be >= 1");
    if (!(config.validation_fraction >= 0.0 && config.validation_fraction < 1.0)) {
        throw UsageError("train_alignment: validation fraction must lie in [0, 1)");
    }
    const auto in_dim = examples.front().input.size();
    const auto out_dim = examples.front().target.size();
    for (std::size_t k = 0; k < examples.size(); ++k) {
        if (examples[k].input.size() != in_dim || examples[k].target.size() != out_dim) {
            throw DataError("train_alignment: dimension mismatch in example " + std::to_string(k));
        }
    }

    // validation split; a single example validates on itself
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng split_rng(config.seed, "align-split");
    split_rng.shuffle(order);
    std::size_t n_val = 0;
    if (examples.size() >= 2 && config.validation_fraction > 0.0) {
        n_val = static_cast<std::size_t>(
            std::llround(config.validation_fraction * static_cast<double>(examples.size())));
        n_val = std::clamp<std::size_t>(n_val, 1, examples.size() - 1);
    }
    std::vector<AlignExample> train;
    std::vector<AlignExample> val;
    for (std::size_t i = 0; i < order.size(); ++i) (i < n_val ? val : train).push_back(examples[order[i]]);
    if (val.empty()) val = train;

    AlignTrainResult result;
    result.train_size = train.size();
    result.validation_size = n_val;
    AlignmentModel model = init_alignment(in_dim, config.hidden_dim, out_dim, config.seed);
    const Batch val_batch = make_batch(model, val);

    result.model = model;
    result.initial_validation_mse = batch_loss(model, val_batch, nullptr);
    result.best_validation_mse = result.initial_validation_mse;

    AlignmentModel grad = model;
    std::vector<std::size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::size_t since_best = 0;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        Rng rng(config.seed, "align-epoch-" + std::to_string(epoch));
        rng.shuffle(idx);
        double sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < idx.size(); start += config.batch_size) {
            const auto stop = std::min(idx.size(), start + config.batch_size);
            std::vector<AlignExample> chunk;
            chunk.reserve(stop - start);
            for (auto i = start; i < stop; ++i) chunk.push_back(train[idx[i]]);
            sum += batch_loss(model, make_batch(model, chunk), &grad);
            sgd_step(model, grad, config.learning_rate);
            ++batches;
        }
        result.train_mse.push_back(sum / static_cast<double>(batches));
        const double v = batch_loss(model, val_batch, nullptr);
        result.validation_mse.push_back(v);
        if (v < result.best_validation_mse) {
            result.best_validation_mse = v;
            result.best_epoch = epoch;
            result.model = model;
            since_best = 0;
        } else if (config.patience > 0 && ++since_best >= config.patience) {
            break;
        }
    }
    return result;
}

GradientCheck gradient_check_alignment(const AlignmentModel& model, std::span<const AlignExample> examples,
                                       double step, double floor)
{
    AlignmentModel analytic;
    alignment_loss(model, examples, &analytic);
    AlignmentModel probe = model;
    GradientCheck out;

    auto check_block = [&](double* values, const double* grads, Eigen::Index size) {
        for (Eigen::Index i = 0; i < size; ++i) {
            const double saved = values[i];
            values[i] = saved + step;
            const double up = alignment_loss(probe, examples);
            values[i] = saved - step;
            const double down = alignment_loss(probe, examples);
            values[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double rel = std::abs(grads[i] - numeric) / std::max({std::abs(grads[i]), std::abs(numeric), floor});
            out.max_relative_error = std::max(out.max_relative_error, rel);
            ++out.parameters_checked;
        }
    };
    check_block(probe.w1.data(), analytic.w1.data(), probe.w1.size());
    check_block(probe.b1.data(), analytic.b1.data(), probe.b1.size());
    check_block(probe.w2.data(), analytic.w2.data(), probe.w2.size());
    check_block(probe.b2.data(), analytic.b2.data(), probe.b2.size());
    return out;
}

double predict_str(std::string_view title_a, std::string_view title_b, const TextEncoder& encoder,
                   const AlignmentModel& model)
{
    if (csv::trim(title_a).empty() || csv::trim(title_b).empty()) throw DataError("predict_str: empty title");
    const auto a = map_text_to_graph(encoder.encode(title_a), model);
    const auto b = map_text_to_graph(encoder.encode(title_b), model);
    return str_score(a, b);
}

void save_alignment(const AlignmentModel& model, const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "jobrel-align 1\n";
    out << "dims " << model.input_dim() << ' ' << model.hidden_dim() << ' ' << model.output_dim() << '\n';
    out << "seed " << model.seed << '\n';
    detail::write_matrix(out, "w1", model.w1);
    detail::write_matrix(out, "b1", model.b1);
    detail::write_matrix(out, "w2", model.w2);
    detail::write_matrix(out, "b2", model.b2);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

AlignmentModel load_alignment(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string magic;
    std::string tag;
    int version = 0;
    std::size_t in_dim = 0;
    std::size_t hidden = 0;
    std::size_t out_dim = 0;
    AlignmentModel m;
    if (!(in >> magic >> version) || magic != "jobrel-align" || version != 1) {
        throw DataError(path.string() + ": not an alignment checkpoint");
    }
    if (!(in >> tag >> in_dim >> hidden >> out_dim) || tag != "dims") throw DataError(path.string() + ": bad dims");
    if (!(in >> tag >> m.seed) || tag != "seed") throw DataError(path.string() + ": bad seed");
    m.w1 = detail::read_matrix(in, "w1");
    m.b1 = detail::read_matrix(in, "b1");
    m.w2 = detail::read_matrix(in, "w2");
    m.b2 = detail::read_matrix(in, "b2");
    if (m.input_dim() != in_dim || m.hidden_dim() != hidden || m.output_dim() != out_dim ||
        static_cast<std::size_t>(m.b1.size()) != hidden || static_cast<std::size_t>(m.b2.size()) != out_dim ||
        static_cast<std::size_t>(m.w2.cols()) != hidden) {
        throw DataError(path.string() + ": parameter shapes disagree with dims");
    }
    return m;
}

} // namespace jobrel
