#include "jobrel/graphembed.hpp"

#include "jobrel/error.hpp"
#include "jobrel/random.hpp"
#include "matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace jobrel {

namespace {

using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

void fill_uniform(Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng)
{
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
    }
}

std::vector<std::size_t> layer_dims(const GraphModelConfig& c)
{
    std::vector<std::size_t> dims{c.base_dim};
    for (std::size_t l = 0; l + 1 < c.num_layers; ++l) dims.push_back(c.hidden_dim);
    dims.push_back(c.output_dim);
    return dims;
}

void validate_config(const GraphModelConfig& c)
{
    if (c.num_layers < 1 || c.base_dim < 1 || c.hidden_dim < 1 || c.output_dim < 1) {
        throw UsageError("graph model: layer count and dimensions must be >= 1");
    }
}

void check_shapes(const GraphParams& p, const GraphModelConfig& c, std::size_t nodes)
{
    const auto dims = layer_dims(c);
    auto fail = [](const std::string& what) { throw DataError("graph model shape mismatch: " + what); };
    if (p.layers.size() != c.num_layers) fail("layer count");
    if (static_cast<std::size_t>(p.base.rows()) != nodes || static_cast<std::size_t>(p.base.cols()) != dims[0]) {
        fail("base embedding");
    }
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const auto rows = static_cast<Eigen::Index>(dims[l]);
        const auto cols = static_cast<Eigen::Index>(dims[l + 1]);
        const auto& layer = p.layers[l];
        if (layer.self_weight.rows() != rows || layer.self_weight.cols() != cols) fail("self weight, layer " + std::to_string(l));
        for (const auto& w : layer.relation_weights) {
            if (w.rows() != rows || w.cols() != cols) fail("relation weight, layer " + std::to_string(l));
        }
    }
    if (p.relation_vectors.rows() != static_cast<Eigen::Index>(kDecoderRelations) ||
        p.relation_vectors.cols() != static_cast<Eigen::Index>(c.output_dim)) {
        fail("relation vectors");
    }
}

double softplus(double x)
{
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x)
{
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

std::vector<Eigen::MatrixXd*> GraphParams::tensors()
{
    std::vector<Eigen::MatrixXd*> out{&base};
    for (auto& l : layers) {
        for (auto& w : l.relation_weights) out.push_back(&w);
        out.push_back(&l.self_weight);
    }
    out.push_back(&relation_vectors);
    return out;
}

std::vector<const Eigen::MatrixXd*> GraphParams::tensors() const
{
    std::vector<const Eigen::MatrixXd*> out{&base};
    for (const auto& l : layers) {
        for (const auto& w : l.relation_weights) out.push_back(&w);
        out.push_back(&l.self_weight);
    }
    out.push_back(&relation_vectors);
    return out;
}

GraphParams GraphParams::zeros_like() const
{
    GraphParams z = *this;
    for (auto* t : z.tensors()) t->setZero();
    return z;
}

bool GraphParams::operator==(const GraphParams& other) const
{
    const auto a = tensors();
    const auto b = other.tensors();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]->rows() != b[i]->rows() || a[i]->cols() != b[i]->cols() || *a[i] != *b[i]) return false;
    }
    return true;
}

GraphIndex::GraphIndex(const KnowledgeGraph& kg)
{
    for (const auto& [id, node] : kg.nodes()) {
        index.emplace(id, node_ids.size());
        if (node.kind == NodeKind::Skill) skill_nodes.push_back(node_ids.size());
        node_ids.push_back(id);
    }
    const auto n = static_cast<Eigen::Index>(node_ids.size());

    // receivers[r][v] = senders u with a message u -> v under relation r
    std::array<std::vector<std::vector<std::size_t>>, kEncoderRelations> receivers;
    for (auto& r : receivers) r.resize(node_ids.size());
    for (const auto& e : kg.edges()) {
        const auto s = index.at(e.source);
        const auto t = index.at(e.target);
        const std::size_t rel = e.relation == Relation::HasSkill ? 0 : 1;
        positives.push_back({s, rel, t});
        receivers[rel][t].push_back(s);
        receivers[rel + 2][s].push_back(t);
    }
    for (std::size_t r = 0; r < kEncoderRelations; ++r) {
        std::vector<Eigen::Triplet<double>> entries;
        for (std::size_t v = 0; v < node_ids.size(); ++v) {
            const auto& from = receivers[r][v];
            for (auto u : from) {
                entries.emplace_back(static_cast<int>(v), static_cast<int>(u), 1.0 / static_cast<double>(from.size()));
            }
        }
        adjacency[r].resize(n, n);
        adjacency[r].setFromTriplets(entries.begin(), entries.end());
    }
}

bool GraphIndex::is_positive(const Triple& t) const
{
    return std::find(positives.begin(), positives.end(), t) != positives.end();
}

RelGraphModel init_model(const KnowledgeGraph& kg, const GraphModelConfig& config, std::uint64_t seed)
{
    validate_config(config);
    if (kg.nodes().empty()) throw DataError("init_model: empty graph");

    RelGraphModel model;
    model.config = config;
    for (const auto& [id, n] : kg.nodes()) model.node_ids.push_back(id);

    Rng rng(seed, "graph-init");
    const auto dims = layer_dims(config);
    auto& p = model.params;
    fill_uniform(p.base, static_cast<Eigen::Index>(model.node_ids.size()), static_cast<Eigen::Index>(dims[0]),
                 1.0 / std::sqrt(static_cast<double>(dims[0])), rng);
    p.layers.resize(config.num_layers);
    for (std::size_t l = 0; l < config.num_layers; ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
        const auto rows = static_cast<Eigen::Index>(dims[l]);
        const auto cols = static_cast<Eigen::Index>(dims[l + 1]);
        for (auto& w : p.layers[l].relation_weights) fill_uniform(w, rows, cols, bound, rng);
        fill_uniform(p.layers[l].self_weight, rows, cols, bound, rng);
    }
    fill_uniform(p.relation_vectors, static_cast<Eigen::Index>(kDecoderRelations),
                 static_cast<Eigen::Index>(config.output_dim), 1.0 / std::sqrt(static_cast<double>(config.output_dim)),
                 rng);
    return model;
}

ForwardPass forward(const GraphIndex& index, const GraphParams& params)
{
    ForwardPass fp;
    Eigen::MatrixXd h = params.base;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& layer = params.layers[l];
        Eigen::MatrixXd p = h * layer.self_weight;
        for (std::size_t r = 0; r < kEncoderRelations; ++r) {
            if (index.adjacency[r].nonZeros() == 0) continue;
            const Eigen::MatrixXd ah = index.adjacency[r] * h;
            p.noalias() += ah * layer.relation_weights[r];
        }
        fp.inputs.push_back(h);
        h = (l + 1 < params.layers.size()) ? Eigen::MatrixXd(p.cwiseMax(0.0)) : p;
        fp.preactivations.push_back(std::move(p));
    }
    fp.output = std::move(h);
    fp.norms = fp.output.rowwise().norm();
    fp.embeddings = fp.output;
    for (Eigen::Index v = 0; v < fp.output.rows(); ++v) {
        if (fp.norms(v) == 0.0) throw DataError("graph encoder produced a zero vector for '" + index.node_ids[v] + "'");
        fp.embeddings.row(v) /= fp.norms(v);
    }
    return fp;
}

EmbeddingStore encode(const KnowledgeGraph& kg, const RelGraphModel& model)
{
    const GraphIndex index(kg);
    if (model.node_ids.size() != index.node_ids.size()) {
        throw DataError("graph model shape mismatch: model has " + std::to_string(model.node_ids.size()) +
                        " nodes, graph has " + std::to_string(index.node_ids.size()));
    }
    check_shapes(model.params, model.config, index.node_ids.size());
    GraphParams aligned = model.params;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < model.node_ids.size(); ++i) {
        auto it = index.index.find(model.node_ids[i]);
        if (it == index.index.end() || !seen.insert(model.node_ids[i]).second) {
            throw DataError("graph model node '" + model.node_ids[i] + "' does not match the graph");
        }
        aligned.base.row(static_cast<Eigen::Index>(it->second)) = model.params.base.row(static_cast<Eigen::Index>(i));
    }

    const auto fp = forward(index, aligned);
    EmbeddingStore store(model.config.output_dim);
    std::vector<double> row(model.config.output_dim);
    for (std::size_t v = 0; v < index.node_ids.size(); ++v) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            row[i] = fp.embeddings(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(i));
        }
        store.add(index.node_ids[v], row);
    }
    return store;
}

double score_edge(std::span<const double> head, std::span<const double> relation, std::span<const double> tail)
{
    if (head.size() != relation.size() || head.size() != tail.size()) {
        throw DataError("score_edge: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < head.size(); ++i) s += head[i] * relation[i] * tail[i];
    return s;
}

LabeledTriples sample_training_set(const GraphIndex& index, std::size_t negatives_per_positive, std::uint64_t seed,
                                   std::string_view stream)
{
    LabeledTriples out;
    for (const auto& t : index.positives) {
        out.triples.push_back(t);
        out.labels.push_back(1.0);
    }
    if (negatives_per_positive == 0 || index.skill_nodes.empty()) return out;

    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> truth;
    for (const auto& t : index.positives) truth.emplace(t.head, t.relation, t.tail);

    Rng rng(seed, stream);
    constexpr int kMaxAttempts = 32;
    for (const auto& t : index.positives) {
        for (std::size_t k = 0; k < negatives_per_positive; ++k) {
            for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                const auto cand = index.skill_nodes[rng.below(index.skill_nodes.size())];
                if (cand == t.head || cand == t.tail || truth.contains({t.head, t.relation, cand})) continue;
                out.triples.push_back({t.head, t.relation, cand});
                out.labels.push_back(0.0);
                break;
            }
        }
    }
    return out;
}

double graph_loss(const GraphIndex& index, const GraphParams& params, const LabeledTriples& data, GraphParams* grad)
{
    if (data.triples.empty()) throw DataError("graph_loss: no training triples");
    const auto fp = forward(index, params);
    const auto& e = fp.embeddings;
    const auto& rv = params.relation_vectors;
    const double inv_k = 1.0 / static_cast<double>(data.triples.size());

    long double loss = 0.0L;
    Eigen::MatrixXd d_emb;
    if (grad) {
        *grad = params.zeros_like();
        d_emb = Eigen::MatrixXd::Zero(e.rows(), e.cols());
    }
    for (std::size_t k = 0; k < data.triples.size(); ++k) {
        const auto& t = data.triples[k];
        const auto h = static_cast<Eigen::Index>(t.head);
        const auto r = static_cast<Eigen::Index>(t.relation);
        const auto tl = static_cast<Eigen::Index>(t.tail);
        const double s = (e.row(h).array() * rv.row(r).array() * e.row(tl).array()).sum();
        const double y = data.labels[k];
        loss += static_cast<long double>(softplus(s)) - y * s;
        if (grad) {
            const double g = (sigmoid(s) - y) * inv_k;
            d_emb.row(h) += g * (rv.row(r).array() * e.row(tl).array()).matrix();
            d_emb.row(tl) += g * (rv.row(r).array() * e.row(h).array()).matrix();
            grad->relation_vectors.row(r) += g * (e.row(h).array() * e.row(tl).array()).matrix();
        }
    }
    loss *= inv_k;
    if (!grad) return static_cast<double>(loss);

    // through the row normalization: dZ = (dE - E (E . dE)) / |Z|
    Eigen::MatrixXd d_p(e.rows(), e.cols());
    for (Eigen::Index v = 0; v < e.rows(); ++v) {
        const double proj = e.row(v).dot(d_emb.row(v));
        d_p.row(v) = (d_emb.row(v) - proj * e.row(v)) / fp.norms(v);
    }
    for (std::size_t li = params.layers.size(); li-- > 0;) {
        const auto& layer = params.layers[li];
        auto& g_layer = grad->layers[li];
        const auto& h = fp.inputs[li];
        g_layer.self_weight.noalias() = h.transpose() * d_p;
        Eigen::MatrixXd d_h = d_p * layer.self_weight.transpose();
        for (std::size_t r = 0; r < kEncoderRelations; ++r) {
            const auto& a = index.adjacency[r];
            if (a.nonZeros() == 0) continue;
            const Eigen::MatrixXd ah = a * h;
            g_layer.relation_weights[r].noalias() = ah.transpose() * d_p;
            const Eigen::MatrixXd msg = d_p * layer.relation_weights[r].transpose();
            d_h.noalias() += a.transpose() * msg;
        }
        if (li > 0) {
            d_p = d_h.cwiseProduct((fp.preactivations[li - 1].array() > 0.0).cast<double>().matrix());
        } else {
            grad->base = std::move(d_h);
        }
    }
    return static_cast<double>(loss);
}

GraphTrainResult train_graph(const KnowledgeGraph& kg, const GraphModelConfig& model_config,
                             const GraphTrainConfig& config)
{
    if (config.epochs < 1) throw UsageError("train_graph: epochs must be >= 1");
    if (!(config.learning_rate >= 0.0)) throw UsageError("train_graph: learning rate must be >= 0");
    const GraphIndex index(kg);
    if (index.positives.empty()) throw DataError("train_graph: graph has no edges");

    GraphTrainResult result;
    result.model = init_model(kg, model_config, config.seed);
    auto& params = result.model.params;

    const auto held = sample_training_set(index, std::max<std::size_t>(1, config.negatives_per_positive), config.seed,
                                          "negatives/held");
    result.initial_loss = graph_loss(index, params, held);

    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    GraphParams m = params.zeros_like();
    GraphParams v = params.zeros_like();
    GraphParams g;
    auto p_t = params.tensors();
    auto m_t = m.tensors();
    auto v_t = v.tensors();

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto data = sample_training_set(index, config.negatives_per_positive, config.seed,
                                              "negatives/epoch-" + std::to_string(epoch));
        result.epoch_losses.push_back(graph_loss(index, params, data, &g));
        const auto g_t = g.tensors();
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(epoch));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(epoch));
        for (std::size_t i = 0; i < p_t.size(); ++i) {
            m_t[i]->array() = beta1 * m_t[i]->array() + (1.0 - beta1) * g_t[i]->array();
            v_t[i]->array() = beta2 * v_t[i]->array() + (1.0 - beta2) * g_t[i]->array().square();
            p_t[i]->array() -=
                config.learning_rate * (m_t[i]->array() / c1) / ((v_t[i]->array() / c2).sqrt() + eps);
        }
    }
    result.final_loss = graph_loss(index, params, held);
    result.embeddings = encode(kg, result.model);
    return result;
}

GradientCheck gradient_check_graph(const KnowledgeGraph& kg, const RelGraphModel& model, double step, double floor)
{
    const GraphIndex index(kg);
    if (index.positives.empty()) throw DataError("gradient check: graph has no edges");
    if (model.node_ids != index.node_ids) throw DataError("gradient check: model nodes do not match graph");
    check_shapes(model.params, model.config, index.node_ids.size());

    const auto data = sample_training_set(index, 1, 7, "gradient-check");
    GraphParams analytic;
    graph_loss(index, model.params, data, &analytic);

    GraphParams probe = model.params;
    auto p_t = probe.tensors();
    const auto a_t = std::as_const(analytic).tensors();
    GradientCheck out;
    for (std::size_t ti = 0; ti < p_t.size(); ++ti) {
        auto& m = *p_t[ti];
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            const double saved = m.data()[i];
            m.data()[i] = saved + step;
            const double up = graph_loss(index, probe, data);
            m.data()[i] = saved - step;
            const double down = graph_loss(index, probe, data);
            m.data()[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = a_t[ti]->data()[i];
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
            out.max_relative_error = std::max(out.max_relative_error, rel);
            ++out.parameters_checked;
        }
    }
    return out;
}

void save_graph_model(const RelGraphModel& model, const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    const auto& c = model.config;
    out << "jobrel-graph-model 1\n";
    out << "config " << c.num_layers << ' ' << c.base_dim << ' ' << c.hidden_dim << ' ' << c.output_dim << '\n';
    out << "nodes " << model.node_ids.size() << '\n';
    for (const auto& id : model.node_ids) {
        if (id.find_first_of("\r\n") != std::string::npos) {
            throw DataError("graph model: node id '" + id + "' contains a line break");
        }
        out << id << '\n';
    }
    detail::write_matrix(out, "base", model.params.base);
    for (std::size_t l = 0; l < model.params.layers.size(); ++l) {
        const auto& layer = model.params.layers[l];
        for (std::size_t r = 0; r < kEncoderRelations; ++r) {
            detail::write_matrix(out, "layer" + std::to_string(l) + ".rel" + std::to_string(r),
                                 layer.relation_weights[r]);
        }
        detail::write_matrix(out, "layer" + std::to_string(l) + ".self", layer.self_weight);
    }
    detail::write_matrix(out, "relations", model.params.relation_vectors);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

RelGraphModel load_graph_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string magic;
    int version = 0;
    std::string tag;
    RelGraphModel model;
    auto& c = model.config;
    std::size_t n = 0;
    if (!(in >> magic >> version) || magic != "jobrel-graph-model" || version != 1) {
        throw DataError(path.string() + ": not a graph model checkpoint");
    }
    if (!(in >> tag >> c.num_layers >> c.base_dim >> c.hidden_dim >> c.output_dim) || tag != "config") {
        throw DataError(path.string() + ": bad config line");
    }
    if (!(in >> tag >> n) || tag != "nodes") throw DataError(path.string() + ": bad nodes line");
    model.node_ids.resize(n);
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    for (auto& id : model.node_ids) {
        if (!std::getline(in, id)) throw DataError(path.string() + ": truncated node list");
    }
    model.params.base = detail::read_matrix(in, "base");
    model.params.layers.resize(c.num_layers);
    for (std::size_t l = 0; l < c.num_layers; ++l) {
        auto& layer = model.params.layers[l];
        for (std::size_t r = 0; r < kEncoderRelations; ++r) {
            layer.relation_weights[r] = detail::read_matrix(in, "layer" + std::to_string(l) + ".rel" + std::to_string(r));
        }
        layer.self_weight = detail::read_matrix(in, "layer" + std::to_string(l) + ".self");
    }
    model.params.relation_vectors = detail::read_matrix(in, "relations");
    check_shapes(model.params, model.config, model.node_ids.size());
    return model;
}

} // namespace jobrel
