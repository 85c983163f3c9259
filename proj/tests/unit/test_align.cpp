#include "jobrel/align.hpp"
#include "jobrel/embed.hpp"
#include "jobrel/error.hpp"
#include "jobrel/random.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

using namespace jobrel;

namespace {

std::vector<double> random_unit(Rng& rng, std::size_t dim)
{
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-1, 1);
    normalize_in_place(v);
    return v;
}

// targets are normalized images of the inputs under a fixed linear map
std::vector<AlignExample> linear_task(std::size_t n, std::size_t in, std::size_t out, std::uint64_t seed)
{
    Rng rng(seed, "linear-task");
    std::vector<std::vector<double>> m(out, std::vector<double>(in));
    for (auto& row : m) {
        for (auto& x : row) x = rng.uniform(-1, 1);
    }
    std::vector<AlignExample> ex;
    for (std::size_t k = 0; k < n; ++k) {
        auto x = random_unit(rng, in);
        std::vector<double> t(out, 0.0);
        for (std::size_t i = 0; i < out; ++i) {
            for (std::size_t j = 0; j < in; ++j) t[i] += m[i][j] * x[j];
        }
        // shift off the origin so every target is well defined
        t[0] += 2.0;
        normalize_in_place(t);
        ex.push_back({std::move(x), std::move(t)});
    }
    return ex;
}

} // namespace

TEST_CASE("mapped vectors have unit norm")
{
    const auto m = init_alignment(8, 6, 5, 1);
    Rng rng(2, "unit");
    for (int i = 0; i < 50; ++i) {
        const auto y = map_text_to_graph(random_unit(rng, 8), m);
        CHECK(y.size() == 5);
        CHECK(l2_norm(y) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(map_text_to_graph(std::vector<double>(7, 0.1), m), DataError);
}

TEST_CASE("zero weights map every input to the normalized output bias")
{
    auto m = init_alignment(4, 3, 2, 1);
    m.w1.setZero();
    m.w2.setZero();
    m.b2 << 3.0, 4.0;
    const auto y = map_text_to_graph(std::vector<double>{1, 2, 3, 4}, m);
    CHECK(y[0] == doctest::Approx(0.6));
    CHECK(y[1] == doctest::Approx(0.8));
    m.b2.setZero();
    CHECK_THROWS_AS(map_text_to_graph(std::vector<double>{1, 2, 3, 4}, m), DataError);
}

TEST_CASE("forward pass 4 -> 3 -> 2 by hand")
{
    AlignmentModel m;
    m.w1.resize(3, 4);
    m.w1 << 1, 0, -1, 0.5,
            0, 2, 0, -1,
            -1, -1, -1, -1;
    m.b1.resize(3);
    m.b1 << 0.1, -0.2, 0.0;
    m.w2.resize(2, 3);
    m.w2 << 1, 1, 1,
            2, -1, 0.5;
    m.b2.resize(2);
    m.b2 << 0.0, 0.5;
    const std::vector<double> x{1, 2, 0.5, -1};
    // a = (1 - 0.5 - 0.5 + 0.1, 4 + 1 - 0.2, -2.5) = (0.1, 4.8, -2.5); h = (0.1, 4.8, 0)
    // o = (4.9, 0.2 - 4.8 + 0.5) = (4.9, -4.1)
    const double n = std::sqrt(4.9 * 4.9 + 4.1 * 4.1);
    const auto y = map_text_to_graph(x, m);
    CHECK(y[0] == doctest::Approx(4.9 / n).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(-4.1 / n).epsilon(1e-12));
}

TEST_CASE("alignment gradients agree with central differences")
{
    const auto ex = linear_task(12, 6, 3, 4);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto m = init_alignment(6, 4, 3, seed);
        // nonzero biases so their gradients are exercised away from zero
        Rng rng(seed, "bias");
        for (auto* b : m.biases()) {
            for (Eigen::Index i = 0; i < b->size(); ++i) (*b)(i) = rng.uniform(-0.3, 0.3);
        }
        const auto check = gradient_check_alignment(m, ex);
        CHECK(check.parameters_checked == 6 * 4 + 4 + 4 * 3 + 3);
        CHECK(check.max_relative_error < 1e-5);
    }
}

TEST_CASE("training fits a linear ground truth")
{
    const auto ex = linear_task(200, 6, 4, 7);
    AlignTrainConfig cfg;
    cfg.hidden_dim = 32;
    cfg.epochs = 400;
    cfg.learning_rate = 2.0;
    cfg.batch_size = 16;
    cfg.patience = 0;
    cfg.validation_fraction = 0.1;
    cfg.seed = 3;
    const auto res = train_alignment(ex, cfg);
    CHECK(res.train_size == 180);
    CHECK(res.validation_size == 20);
    CHECK(res.train_mse.back() < 1e-3);
    CHECK(res.best_validation_mse <= res.initial_validation_mse);
    CHECK(res.best_validation_mse < 1e-3);
    CHECK(alignment_loss(res.model, std::span(ex)) < 1e-3);

    const auto again = train_alignment(ex, cfg);
    CHECK(again.model == res.model);
}

TEST_CASE("early stopping keeps the best validation model")
{
    const auto ex = linear_task(40, 6, 4, 8);
    AlignTrainConfig cfg;
    cfg.hidden_dim = 8;
    cfg.epochs = 50;
    cfg.learning_rate = 500.0; // large enough to diverge
    cfg.patience = 3;
    const auto res = train_alignment(ex, cfg);
    CHECK(res.best_validation_mse <= res.initial_validation_mse);
    CHECK(res.validation_mse.size() <= 50);
    if (res.best_epoch > 0) CHECK(res.validation_mse[res.best_epoch - 1] == res.best_validation_mse);
}

TEST_CASE("predict_str is symmetric and self-similar")
{
    const ReferenceEmbedder enc(ReferenceEmbedderConfig{64, 3, 42});
    const auto m = init_alignment(64, 16, 8, 5);
    const char* titles[] = {"Data Scientist", "Registered Nurse", "Line Cook", "Senior Software Engineer"};
    for (const char* a : titles) {
        CHECK(predict_str(a, a, enc, m) == doctest::Approx(1.0).epsilon(1e-12));
        for (const char* b : titles) {
            const double s = predict_str(a, b, enc, m);
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
            CHECK(s == predict_str(b, a, enc, m));
        }
    }
    CHECK_THROWS_AS(predict_str("  ", "Nurse", enc, m), DataError);
}

TEST_CASE("alignment checkpoint round trip is exact")
{
    auto m = init_alignment(5, 4, 3, 9);
    m.b1(2) = 0.1 + 0.2;
    const auto path = std::filesystem::temp_directory_path() / "jobrel_align_test.txt";
    save_alignment(m, path);
    CHECK(load_alignment(path) == m);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_alignment(path), DataError);
}

TEST_CASE("training input validation")
{
    AlignTrainConfig cfg;
    CHECK_THROWS_AS(train_alignment({}, cfg), DataError);
    auto ex = linear_task(4, 3, 2, 1);
    ex[2].input.push_back(0.0);
    CHECK_THROWS_AS(train_alignment(ex, cfg), DataError);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train_alignment(linear_task(4, 3, 2, 1), cfg), UsageError);
}
