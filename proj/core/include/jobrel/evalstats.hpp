#pragma once

#include "jobrel/pairs.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jobrel {

struct Prediction {
    TitlePair pair;
    double predicted = 0.0;
    double actual = 0.0;
    double abs_error = 0.0;
    Region region = Region::Low; // from the actual score

    double signed_error() const { return predicted - actual; }
};

/// Validates both scores lie in [0, 1] and derives abs_error and region.
Prediction make_prediction(TitlePair pair, double predicted, const RegionPartition& partition = {});

double rmse(std::span<const Prediction> predictions);

struct RegionRmse {
    std::size_t count = 0;
    std::optional<double> rmse; // empty when count == 0
};

/// Regions are keyed on the actual score.
std::array<RegionRmse, 3> rmse_by_region(std::span<const Prediction> predictions,
                                         const RegionPartition& partition = {});

enum class TTestKind { Paired, Welch };
std::string_view ttest_kind_name(TTestKind k);

struct TTestResult {
    double t_value = 0.0;
    double p_value = 1.0; // two-sided
    double dof = 0.0;
    TTestKind kind = TTestKind::Welch;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

/// Regularized-incomplete-beta Student t CDF; dof > 0.
double student_t_cdf(double t, double dof);

/// Unequal-variance two-sample test, Welch-Satterthwaite dof. Needs
/// n_a, n_b >= 2 and a nonzero variance estimate.
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

/// Test on differences a_i - b_i. Needs equal lengths >= 2 and non-constant
/// differences.
TTestResult paired_t(std::span<const double> a, std::span<const double> b);

struct FiveNumber {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;

    bool operator==(const FiveNumber&) const = default;
};

/// Quartiles by linear interpolation between order statistics.
FiveNumber five_number_summary(std::vector<double> values);

struct RegionComparison {
    Region a = Region::Low;
    Region b = Region::Medium;
    std::optional<TTestResult> test; // empty when a side is too small or degenerate
    std::string note;

    std::string label() const; // e.g. "Low vs Medium"
};

struct RegionSummary {
    std::size_t count = 0;
    std::optional<double> rmse;
    std::optional<FiveNumber> errors; // signed errors
};

struct EvalReport {
    std::string model;
    std::size_t total = 0;
    double global_rmse = 0.0;
    std::array<RegionSummary, 3> regions;
    std::vector<RegionComparison> comparisons; // Low/Medium, Medium/High, Low/High
    RegionPartition partition;
};

/// Absolute errors are compared between regions with Welch's test, or the
/// paired test when both regions have the same size.
EvalReport build_report(std::string model, std::span<const Prediction> predictions,
                        const RegionPartition& partition = {});

inline constexpr double kSignificanceLevel = 0.05;

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

// CSV exports; reports are written in the given order.
std::string format_rmse_table(std::span<const EvalReport> reports);    // model,global,low,medium,high
std::string format_ttest_table(std::span<const EvalReport> reports);   // model,comparison,t,p
std::string format_boxplot(const EvalReport& report);                  // region,count,min,q1,median,q3,max
std::string format_heatmap(std::span<const EvalReport> reports);       // model,comparison,t,p,significant
std::string format_predictions(std::span<const Prediction> predictions);

} // namespace jobrel
