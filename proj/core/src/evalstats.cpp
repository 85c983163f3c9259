#include "jobrel/evalstats.hpp"

#include "jobrel/csv.hpp"
#include "jobrel/error.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace jobrel {

namespace {

double mean(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// unbiased sample variance, two-pass
double variance(std::span<const double> v, double m)
{
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// two-sided tail probability P(|T| >= |t|)
double two_sided_p(double t, double dof)
{
    const double x = dof / (dof + t * t);
    return std::clamp(boost::math::ibeta(dof / 2.0, 0.5, x), 0.0, 1.0);
}

Region region_from_name(std::string_view s)
{
    for (auto r : kRegions) {
        if (region_name(r) == s) return r;
    }
    throw DataError("unknown region '" + std::string(s) + "'");
}

std::string opt_fixed(const std::optional<double>& v)
{
    return v ? format_fixed(*v, 6) : std::string();
}

} // namespace

Prediction make_prediction(TitlePair pair, double predicted, const RegionPartition& partition)
{
    if (!(predicted >= 0.0 && predicted <= 1.0)) {
        throw DataError("predicted score " + format_double(predicted) + " outside [0, 1]");
    }
    Prediction p;
    p.actual = pair.score;
    p.region = assign_region(p.actual, partition);
    p.predicted = predicted;
    p.abs_error = std::abs(predicted - p.actual);
    p.pair = std::move(pair);
    return p;
}

double rmse(std::span<const Prediction> predictions)
{
    if (predictions.empty()) throw DataError("rmse: no predictions");
    double s = 0.0;
    for (const auto& p : predictions) {
        const double d = p.predicted - p.actual;
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(predictions.size()));
}

std::array<RegionRmse, 3> rmse_by_region(std::span<const Prediction> predictions, const RegionPartition& partition)
{
    std::array<std::vector<Prediction>, 3> buckets;
    for (const auto& p : predictions) buckets[static_cast<int>(assign_region(p.actual, partition))].push_back(p);
    std::array<RegionRmse, 3> out{};
    for (std::size_t r = 0; r < 3; ++r) {
        out[r].count = buckets[r].size();
        if (!buckets[r].empty()) out[r].rmse = rmse(buckets[r]);
    }
    return out;
}

std::string_view ttest_kind_name(TTestKind k)
{
    return k == TTestKind::Paired ? "paired" : "welch";
}

double student_t_cdf(double t, double dof)
{
    if (!(dof > 0.0)) throw UsageError("student_t_cdf: dof must be > 0");
    if (std::isnan(t)) throw UsageError("student_t_cdf: t is NaN");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double tail = 0.5 * two_sided_p(t, dof);
    return t > 0 ? 1.0 - tail : tail;
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2) throw DataError("welch_t: each sample needs at least 2 values");
    const double ma = mean(a);
    const double mb = mean(b);
    const double va = variance(a, ma) / static_cast<double>(a.size());
    const double vb = variance(b, mb) / static_cast<double>(b.size());
    const double se2 = va + vb;
    if (!(se2 > 0.0)) throw DataError("welch_t: degenerate variance (both samples constant)");
    TTestResult r;
    r.kind = TTestKind::Welch;
    r.n_a = a.size();
    r.n_b = b.size();
    r.t_value = (ma - mb) / std::sqrt(se2);
    r.dof = se2 * se2 /
            (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    r.p_value = two_sided_p(r.t_value, r.dof);
    return r;
}

TTestResult paired_t(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw DataError("paired_t: samples differ in length");
    if (a.size() < 2) throw DataError("paired_t: at least 2 pairs required");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double md = mean(d);
    const double vd = variance(d, md);
    if (!(vd > 0.0)) throw DataError("paired_t: zero variance of differences");
    TTestResult r;
    r.kind = TTestKind::Paired;
    r.n_a = a.size();
    r.n_b = b.size();
    r.dof = static_cast<double>(a.size() - 1);
    r.t_value = md / std::sqrt(vd / static_cast<double>(a.size()));
    r.p_value = two_sided_p(r.t_value, r.dof);
    return r;
}

FiveNumber five_number_summary(std::vector<double> values)
{
    if (values.empty()) throw DataError("five_number_summary: no values");
    std::sort(values.begin(), values.end());
    auto q = [&](double prob) {
        const double pos = prob * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {values.front(), q(0.25), q(0.5), q(0.75), values.back()};
}

std::string RegionComparison::label() const
{
    return std::string(region_name(a)) + " vs " + std::string(region_name(b));
}

EvalReport build_report(std::string model, std::span<const Prediction> predictions, const RegionPartition& partition)
{
    if (predictions.empty()) throw DataError("build_report: no predictions");
    partition.validate();
    EvalReport report;
    report.model = std::move(model);
    report.partition = partition;
    report.total = predictions.size();
    report.global_rmse = rmse(predictions);

    std::array<std::vector<double>, 3> abs_err;
    std::array<std::vector<double>, 3> signed_err;
    const auto by_region = rmse_by_region(predictions, partition);
    for (const auto& p : predictions) {
        const auto r = static_cast<int>(assign_region(p.actual, partition));
        abs_err[r].push_back(p.abs_error);
        signed_err[r].push_back(p.signed_error());
    }
    for (std::size_t r = 0; r < 3; ++r) {
        auto& s = report.regions[r];
        s.count = by_region[r].count;
        s.rmse = by_region[r].rmse;
        if (!signed_err[r].empty()) s.errors = five_number_summary(signed_err[r]);
    }

    constexpr std::array<std::pair<Region, Region>, 3> order{
        std::pair{Region::Low, Region::Medium}, std::pair{Region::Medium, Region::High},
        std::pair{Region::Low, Region::High}};
    for (const auto& [ra, rb] : order) {
        RegionComparison c;
        c.a = ra;
        c.b = rb;
        const auto& xa = abs_err[static_cast<int>(ra)];
        const auto& xb = abs_err[static_cast<int>(rb)];
        try {
            c.test = xa.size() == xb.size() ? paired_t(xa, xb) : welch_t(xa, xb);
        } catch (const DataError& e) {
            c.note = e.what();
        }
        report.comparisons.push_back(std::move(c));
    }
    return report;
}

std::string report_to_json(const EvalReport& report)
{
    using nlohmann::json;
    json j;
    j["model"] = report.model;
    j["total"] = report.total;
    j["global_rmse"] = report.global_rmse;
    j["partition"] = {{"low_upper", report.partition.low_upper}, {"medium_upper", report.partition.medium_upper}};
    json regions = json::object();
    for (auto r : kRegions) {
        const auto& s = report.regions[static_cast<int>(r)];
        json e;
        e["count"] = s.count;
        e["rmse"] = s.rmse ? json(*s.rmse) : json(nullptr);
        if (s.errors) {
            e["errors"] = {{"min", s.errors->min},
                           {"q1", s.errors->q1},
                           {"median", s.errors->median},
                           {"q3", s.errors->q3},
                           {"max", s.errors->max}};
        } else {
            e["errors"] = nullptr;
        }
        regions[std::string(region_name(r))] = e;
    }
    j["regions"] = regions;
    j["comparisons"] = json::array();
    for (const auto& c : report.comparisons) {
        json e;
        e["a"] = region_name(c.a);
        e["b"] = region_name(c.b);
        e["comparison"] = c.label();
        e["note"] = c.note;
        if (c.test) {
            e["kind"] = ttest_kind_name(c.test->kind);
            e["t"] = c.test->t_value;
            e["p"] = c.test->p_value;
            e["dof"] = c.test->dof;
            e["n_a"] = c.test->n_a;
            e["n_b"] = c.test->n_b;
            e["significant"] = c.test->p_value < kSignificanceLevel;
        } else {
            e["kind"] = nullptr;
        }
        j["comparisons"].push_back(e);
    }
    return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text)
{
    using nlohmann::json;
    EvalReport report;
    try {
        const auto j = json::parse(text);
        report.model = j.at("model").get<std::string>();
        report.total = j.at("total").get<std::size_t>();
        report.global_rmse = j.at("global_rmse").get<double>();
        report.partition.low_upper = j.at("partition").at("low_upper").get<double>();
        report.partition.medium_upper = j.at("partition").at("medium_upper").get<double>();
        for (auto r : kRegions) {
            const auto& e = j.at("regions").at(std::string(region_name(r)));
            auto& s = report.regions[static_cast<int>(r)];
            s.count = e.at("count").get<std::size_t>();
            if (!e.at("rmse").is_null()) s.rmse = e.at("rmse").get<double>();
            if (!e.at("errors").is_null()) {
                const auto& q = e.at("errors");
                s.errors = FiveNumber{q.at("min").get<double>(), q.at("q1").get<double>(), q.at("median").get<double>(),
                                      q.at("q3").get<double>(), q.at("max").get<double>()};
            }
        }
        for (const auto& e : j.at("comparisons")) {
            RegionComparison c;
            c.a = region_from_name(e.at("a").get<std::string>());
            c.b = region_from_name(e.at("b").get<std::string>());
            c.note = e.at("note").get<std::string>();
            if (!e.at("kind").is_null()) {
                TTestResult t;
                t.kind = e.at("kind").get<std::string>() == "paired" ? TTestKind::Paired : TTestKind::Welch;
                t.t_value = e.at("t").get<double>();
                t.p_value = e.at("p").get<double>();
                t.dof = e.at("dof").get<double>();
                t.n_a = e.at("n_a").get<std::size_t>();
                t.n_b = e.at("n_b").get<std::size_t>();
                c.test = t;
            }
            report.comparisons.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("eval report json: ") + e.what());
    }
    return report;
}

std::string format_rmse_table(std::span<const EvalReport> reports)
{
    std::string out = "model,global,low,medium,high\n";
    for (const auto& r : reports) {
        out += csv::escape(r.model) + "," + format_fixed(r.global_rmse, 6);
        for (const auto& s : r.regions) out += "," + opt_fixed(s.rmse);
        out += "\n";
    }
    return out;
}

std::string format_ttest_table(std::span<const EvalReport> reports)
{
    std::string out = "model,comparison,t,p\n";
    for (const auto& r : reports) {
        for (const auto& c : r.comparisons) {
            out += csv::escape(r.model) + "," + c.label() + ",";
            out += c.test ? format_fixed(c.test->t_value, 6) + "," + format_fixed(c.test->p_value, 6) : ",";
            out += "\n";
        }
    }
    return out;
}

std::string format_boxplot(const EvalReport& report)
{
    std::string out = "region,count,min,q1,median,q3,max\n";
    for (auto r : kRegions) {
        const auto& s = report.regions[static_cast<int>(r)];
        out += std::string(region_name(r)) + "," + std::to_string(s.count);
        if (s.errors) {
            for (double v : {s.errors->min, s.errors->q1, s.errors->median, s.errors->q3, s.errors->max}) {
                out += "," + format_fixed(v, 6);
            }
        } else {
            out += ",,,,,";
        }
        out += "\n";
    }
    return out;
}

std::string format_heatmap(std::span<const EvalReport> reports)
{
    std::string out = "model,comparison,t,p,significant\n";
    for (const auto& r : reports) {
        for (const auto& c : r.comparisons) {
            out += csv::escape(r.model) + "," + c.label() + ",";
            if (c.test) {
                out += format_fixed(c.test->t_value, 6) + "," + format_fixed(c.test->p_value, 6) + "," +
                       (c.test->p_value < kSignificanceLevel ? "true" : "false");
            } else {
                out += ",,";
            }
            out += "\n";
        }
    }
    return out;
}

std::string format_predictions(std::span<const Prediction> predictions)
{
    std::string out = "anchor,sample,actual,predicted,abs_error,region\n";
    for (const auto& p : predictions) {
        out += csv::escape(p.pair.anchor) + "," + csv::escape(p.pair.sample) + "," + format_fixed(p.actual, 9) + "," +
               format_fixed(p.predicted, 9) + "," + format_fixed(p.abs_error, 9) + "," +
               std::string(region_name(p.region)) + "\n";
    }
    return out;
}

} // namespace jobrel
