#include "xit/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xit/core/error.hpp"
#include "xit/core/log.hpp"
#include "xit/stats/distributions.hpp"

namespace xit::stats {
namespace {

void require_nonempty(std::span<const double> x, const char* what) {
    if (x.empty()) {
        throw InvalidArgument(std::string(what) + ": empty input");
    }
}

double central_moment(std::span<const double> x, double m, int order) {
    double sum = 0.0;
    for (const double v : x) sum += std::pow(v - m, order);
    return sum / static_cast<double>(x.size());
}

}  // namespace

double mean(std::span<const double> x) {
    require_nonempty(x, "mean");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) {
        throw InvalidArgument("sample variance needs at least two values");
    }
    const double m = mean(x);
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double median(std::span<const double> x) {
    require_nonempty(x, "median");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double median_absolute_deviation(std::span<const double> x) {
    const double m = median(x);
    std::vector<double> dev;
    dev.reserve(x.size());
    for (const double v : x) dev.push_back(std::fabs(v - m));
    return median(dev);
}

double skewness(std::span<const double> x) {
    const double m = mean(x);
    const double m2 = central_moment(x, m, 2);
    return central_moment(x, m, 3) / std::pow(m2, 1.5);
}

double kurtosis(std::span<const double> x) {
    const double m = mean(x);
    const double m2 = central_moment(x, m, 2);
    return central_moment(x, m, 4) / (m2 * m2);
}

MadFilterResult mad_filter(const std::vector<std::pair<std::string, double>>& values) {
    if (values.empty()) {
        throw InvalidArgument("mad_filter needs at least one subject");
    }
    std::vector<double> v;
    v.reserve(values.size());
    for (const auto& [id, value] : values) v.push_back(value);

    MadFilterResult result;
    result.median = median(v);
    result.mad = median_absolute_deviation(v);
    result.threshold = result.median - 2.0 * result.mad;
    result.degenerate = result.mad == 0.0;
    if (result.degenerate) {
        warn("MAD is zero; every subject at the median is excluded by the strict threshold");
    }
    for (const auto& [id, value] : values) {
        (value > result.threshold ? result.retained : result.excluded).push_back(id);
    }
    return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("pearson: vectors differ in length");
    }
    if (x.size() < 2) {
        throw InvalidArgument("pearson: need at least two observations");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw NumericError("correlation undefined: zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view ttest_mode_name(TTestMode mode) {
    switch (mode) {
        case TTestMode::Paired: return "paired";
        case TTestMode::TwoSamplePooled: return "two_sample_pooled";
        case TTestMode::Welch: return "welch";
    }
    return "unknown";
}

TTestMode parse_ttest_mode(std::string_view name) {
    if (name == "paired") return TTestMode::Paired;
    if (name == "two_sample_pooled" || name == "pooled") return TTestMode::TwoSamplePooled;
    if (name == "welch") return TTestMode::Welch;
    throw InvalidArgument("unknown t-test mode '" + std::string(name) + "'");
}

TTestResult t_test(std::span<const double> x, std::span<const double> y, TTestMode mode,
                   double df_override) {
    TTestResult result;
    if (mode == TTestMode::Paired) {
        if (x.size() != y.size() || x.size() < 2) {
            throw InvalidArgument("paired t-test needs two equal-length samples of size >= 2");
        }
        std::vector<double> d(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
        const bool all_zero = std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; });
        result.df = static_cast<double>(d.size() - 1);
        if (all_zero) {
            result.degenerate = true;
            result.t = 0.0;
            result.p = 1.0;
            if (df_override > 0.0) result.df = df_override;
            return result;
        }
        const double var = sample_variance(d);
        if (var == 0.0) {
            throw NumericError("paired t-test undefined: differences have zero variance");
        }
        result.t = mean(d) / std::sqrt(var / static_cast<double>(d.size()));
    } else {
        if (x.size() < 2 || y.size() < 2) {
            throw InvalidArgument("two-sample t-test needs at least two values per sample");
        }
        const double nx = static_cast<double>(x.size());
        const double ny = static_cast<double>(y.size());
        const double vx = sample_variance(x);
        const double vy = sample_variance(y);
        const double diff = mean(x) - mean(y);
        if (mode == TTestMode::TwoSamplePooled) {
            result.df = nx + ny - 2.0;
            const double pooled = ((nx - 1.0) * vx + (ny - 1.0) * vy) / result.df;
            const double se = std::sqrt(pooled * (1.0 / nx + 1.0 / ny));
            if (se == 0.0) throw NumericError("t-test undefined: both samples have zero variance");
            result.t = diff / se;
        } else {
            const double ax = vx / nx;
            const double ay = vy / ny;
            const double se2 = ax + ay;
            if (se2 == 0.0) throw NumericError("t-test undefined: both samples have zero variance");
            result.t = diff / std::sqrt(se2);
            result.df = se2 * se2 / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
        }
    }
    if (df_override > 0.0) result.df = df_override;
    result.p = student_t_two_sided_p(result.t, result.df);
    return result;
}

LineFit confidence_accuracy_fit(std::span<const double> accuracy,
                                std::span<const double> confidence) {
    LineFit fit;
    fit.r = pearson(accuracy, confidence);
    const double mx = mean(accuracy);
    const double my = mean(confidence);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < accuracy.size(); ++i) {
        sxy += (accuracy[i] - mx) * (confidence[i] - my);
        sxx += (accuracy[i] - mx) * (accuracy[i] - mx);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace xit::stats
