#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xit::stats {

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator).
double sample_variance(std::span<const double> x);
double median(std::span<const double> x);
/// median(|x - median(x)|), unscaled.
double median_absolute_deviation(std::span<const double> x);

/// Biased (moment) skewness and non-excess kurtosis.
double skewness(std::span<const double> x);
double kurtosis(std::span<const double> x);

struct MadFilterResult {
    std::vector<std::string> retained;
    std::vector<std::string> excluded;
    double median = 0.0;
    double mad = 0.0;
    double threshold = 0.0;
    /// MAD == 0: the strict inequality then excludes every subject at the
    /// median.
    bool degenerate = false;
};

/// Keeps subject i iff value_i > median - 2·MAD. Input order is preserved in
/// both output lists.
MadFilterResult mad_filter(const std::vector<std::pair<std::string, double>>& values);

/// Product-moment correlation. Throws InvalidArgument on length mismatch or
/// n < 2, NumericError on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

enum class TTestMode { Paired, TwoSamplePooled, Welch };

std::string_view ttest_mode_name(TTestMode mode);
TTestMode parse_ttest_mode(std::string_view name);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
    /// All paired differences exactly zero (t reported as 0, p as 1).
    bool degenerate = false;
};

/// Two-sided t-test of mean(x) - mean(y). df_override replaces the mode's
/// natural degrees of freedom when > 0.
TTestResult t_test(std::span<const double> x, std::span<const double> y, TTestMode mode,
                   double df_override = 0.0);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
};

/// Least-squares line of confidence on accuracy, with Pearson r.
LineFit confidence_accuracy_fit(std::span<const double> accuracy,
                                std::span<const double> confidence);

}  // namespace xit::stats
