#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ols_oracle.hpp"
#include "test_support.hpp"
#include "xit/core/error.hpp"
#include "xit/core/log.hpp"
#include "xit/core/permute.hpp"
#include "xit/stats/analysis.hpp"
#include "xit/stats/descriptive.hpp"
#include "xit/stats/distributions.hpp"
#include "xit/stats/ols.hpp"
#include "xit/stats/ranking.hpp"
#include "xit/stats/response_table.hpp"

namespace xit::stats {
namespace {

// Reference values from scipy.stats / scipy.special.
TEST(Distributions, StudentTMatchesReference) {
    struct Case {
        double df, t, cdf, two_sided;
    };
    const Case cases[] = {
        {1, -4.2, 0.0744027652986172, 0.1488055305972344},
        {1, 2.5, 0.8788810584091566, 0.2422378831816867},
        {3, -1.29, 0.14374600718827887, 0.28749201437655775},
        {3, 0.3, 0.6081183539800405, 0.783763292039919},
        {5.5, -4.2, 0.0034452249735452234, 0.006890449947090447},
        {5.5, 2.5, 0.9749399570653892, 0.050120085869221606},
        {30, -4.2, 0.00010989421710800977, 0.00021978843421601954},
        {30, 0.3, 0.6168769473578236, 0.7662461052843528},
    };
    for (const auto& c : cases) {
        EXPECT_NEAR(student_t_cdf(c.t, c.df), c.cdf, 1e-12) << c.df << " " << c.t;
        EXPECT_NEAR(student_t_two_sided_p(c.t, c.df), c.two_sided, 1e-12) << c.df << " " << c.t;
    }
    EXPECT_NEAR(student_t_quantile(0.975, 3), 3.182446305284263, 1e-9);
    EXPECT_NEAR(student_t_quantile(0.975, 31), 2.0395134463964077, 1e-9);
    EXPECT_NEAR(student_t_quantile(0.01, 3), -4.540702858471386, 1e-9);
}

TEST(Distributions, SpecialFunctionsMatchReference) {
    EXPECT_NEAR(incomplete_beta(2.5, 0.5, 0.3), 0.018927124071945658, 1e-13);
    EXPECT_NEAR(incomplete_beta(10, 3, 0.9), 0.889130022255, 1e-12);
    EXPECT_NEAR(upper_incomplete_gamma(2.5, 1.7), 0.6385699231037951, 1e-13);
    EXPECT_NEAR(upper_incomplete_gamma(0.5, 12), 9.63357008643095e-07, 1e-15);
    EXPECT_NEAR(f_sf(15.39, 3, 31), 2.60379888471853e-06, 1e-15);
    EXPECT_NEAR(chi2_sf(1.5, 2), 0.4723665527410149, 1e-13);
    EXPECT_NEAR(chi2_sf(7.3, 5), 0.19926778992124214, 1e-13);
    EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 0), 0.0);
    EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 1), 1.0);
}

TEST(Descriptive, BasicMoments) {
    const std::vector<double> x = {2, 4, 4, 4, 5, 5, 7, 9};
    EXPECT_DOUBLE_EQ(mean(x), 5.0);
    EXPECT_DOUBLE_EQ(median(x), 4.5);
    EXPECT_NEAR(sample_variance(x), 32.0 / 7.0, 1e-15);
    EXPECT_DOUBLE_EQ(median_absolute_deviation(x), 0.5);
    EXPECT_THROW(mean(std::vector<double>{}), InvalidArgument);
}

TEST(Pearson, ReferenceExamples) {
    EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0, 1e-15);
    EXPECT_NEAR(pearson(std::vector<double>{1, 5, 2}, std::vector<double>{-1, -5, -2}), -1.0, 1e-15);
    EXPECT_NEAR(pearson(std::vector<double>{32.99, 53.42, 100, 100},
                        std::vector<double>{0, 33.33, 66.67, 66.67}),
                0.9817467416725321, 1e-12);
}

TEST(Pearson, ErrorsAndInvariants) {
    EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), InvalidArgument);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
    EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), NumericError);

    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(10), y(10);
        for (std::size_t i = 0; i < 10; ++i) {
            x[i] = rng.uniform_unit();
            y[i] = x[i] + rng.uniform_unit();
        }
        const double r = pearson(x, y);
        EXPECT_NEAR(pearson(y, x), r, 1e-14);
        std::vector<double> ax(x);
        for (auto& v : ax) v = 3.5 * v - 2.0;
        EXPECT_NEAR(pearson(ax, y), r, 1e-12);
    }
}

TEST(TTest, MatchesReferenceForEveryMode) {
    const std::vector<double> x = {1, 2, 3, 4, 6};
    const std::vector<double> y = {2, 2, 5, 7, 9.5};
    const auto welch = t_test(x, y, TTestMode::Welch);
    EXPECT_NEAR(welch.t, -1.125462867742275, 1e-12);
    EXPECT_NEAR(welch.p, 0.3002352614820204, 1e-10);
    EXPECT_NEAR(welch.df, 6.498389903394203, 1e-10);
    const auto pooled = t_test(x, y, TTestMode::TwoSamplePooled);
    EXPECT_NEAR(pooled.t, -1.125462867742275, 1e-12);
    EXPECT_NEAR(pooled.p, 0.2930219059793629, 1e-10);
    EXPECT_DOUBLE_EQ(pooled.df, 8.0);
    const auto paired = t_test(x, y, TTestMode::Paired);
    EXPECT_NEAR(paired.t, -2.967301475883515, 1e-12);
    EXPECT_NEAR(paired.p, 0.041254503584114234, 1e-10);
    const auto paired3 = t_test(x, y, TTestMode::Paired, 3.0);
    EXPECT_DOUBLE_EQ(paired3.df, 3.0);
    EXPECT_NEAR(paired3.p, 0.05919606624528805, 1e-10);

    const auto unequal = t_test(std::vector<double>{1, 2, 3}, std::vector<double>{10, 11, 15, 12},
                                TTestMode::Welch);
    EXPECT_NEAR(unequal.t, -8.16496580927726, 1e-12);
    EXPECT_NEAR(unequal.p, 0.0007927395822877446, 1e-10);
}

TEST(TTest, AntisymmetryAndDegenerateCases) {
    const std::vector<double> x = {3, 1, 4, 1, 5};
    const std::vector<double> y = {2, 7, 1, 8, 2};
    for (const auto mode : {TTestMode::Paired, TTestMode::TwoSamplePooled, TTestMode::Welch}) {
        const auto a = t_test(x, y, mode);
        const auto b = t_test(y, x, mode);
        EXPECT_NEAR(a.t, -b.t, 1e-14);
        EXPECT_NEAR(a.p, b.p, 1e-14);
    }
    const auto same = t_test(x, x, TTestMode::Paired);
    EXPECT_TRUE(same.degenerate);
    EXPECT_EQ(same.t, 0.0);
    EXPECT_EQ(same.p, 1.0);
    EXPECT_THROW(t_test(std::vector<double>{1, 2, 3}, std::vector<double>{0, 1, 2}, TTestMode::Paired),
                 NumericError);
    EXPECT_THROW(t_test(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}, TTestMode::Paired),
                 InvalidArgument);
}

TEST(TTest, ModeNamesRoundTrip) {
    for (const auto mode : {TTestMode::Paired, TTestMode::TwoSamplePooled, TTestMode::Welch}) {
        EXPECT_EQ(parse_ttest_mode(ttest_mode_name(mode)), mode);
    }
    EXPECT_THROW(parse_ttest_mode("bogus"), InvalidArgument);
}

TEST(Ols, ExactFitSingleRegressor) {
    Design x{{"x"}, {{1, 2, 3, 4, 5}}};
    const auto r = ols({2, 4, 6, 8, 10}, x);
    EXPECT_NEAR(r.coefficients[0].coef, 2.0, 1e-14);
    EXPECT_NEAR(r.r2_uncentered, 1.0, 1e-14);
    for (const double e : r.residuals) EXPECT_NEAR(e, 0.0, 1e-12);
    EXPECT_EQ(r.n_obs, 5);
    EXPECT_EQ(r.df_resid, 4);
}

// Frozen from statsmodels OLS on the shipped accuracy tables: human accuracy
// regressed on ResNet101, ResNet50 and VOne accuracy, no constant.
TEST(Ols, MatchesReferenceOnFixtureTables) {
    const auto table = ResponseTable::read_csv(testing::fixture_dir() / "accuracy_tables.csv");
    const OlsReport r = human_on_models_ols(table);
    ASSERT_EQ(r.coefficients.size(), 3u);
    EXPECT_EQ(r.coefficients[0].name, "model:resnet101");
    const double coef[] = {0.7664681658574384, -0.02952363839225439, 0.38522894337353686};
    const double se[] = {0.3970903189253915, 0.3970830353479626, 0.2671674626961094};
    const double t[] = {1.9302111618627715, -0.07435129623803474, 1.4419006696624466};
    const double p[] = {0.06277358454458301, 0.9412085771643306, 0.1593575819332277};
    const double lo[] = {-0.0434028790247355, -0.8393798283203241, -0.159662689234789};
    const double hi[] = {1.5763392107396124, 0.7803325515358154, 0.9301205759818627};
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& c = r.coefficients[j];
        EXPECT_NEAR(c.coef, coef[j], 1e-10);
        EXPECT_NEAR(c.std_err, se[j], 1e-10);
        EXPECT_NEAR(c.t_value, t[j], 1e-9);
        EXPECT_NEAR(c.p_value, p[j], 1e-9);
        EXPECT_NEAR(c.ci_low, lo[j], 1e-8);
        EXPECT_NEAR(c.ci_high, hi[j], 1e-8);
    }
    EXPECT_NEAR(r.r2_uncentered, 0.5983310902070125, 1e-12);
    EXPECT_NEAR(r.adj_r2_uncentered, 0.5594599053883362, 1e-12);
    EXPECT_NEAR(r.f_stat, 15.392664077466863, 1e-9);
    EXPECT_NEAR(r.f_pvalue, 2.5997043415393053e-06, 1e-14);
    EXPECT_NEAR(r.log_likelihood, -172.64184708832178, 1e-9);
    EXPECT_NEAR(r.aic, 351.28369417664356, 1e-9);
    EXPECT_NEAR(r.bic, 355.86277575049206, 1e-9);
    EXPECT_NEAR(r.durbin_watson, 0.7824004820008008, 1e-12);
    EXPECT_NEAR(r.jarque_bera, 1.5059377436467205, 1e-10);
    EXPECT_NEAR(r.jb_pvalue, 0.47096623670025806, 1e-10);
    EXPECT_NEAR(r.skew, -0.38508804293481036, 1e-12);
    EXPECT_NEAR(r.kurtosis, 2.3145485614408385, 1e-12);
    EXPECT_NEAR(r.cond_number, 5.840389602638074, 1e-10);
    EXPECT_EQ(r.n_obs, 34);
    EXPECT_EQ(r.df_resid, 31);
}

TEST(Ols, AgreesWithQuadPrecisionNormalEquations) {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto [y, x] = testing::random_ols_problem(rng, 34, 4, 0.3);
        const auto r = ols(y, x);
        const auto oracle = testing::normal_equations_oracle(y, x);
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_NEAR(r.coefficients[j].coef, oracle[j], 1e-10 * std::fabs(oracle[j]) + 1e-14);
        }
    }
}

TEST(Ols, RankDeficiencyNamesTheColumn) {
    Design x{{"a", "b", "c"}, {{1, 2, 3, 4}, {0, 1, 0, 1}, {2, 4, 6, 8}}};
    try {
        ols({1, 2, 3, 5}, x);
        FAIL() << "expected rank error";
    } catch (const NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("'c'"), std::string::npos) << e.what();
    }
    EXPECT_THROW(ols({1, 2}, Design{{"a", "b"}, {{1, 2}, {3, 4}}}), InvalidArgument);
    EXPECT_THROW(ols({1, 2, 3}, Design{{"a"}, {{1, 2}}}), InvalidArgument);
}

TEST(MadFilter, WorkedExample) {
    const auto r = mad_filter({{"s5", 5}, {"s6", 6}, {"s7", 7}, {"s8", 8}, {"s100", 100}});
    EXPECT_DOUBLE_EQ(r.median, 7.0);
    EXPECT_DOUBLE_EQ(r.mad, 1.0);
    EXPECT_DOUBLE_EQ(r.threshold, 5.0);
    EXPECT_EQ(r.retained, (std::vector<std::string>{"s6", "s7", "s8", "s100"}));
    EXPECT_EQ(r.excluded, (std::vector<std::string>{"s5"}));
    EXPECT_FALSE(r.degenerate);
}

TEST(MadFilter, AllEqualExcludesEveryoneWithWarning) {
    int warnings = 0;
    auto previous = set_warning_sink([&](std::string_view) { ++warnings; });
    const auto r = mad_filter({{"a", 3}, {"b", 3}, {"c", 3}});
    set_warning_sink(previous);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.retained.empty());
    EXPECT_EQ(r.excluded.size(), 3u);
    EXPECT_EQ(warnings, 1);
}

TEST(MadFilter, TwoAnomalousSubjectsAmongThirtyTwo) {
    // 1690..1719 plus two fast subjects: median 1703.5, MAD 8, fence 1687.5.
    std::vector<std::pair<std::string, double>> values;
    for (int i = 0; i < 30; ++i) values.emplace_back("p" + std::to_string(i), 1690 + i);
    // Anomalously fast responders fall below the lower fence.
    values.emplace_back("fast1", 300);
    values.emplace_back("fast2", 250);
    const auto r = mad_filter(values);
    EXPECT_EQ(r.retained.size(), 30u);
    EXPECT_EQ(r.excluded, (std::vector<std::string>{"fast1", "fast2"}));
    EXPECT_DOUBLE_EQ(r.threshold, 1687.5);
}

TEST(MadFilter, ScaleInvariant) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(30));
        std::vector<std::pair<std::string, double>> v, scaled;
        const double c = std::pow(10.0, 4.0 * rng.uniform_unit() - 2.0);
        for (int i = 0; i < n; ++i) {
            // Continuous values: exact ties with the fence would flip under rounding.
            const double x = 100 * rng.uniform_unit();
            v.emplace_back(std::to_string(i), x);
            scaled.emplace_back(std::to_string(i), x * c);
        }
        auto previous = set_warning_sink([](std::string_view) {});
        const auto a = mad_filter(v);
        const auto b = mad_filter(scaled);
        set_warning_sink(previous);
        EXPECT_EQ(a.retained, b.retained);
    }
}

ResponseTable small_table() {
    ResponseTable t;
    auto add = [&t](const std::string& spec, const std::string& kind, double acc) {
        t.add({parse_spec(spec), kind, acc, std::nullopt});
    };
    add("baseline", "human", 100);
    add("grid:b=20", "human", 40);
    add("grid:b=40", "human", 60);
    add("color_flatten", "human", 10);
    add("baseline", "model:a", 80);
    add("grid:b=20", "model:a", 50);
    add("grid:b=40", "model:a", 50);
    add("color_flatten", "model:a", 90);
    return t;
}

TEST(ResponseTable, ValidatesRows) {
    ResponseTable t = small_table();
    EXPECT_THROW(t.add({TransformSpec::baseline(), "human", 50, std::nullopt}), InvalidArgument);
    EXPECT_THROW(t.add({TransformSpec::grid(80), "human", 101, std::nullopt}), InvalidArgument);
    EXPECT_THROW(t.add({TransformSpec::grid(80), "robot", 50, std::nullopt}), InvalidArgument);
    EXPECT_THROW(t.add({TransformSpec::grid(80), "human", 50, 6.0}), InvalidArgument);
    EXPECT_EQ(t.subject_kinds(), (std::vector<std::string>{"human", "model:a"}));
    EXPECT_EQ(t.specs().size(), 4u);
    EXPECT_EQ(t.specs()[3], TransformSpec::color_flatten());
}

TEST(ResponseTable, CsvRoundTrip) {
    testing::TempDir dir;
    const ResponseTable t = small_table();
    {
        std::ofstream out(dir / "t.csv");
        t.write_csv(out);
    }
    const ResponseTable back = ResponseTable::read_csv(dir / "t.csv");
    ASSERT_EQ(back.rows().size(), t.rows().size());
    for (const auto& row : t.rows()) {
        const auto* b = back.find(row.spec, row.subject_kind);
        ASSERT_NE(b, nullptr);
        EXPECT_EQ(b->accuracy, row.accuracy);
    }
}

TEST(Ranking, TransformLevelRanksByMeanAccuracy) {
    const auto ranking = difficulty_ranking(small_table(), RankLevel::Transform);
    EXPECT_EQ(ranking.rank_of("baseline", "human"), 1);
    EXPECT_EQ(ranking.rank_of("grid", "human"), 2);
    EXPECT_EQ(ranking.rank_of("color_flatten", "human"), 3);
    EXPECT_EQ(ranking.rank_of("color_flatten", "model:a"), 1);
    for (const auto& row : ranking.rows) EXPECT_DOUBLE_EQ(row.difficulty, 100 - row.mean_accuracy);
}

TEST(Ranking, TiesKeepCanonicalOrder) {
    ResponseTable t;
    t.add({TransformSpec::grid(20), "human", 50, std::nullopt});
    t.add({TransformSpec::baseline(), "human", 50, std::nullopt});
    t.add({TransformSpec::full_random(0.5), "human", 50, std::nullopt});
    const auto r = difficulty_ranking(t, RankLevel::ParameterPair);
    EXPECT_EQ(r.rank_of("baseline", "human"), 1);
    EXPECT_EQ(r.rank_of("full_random:p=0.5", "human"), 2);
    EXPECT_EQ(r.rank_of("grid:b=20", "human"), 3);
}

TEST(Ranking, PermutationAndAffineInvariance) {
    const auto table = ResponseTable::read_csv(testing::fixture_dir() / "accuracy_tables.csv");
    // Affine, so family means keep their order too.
    ResponseTable squashed;
    for (auto row : table.rows()) {
        row.accuracy = 0.8 * row.accuracy + 5.0;
        squashed.add(row);
    }
    for (const auto level : {RankLevel::Transform, RankLevel::ParameterPair}) {
        const auto a = difficulty_ranking(table, level);
        const auto b = difficulty_ranking(squashed, level);
        ASSERT_EQ(a.rows.size(), b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].rank, b.rows[i].rank);
        for (const auto& kind : table.subject_kinds()) {
            std::vector<int> ranks;
            for (const auto& row : a.rows) {
                if (row.subject_kind == kind) ranks.push_back(row.rank);
            }
            std::sort(ranks.begin(), ranks.end());
            for (std::size_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(ranks[i], static_cast<int>(i) + 1);
        }
    }
}

TEST(ConfidenceFit, CollinearAndNoisyAndShuffled) {
    const auto line = confidence_accuracy_fit(std::vector<double>{10, 50, 90},
                                              std::vector<double>{1.4, 3.0, 4.6});
    EXPECT_NEAR(line.r, 1.0, 1e-12);
    EXPECT_NEAR(line.slope, 0.04, 1e-12);
    EXPECT_NEAR(line.intercept, 1.0, 1e-12);

    Rng rng(19);
    std::vector<double> acc, conf;
    for (int i = 0; i < 34; ++i) {
        acc.push_back(100.0 * rng.uniform_unit());
        conf.push_back(1.0 + 4.0 * acc.back() / 100.0 + 0.1 * (rng.uniform_unit() - 0.5));
    }
    EXPECT_GT(confidence_accuracy_fit(acc, conf).r, 0.98);

    double sum_abs = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> shuffled = conf;
        fisher_yates_shuffle(std::span<double>(shuffled), rng);
        sum_abs += std::fabs(pearson(acc, shuffled));
    }
    EXPECT_LT(sum_abs / 100.0, 0.25);
    EXPECT_THROW(confidence_accuracy_fit(std::vector<double>{1, 1}, std::vector<double>{2, 3}),
                 NumericError);
}

TEST(Analysis, AggregatesTrialsWithMadFilter) {
    testing::TempDir dir;
    {
        std::ofstream out(dir / "trials.csv");
        out << "subject_id,subject_kind,spec,image,choice,true_class,correct,confidence,rt_ms,phase\n";
        // Practice rows are ignored.
        out << "h1,human,baseline,p.png,a,a,0,1,99999,practice\n";
        for (int s = 0; s < 5; ++s) {
            const double rt = s == 4 ? 10.0 : 1000.0 + 10 * s;
            for (int i = 0; i < 4; ++i) {
                out << "h" << s << ",human,baseline,img" << i << ".png,a,a," << (i < 3 ? 1 : 0) << ",4,"
                    << rt << ",test\n";
            }
        }
        out << "m,model:net,baseline,img0.png,a,a,1,,,test\n";
        out << "m,model:net,baseline,img1.png,b,a,0,,,test\n";
    }
    const auto trials = read_trials(dir / "trials.csv");
    EXPECT_EQ(trials.size(), 22u);
    const Aggregation agg = aggregate_trials(trials);
    ASSERT_TRUE(agg.mad.has_value());
    EXPECT_EQ(agg.mad->excluded, (std::vector<std::string>{"h4"}));
    const auto* human = agg.table.find(TransformSpec::baseline(), "human");
    ASSERT_NE(human, nullptr);
    EXPECT_DOUBLE_EQ(human->accuracy, 75.0);
    EXPECT_DOUBLE_EQ(*human->mean_confidence, 4.0);
    EXPECT_DOUBLE_EQ(agg.table.find(TransformSpec::baseline(), "model:net")->accuracy, 50.0);
}

TEST(Analysis, MadFilterNeedsThreeSubjects) {
    std::vector<TrialRow> trials;
    for (int s = 0; s < 2; ++s) {
        TrialRow t;
        t.subject_id = "h" + std::to_string(s);
        t.subject_kind = "human";
        t.correct = true;
        t.rt_ms = 500.0 + 100 * s;
        trials.push_back(t);
    }
    auto previous = set_warning_sink([](std::string_view) {});
    const Aggregation agg = aggregate_trials(trials);
    set_warning_sink(previous);
    EXPECT_FALSE(agg.mad.has_value());
    EXPECT_EQ(agg.rt_subjects, 2u);
    EXPECT_EQ(agg.trials_used, 2u);
    const auto report = build_report(agg.table, AnalysisOptions{}, &agg);
    EXPECT_EQ(report["mad_filter"]["applied"], false);
}

TEST(Analysis, ReportCarriesOlsFieldSet) {
    const auto table = ResponseTable::read_csv(testing::fixture_dir() / "accuracy_tables.csv");
    const auto report = build_report(table, AnalysisOptions{});
    for (const char* key : {"r2_uncentered", "adj_r2_uncentered", "f_stat", "log_likelihood", "aic",
                            "bic", "durbin_watson", "jarque_bera", "skew", "kurtosis",
                            "cond_number", "n_obs", "df_resid"}) {
        EXPECT_TRUE(report["ols"].contains(key)) << key;
    }
    for (const char* key : {"coef", "std_err", "t_value", "p_value", "ci_low", "ci_high"}) {
        EXPECT_TRUE(report["ols"]["coefficients"][0].contains(key)) << key;
    }
    EXPECT_EQ(report["comparisons"].size(), 3u * 7u);
    EXPECT_EQ(report["ttest_mode"], "welch");
    EXPECT_TRUE(report.contains("ranking"));
}

TEST(Analysis, ParseTests) {
    const auto o = parse_tests("ols,rank");
    EXPECT_FALSE(o.pearson);
    EXPECT_FALSE(o.ttest);
    EXPECT_TRUE(o.ols);
    EXPECT_TRUE(o.rank);
    EXPECT_THROW(parse_tests("ols,anova"), InvalidArgument);
}

}  // namespace
}  // namespace xit::stats
