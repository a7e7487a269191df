#include "xit/stats/ols.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "xit/core/error.hpp"
#include "xit/stats/descriptive.hpp"
#include "xit/stats/distributions.hpp"

namespace xit::stats {
namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::MatrixXd to_matrix(const Design& x, std::size_t n) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(x.columns.size()));
    for (std::size_t j = 0; j < x.columns.size(); ++j) {
        if (x.columns[j].size() != n) {
            throw InvalidArgument("regressor '" + x.names[j] + "' has " +
                                  std::to_string(x.columns[j].size()) + " values, expected " +
                                  std::to_string(n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x.columns[j][i];
        }
    }
    return m;
}

// Unpivoted QR keeps column order, so the first tiny |R_jj| relative to the
// column norm names the column that adds nothing new.
void check_rank(const Eigen::MatrixXd& r, const Eigen::MatrixXd& x, const Design& design) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        const double scale = x.col(j).norm();
        if (scale == 0.0 || std::fabs(r(j, j)) <= kRankTolerance * scale) {
            throw NumericError("design matrix is rank deficient: column '" +
                               design.names[static_cast<std::size_t>(j)] +
                               "' is linearly dependent on earlier columns");
        }
    }
}

}  // namespace

OlsReport ols(const std::vector<double>& y, const Design& design) {
    const std::size_t n = y.size();
    const std::size_t k = design.columns.size();
    if (design.names.size() != k) {
        throw InvalidArgument("design has mismatched names and columns");
    }
    if (k == 0) throw InvalidArgument("ols needs at least one regressor");
    if (n <= k) {
        throw InvalidArgument("ols needs more observations (" + std::to_string(n) +
                              ") than regressors (" + std::to_string(k) + ")");
    }

    const Eigen::MatrixXd x = to_matrix(design, n);
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(n));

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(static_cast<Eigen::Index>(k)).triangularView<Eigen::Upper>();
    check_rank(r, x, design);

    const Eigen::VectorXd beta = qr.solve(yv);
    const Eigen::VectorXd resid = yv - x * beta;

    const double ssr = resid.squaredNorm();
    const double sst0 = yv.squaredNorm();
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double df_resid = nd - kd;
    const double sigma2 = ssr / df_resid;

    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    const Eigen::MatrixXd cov = sigma2 * (r_inv * r_inv.transpose());

    OlsReport report;
    report.n_obs = static_cast<int>(n);
    report.df_resid = static_cast<int>(n - k);
    const double tcrit = student_t_quantile(0.975, df_resid);
    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        OlsCoefficient c;
        c.name = design.names[j];
        c.coef = beta(jj);
        c.std_err = std::sqrt(cov(jj, jj));
        c.t_value = c.std_err > 0.0 ? c.coef / c.std_err : std::copysign(INFINITY, c.coef);
        c.p_value = c.std_err > 0.0 ? student_t_two_sided_p(c.t_value, df_resid) : 0.0;
        c.ci_low = c.coef - tcrit * c.std_err;
        c.ci_high = c.coef + tcrit * c.std_err;
        report.coefficients.push_back(c);
    }

    report.residuals.assign(resid.data(), resid.data() + resid.size());
    report.r2_uncentered = sst0 > 0.0 ? 1.0 - ssr / sst0 : 0.0;
    report.adj_r2_uncentered = 1.0 - nd / df_resid * (1.0 - report.r2_uncentered);
    const double ess = sst0 - ssr;
    if (ssr > 0.0) {
        report.f_stat = (ess / kd) / sigma2;
        report.f_pvalue = f_sf(report.f_stat, kd, df_resid);
    } else {
        report.f_stat = INFINITY;
        report.f_pvalue = 0.0;
    }

    report.log_likelihood = ssr > 0.0 ? -nd / 2.0 * std::log(2.0 * std::numbers::pi) -
                                            nd / 2.0 * std::log(ssr / nd) - nd / 2.0
                                      : INFINITY;
    report.aic = -2.0 * report.log_likelihood + 2.0 * kd;
    report.bic = -2.0 * report.log_likelihood + std::log(nd) * kd;

    double dw_num = 0.0;
    for (Eigen::Index i = 1; i < resid.size(); ++i) {
        const double d = resid(i) - resid(i - 1);
        dw_num += d * d;
    }
    report.durbin_watson = ssr > 0.0 ? dw_num / ssr : 0.0;

    if (ssr > 0.0) {
        report.skew = skewness(report.residuals);
        report.kurtosis = kurtosis(report.residuals);
        report.jarque_bera = nd / 6.0 *
                             (report.skew * report.skew +
                              (report.kurtosis - 3.0) * (report.kurtosis - 3.0) / 4.0);
        report.jb_pvalue = chi2_sf(report.jarque_bera, 2.0);
    } else {
        report.jb_pvalue = 1.0;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    const auto& sv = svd.singularValues();
    report.cond_number = sv(0) / sv(sv.size() - 1);
    return report;
}

}  // namespace xit::stats
