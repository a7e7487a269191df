#pragma once

#include <string>
#include <vector>

namespace xit::stats {

/// Column-major design: columns[j][i] is regressor j at observation i.
struct Design {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

struct OlsCoefficient {
    std::string name;
    double coef = 0.0;
    double std_err = 0.0;
    double t_value = 0.0;
    double p_value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct OlsReport {
    std::vector<OlsCoefficient> coefficients;
    std::vector<double> residuals;
    double r2_uncentered = 0.0;
    double adj_r2_uncentered = 0.0;
    double f_stat = 0.0;
    double f_pvalue = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double durbin_watson = 0.0;
    double jarque_bera = 0.0;
    double jb_pvalue = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0;
    double cond_number = 0.0;
    int n_obs = 0;
    int df_resid = 0;
};

/// No-intercept least squares via Householder QR. Throws InvalidArgument on
/// shape errors and NumericError naming the first linearly dependent column.
OlsReport ols(const std::vector<double>& y, const Design& x);

}  // namespace xit::stats
