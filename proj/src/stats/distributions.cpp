#include "xit/stats/distributions.hpp"

#include <cmath>
#include <limits>

#include "xit/core/error.hpp"

namespace xit::stats {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a, b); converges fast for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return h;
        }
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

double gamma_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    double ap = a;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma series did not converge");
}

double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw NumericError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw InvalidArgument("incomplete_beta: shape parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument("incomplete_beta: x must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw InvalidArgument("upper_incomplete_gamma: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) {
        throw InvalidArgument("degrees of freedom must be positive");
    }
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_sided_p(t, df);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double q, double df) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidArgument("quantile level must lie in (0, 1)");
    }
    if (q == 0.5) return 0.0;
    if (q < 0.5) return -student_t_quantile(1.0 - q, df);
    double hi = 1.0;
    while (student_t_cdf(hi, df) < q) {
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < q) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double f_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw InvalidArgument("F distribution needs positive degrees of freedom");
    }
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return upper_incomplete_gamma(0.5 * df, 0.5 * x);
}

}  // namespace xit::stats
