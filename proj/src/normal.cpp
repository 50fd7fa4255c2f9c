#include "cbal/normal.hpp"

#include <cmath>
#include <limits>

#include "cbal/errors.hpp"

namespace cbal {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

double norm_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_pdf(double x, double mean, double var) {
    if (!(var > 0.0)) throw DomainError("norm_pdf: variance must be positive");
    const double sd = std::sqrt(var);
    const double z = (x - mean) / sd;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) / sd;
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

double norm_cdf(double x, double mean, double var) {
    if (!(var > 0.0)) throw DomainError("norm_cdf: variance must be positive");
    return norm_cdf((x - mean) / std::sqrt(var));
}

namespace {

// Acklam's inverse normal cdf approximation, |rel err| < 1.15e-9.
double acklam(double p) {
    static const double a[] = {-39.69683028665376, 220.9460984245205, -275.9285104469687,
                               138.3577518672690, -30.66479806614716, 2.506628277459239};
    static const double b[] = {-54.47609879822406, 161.5858368580409, -155.6989798598866,
                               66.80131188771972, -13.28068155288572};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838,
                               -2.549732539343734, 4.374664141464968, 2.938163982698783};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996,
                               3.754408661907416};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("norm_quantile: p must be in (0,1)");
    double x = acklam(p);
    // One Halley step drives the residual to machine precision.
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(x) - p;
        const double u = e / norm_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double norm_quantile(double p, double mean, double var) {
    if (!(var > 0.0)) throw DomainError("norm_quantile: variance must be positive");
    return mean + std::sqrt(var) * norm_quantile(p);
}

}  // namespace cbal
