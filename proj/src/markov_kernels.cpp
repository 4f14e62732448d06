#include "gyrofde/markov_kernels.hpp"

#include <cmath>

namespace gyrofde::kernels {
namespace {

constexpr double kSeriesLimit = 1.0;
constexpr int kTerms = 40;

// Coefficients of 3 - 4e^-x + e^-2x = sum_{n>=1} (-1)^n (2^n - 4)/n! x^n.
// Returns sum_{n>=first} c_n x^(n - shift).
double three_term_series(double x, int first, int shift) {
    double sum = 0.0;
    double fact = 1.0;
    double pow2 = 1.0;
    for (int n = 1; n <= kTerms; ++n) {
        fact *= n;
        pow2 *= 2.0;
        if (n < first) continue;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (pow2 - 4.0) / fact * std::pow(x, n - shift);
    }
    return sum;
}

}  // namespace

double allan_markov(double x) {
    if (x < kSeriesLimit) return -0.5 * three_term_series(x, 3, 2);
    const double g = 3.0 - 4.0 * std::exp(-x) + std::exp(-2.0 * x);
    return (1.0 - g / (2.0 * x)) / x;
}

double atrk_inflight(double x) {
    if (x < kSeriesLimit) return -0.5 * three_term_series(x, 3, 0);
    return x - 0.5 * (3.0 - 4.0 * std::exp(-x) + std::exp(-2.0 * x));
}

double atrk_turnon(double x) {
    const double one_minus_a = -std::expm1(-x);
    return 0.5 * one_minus_a * one_minus_a;
}

double xtrk_inflight(double x) {
    if (x < kSeriesLimit) {
        // sum_{n>=5} (-1)^n (2n - 2^(n-1)) / n! x^n
        double sum = 0.0;
        double fact = 1.0;
        double pow2 = 0.5;
        for (int n = 1; n <= kTerms; ++n) {
            fact *= n;
            pow2 *= 2.0;
            if (n < 5) continue;
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            sum += sign * (2.0 * n - pow2) / fact * std::pow(x, n);
        }
        return sum;
    }
    return x * x * x / 3.0 - x * x + x * (1.0 - 2.0 * std::exp(-x)) +
           0.5 * (1.0 - std::exp(-2.0 * x));
}

double excess_time(double x) {
    if (x < kSeriesLimit) {
        double sum = 0.0;
        double term = 1.0;
        for (int n = 1; n <= kTerms; ++n) {
            term *= -x / n;
            if (n >= 2) sum += term;
        }
        return sum;
    }
    return x + std::expm1(-x);
}

double xtrk_turnon(double x) {
    const double e = excess_time(x);
    return 0.5 * e * e;
}

}  // namespace gyrofde::kernels
