#include "scatter/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "scatter/error.hpp"

namespace scatter {
namespace {

constexpr double kSeriesThreshold = 1.0;
constexpr double kRescaleAbove = 1e250;

void check_domain(double x) {
    if (!std::isfinite(x) || std::abs(x) >= kBesselMaxArgument) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "Bessel argument %.6g outside validated domain |x| < %.0f", x,
                      kBesselMaxArgument);
        throw ScatterError(ErrorKind::out_of_range, buf);
    }
}

double series(int n, double x) {
    const double half = 0.5 * x;
    double lead = 1.0;
    for (int i = 1; i <= n && lead != 0.0; ++i) lead *= half / i;
    if (lead == 0.0) return 0.0;
    const double q = -half * half;
    double term = lead;
    double sum = lead;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller start index: far enough past both the order and the turning point
// x that the neglected tail is below double precision.
int miller_start(int max_order, double x) {
    const double base = std::max(static_cast<double>(max_order), x);
    int m = static_cast<int>(base + 30.0 + std::sqrt(60.0 * base));
    return m + (m & 1);
}

void miller(int max_order, double x, std::span<double> out) {
    const int m = miller_start(max_order, x);
    const double two_over_x = 2.0 / x;
    double next = 0.0;  // j_{k+1}
    double cur = 1e-300;  // j_k at k = m
    double norm = 0.0;
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = m; k >= 1; --k) {
        if (k <= max_order) out[static_cast<std::size_t>(k)] = cur;
        if ((k & 1) == 0) norm += 2.0 * cur;
        const double prev = k * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescaleAbove) {
            cur /= kRescaleAbove;
            next /= kRescaleAbove;
            norm /= kRescaleAbove;
            for (int i = k; i <= max_order; ++i) out[static_cast<std::size_t>(i)] /= kRescaleAbove;
        }
    }
    out[0] = cur;
    norm += cur;
    for (auto& v : out) v /= norm;
}

}  // namespace

namespace detail {

void bessel_j_orders(int max_order, double x, std::span<double> out) {
    if (x == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        out[0] = 1.0;
        return;
    }
    if (x <= kSeriesThreshold) {
        for (int n = 0; n <= max_order; ++n) out[static_cast<std::size_t>(n)] = series(n, x);
        return;
    }
    miller(max_order, x, out);
}

}  // namespace detail

double bessel_j(int order, double x) {
    check_domain(x);
    const int n = order < 0 ? -order : order;
    double sign = 1.0;
    if (order < 0 && (n & 1)) sign = -sign;
    if (x < 0.0 && (n & 1)) sign = -sign;
    const double ax = std::abs(x);
    if (ax <= kSeriesThreshold) return sign * (ax == 0.0 ? (n == 0 ? 1.0 : 0.0) : series(n, ax));
    std::vector<double> buf(static_cast<std::size_t>(n) + 1);
    miller(n, ax, buf);
    return sign * buf.back();
}

BesselTable::BesselTable(int max_order, double x)
    : max_order_(max_order), x_(x), values_(static_cast<std::size_t>(std::max(max_order, 0)) + 1) {
    if (max_order < 0) throw ScatterError(ErrorKind::invalid_argument, "BesselTable max_order must be >= 0");
    check_domain(x);
    detail::bessel_j_orders(max_order, std::abs(x), values_);
    if (x < 0.0) {
        for (std::size_t n = 1; n < values_.size(); n += 2) values_[n] = -values_[n];
    }
}

double BesselTable::operator()(int n) const noexcept {
    if (n >= 0) return n > max_order_ ? 0.0 : values_[static_cast<std::size_t>(n)];
    const int k = -n;
    if (k > max_order_) return 0.0;
    const double v = values_[static_cast<std::size_t>(k)];
    return (k & 1) ? -v : v;
}

}  // namespace scatter
