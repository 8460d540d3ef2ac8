#pragma once

#include <span>
#include <vector>

namespace scatter {

/// Largest |argument| for which the engine is validated (absolute error <= 1e-12).
inline constexpr double kBesselMaxArgument = 1000.0;

/// Bessel function of the first kind J_order(x) for integer order.
///
/// Uses the ascending power series for |x| <= 1 and Miller's backward
/// recurrence normalised by J_0 + 2 * sum_k J_2k = 1 otherwise. Negative
/// orders and arguments are reduced by J_{-n}(x) = (-1)^n J_n(x) and
/// J_n(-x) = (-1)^n J_n(x). Throws ScatterError(out_of_range) for
/// |x| >= kBesselMaxArgument.
double bessel_j(int order, double x);

/// J_n(x) for every n in [-max_order, max_order], computed in one recurrence.
class BesselTable {
public:
    BesselTable(int max_order, double x);

    double operator()(int n) const noexcept;
    int max_order() const noexcept { return max_order_; }
    double argument() const noexcept { return x_; }
    /// J_0 .. J_max_order.
    std::span<const double> nonnegative() const noexcept { return values_; }

private:
    int max_order_;
    double x_;
    std::vector<double> values_;
};

namespace detail {
/// J_0(x) .. J_max_order(x) for x >= 0, written into out (size max_order + 1).
void bessel_j_orders(int max_order, double x, std::span<double> out);
}  // namespace detail

}  // namespace scatter
