#pragma once

// Globally adaptive Gauss-Kronrod (G10/K21) quadrature on finite intervals.
// Error estimates follow QUADPACK's qk21; the worst interval is bisected until
// the summed estimate meets the requested tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "casimir/compensated_sum.hpp"

namespace casimir {

struct QuadratureOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}

    [[nodiscard]] const QuadratureResult& partial() const noexcept { return partial_; }

private:
    QuadratureResult partial_;
};

namespace detail {

inline constexpr std::array<double, 11> kronrod21_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 11> kronrod21_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600850150942, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> gauss10_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    /// Error floor from rounding in the rule itself.
    double roundoff;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod21(const F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double abs_half = std::abs(half);

    const double f_center = f(center);
    double kronrod = f_center * kronrod21_weights[10];
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);

    std::array<double, 10> f_lo{};
    std::array<double, 10> f_hi{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kronrod21_nodes[j];
        f_lo[j] = f(center - dx);
        f_hi[j] = f(center + dx);
        const double pair = f_lo[j] + f_hi[j];
        kronrod += kronrod21_weights[j] * pair;
        abs_sum += kronrod21_weights[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
        if (j % 2 == 1) {
            gauss += gauss10_weights[j / 2] * pair;
        }
    }

    const double mean = 0.5 * kronrod;
    double asc = kronrod21_weights[10] * std::abs(f_center - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        asc += kronrod21_weights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
    }

    const double result = kronrod * half;
    abs_sum *= abs_half;
    asc *= abs_half;
    double error = std::abs((kronrod - gauss) * half);

    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double roundoff = 50.0 * eps * abs_sum;
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(roundoff, error);
    }
    return {lo, hi, result, error, roundoff};
}

}  // namespace detail

/// Integrates f over [lo, hi] until the error estimate is at most
/// max(rel_tol * |I|, abs_tol), or every interval is already at its rounding
/// floor (integrals that cancel to ~0). Breakpoints in `splits` that fall inside the
/// interval seed the initial partition.
template <typename F>
QuadratureResult integrate(const F& f, double lo, double hi, const QuadratureOptions& options = {},
                           const std::vector<double>& splits = {}) {
    if (!(options.rel_tol > 0.0) && !(options.abs_tol > 0.0)) {
        throw std::invalid_argument("quadrature needs a positive relative or absolute tolerance");
    }
    if (lo == hi) {
        return {};
    }
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
    }

    std::vector<double> edges{lo};
    for (double s : splits) {
        if (s > lo && s < hi) {
            edges.push_back(s);
        }
    }
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<detail::Segment> heap;
    QuadratureResult out;
    double total = 0.0;
    double total_error = 0.0;
    double total_roundoff = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto seg = detail::gauss_kronrod21(f, edges[i], edges[i + 1]);
        out.evaluations += 21;
        total += seg.value;
        total_error += seg.error;
        total_roundoff += seg.roundoff;
        heap.push(seg);
    }

    auto converged = [&] {
        return total_error <= std::max(options.rel_tol * std::abs(total), options.abs_tol) ||
               total_error <= total_roundoff * (1.0 + 1e-9);
    };

    while (!converged()) {
        if (heap.size() >= options.max_intervals) {
            out.value = sign * total;
            out.error = total_error;
            out.intervals = heap.size();
            throw QuadratureError("adaptive quadrature did not reach tolerance within " +
                                      std::to_string(options.max_intervals) + " intervals",
                                  out);
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Interval collapsed to adjacent doubles; nothing left to refine.
            out.value = sign * total;
            out.error = total_error;
            out.intervals = heap.size() + 1;
            throw QuadratureError("adaptive quadrature hit floating-point resolution", out);
        }
        const auto left = detail::gauss_kronrod21(f, worst.lo, mid);
        const auto right = detail::gauss_kronrod21(f, mid, worst.hi);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_roundoff += left.roundoff + right.roundoff - worst.roundoff;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves; the running totals drift after many updates.
    CompensatedSum<double> value;
    CompensatedSum<double> error;
    out.intervals = heap.size();
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = sign * value.value();
    out.error = error.value();
    return out;
}

}  // namespace casimir
