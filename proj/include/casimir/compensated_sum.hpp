#pragma once

#include <cmath>

namespace casimir {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum, which happens
/// for the first few Matsubara terms.
template <typename Real>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(Real initial) : sum_(initial) {}

    constexpr CompensatedSum& operator+=(Real value) {
        const Real t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    [[nodiscard]] constexpr Real value() const { return sum_ + compensation_; }
    constexpr operator Real() const { return value(); }

private:
    Real sum_{0};
    Real compensation_{0};
};

}  // namespace casimir
