#pragma once

#include <cmath>
#include <span>

namespace fcg {

// Compensated (Neumaier) summation.
class NeumaierAccumulator {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double neumaier_sum(std::span<const double> xs) noexcept {
    NeumaierAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace fcg
