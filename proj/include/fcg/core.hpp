#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fcg/errors.hpp"

namespace fcg {

/// Ordered, non-empty list of distinct state labels. Copies share the label
/// storage; two spaces are equal iff their label sequences are equal.
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels);

    /// Labels "s0", "s1", ... for quick construction in tests and bindings.
    static StateSpace anonymous(std::size_t m);

    [[nodiscard]] std::size_t size() const noexcept { return labels_->size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return *labels_; }
    [[nodiscard]] const std::string& label(std::size_t i) const { return labels_->at(i); }
    [[nodiscard]] std::size_t index_of(const std::string& label) const;

    friend bool operator==(const StateSpace& a, const StateSpace& b) noexcept {
        return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
    }

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Throws SpaceMismatch naming `what` if the spaces differ.
void require_same_space(const StateSpace& a, const StateSpace& b, const char* what);

/// State-indexed reward vector. Rewards are dimensionless return fractions
/// (0.10 is +10%); every entry is finite.
class Gamble {
public:
    Gamble(StateSpace space, std::vector<double> rewards);

    /// Every state receives `value`.
    static Gamble constant(StateSpace space, double value);

    [[nodiscard]] const StateSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> rewards() const noexcept { return rewards_; }
    [[nodiscard]] std::size_t size() const noexcept { return rewards_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return rewards_[i]; }
    [[nodiscard]] bool is_constant() const noexcept;

    friend bool operator==(const Gamble& a, const Gamble& b) noexcept {
        return a.space_ == b.space_ && a.rewards_ == b.rewards_;
    }

private:
    StateSpace space_;
    std::vector<double> rewards_;
};

/// a*f + b*g, statewise.
Gamble linear_combination(double a, const Gamble& f, double b, const Gamble& g);

class ProbabilityMeasure {
public:
    static constexpr double kSumTolerance = 1e-12;

    /// Weights must be nonnegative and sum to one within kSumTolerance.
    ProbabilityMeasure(StateSpace space, std::vector<double> weights);

    static ProbabilityMeasure uniform(StateSpace space);

    [[nodiscard]] const StateSpace& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }

private:
    StateSpace space_;
    std::vector<double> weights_;
};

/// Statewise t(f(w)). `t` signals an undefined point either by throwing
/// DomainError or by returning a non-finite value; both surface as a
/// DomainError naming the state label and reward.
Gamble pointwise_map(const Gamble& f, const std::function<double(double)>& t);

/// Sum over states of p(w) f(w).
double expectation(const Gamble& f, const ProbabilityMeasure& p);

/// True iff f(w) >= g(w) in every state.
bool dominates(const Gamble& f, const Gamble& g);

}  // namespace fcg
