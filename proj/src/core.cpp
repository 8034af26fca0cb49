#include "fcg/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fcg/numeric.hpp"

namespace fcg {

StateSpace::StateSpace(std::vector<std::string> labels) {
    if (labels.empty()) throw Error("state space needs at least one state");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) throw Error("duplicate state label '" + l + "'");
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

StateSpace StateSpace::anonymous(std::size_t m) {
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t i = 0; i < m; ++i) labels.push_back("s" + std::to_string(i));
    return StateSpace(std::move(labels));
}

std::size_t StateSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_->begin(), labels_->end(), label);
    if (it == labels_->end()) throw SpaceMismatch("unknown state '" + label + "'");
    return static_cast<std::size_t>(it - labels_->begin());
}

void require_same_space(const StateSpace& a, const StateSpace& b, const char* what) {
    if (!(a == b)) throw SpaceMismatch(std::string(what) + ": state spaces differ");
}

Gamble::Gamble(StateSpace space, std::vector<double> rewards)
    : space_(std::move(space)), rewards_(std::move(rewards)) {
    if (rewards_.size() != space_.size()) {
        std::ostringstream os;
        os << "gamble has " << rewards_.size() << " rewards for " << space_.size() << " states";
        throw SpaceMismatch(os.str());
    }
    for (std::size_t i = 0; i < rewards_.size(); ++i) {
        if (!std::isfinite(rewards_[i])) {
            throw DomainError("non-finite reward in state '" + space_.label(i) + "'");
        }
    }
}

Gamble Gamble::constant(StateSpace space, double value) {
    const auto m = space.size();
    return Gamble(std::move(space), std::vector<double>(m, value));
}

bool Gamble::is_constant() const noexcept {
    return std::all_of(rewards_.begin(), rewards_.end(),
                       [&](double x) { return x == rewards_.front(); });
}

Gamble linear_combination(double a, const Gamble& f, double b, const Gamble& g) {
    require_same_space(f.space(), g.space(), "linear_combination");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
    return Gamble(f.space(), std::move(out));
}

ProbabilityMeasure::ProbabilityMeasure(StateSpace space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size()) throw SpaceMismatch("measure length differs from state count");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
            throw DomainError("negative or non-finite weight for state '" + space_.label(i) + "'");
        }
    }
    const double total = neumaier_sum(weights_);
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "measure weights sum to " << total << ", not 1";
        throw DomainError(os.str());
    }
}

ProbabilityMeasure ProbabilityMeasure::uniform(StateSpace space) {
    const auto m = space.size();
    return ProbabilityMeasure(std::move(space), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

Gamble pointwise_map(const Gamble& f, const std::function<double(double)>& t) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto fail = [&](const std::string& why) {
            std::ostringstream os;
            os.precision(17);
            os << "state '" << f.space().label(i) << "' value " << f[i] << ": " << why;
            return DomainError(os.str());
        };
        double y;
        try {
            y = t(f[i]);
        } catch (const DomainError& e) {
            throw fail(e.what());
        }
        if (!std::isfinite(y)) throw fail("transform undefined");
        out[i] = y;
    }
    return Gamble(f.space(), std::move(out));
}

double expectation(const Gamble& f, const ProbabilityMeasure& p) {
    require_same_space(f.space(), p.space(), "expectation");
    NeumaierAccumulator acc;
    for (std::size_t i = 0; i < f.size(); ++i) acc.add(p[i] * f[i]);
    return acc.value();
}

bool dominates(const Gamble& f, const Gamble& g) {
    require_same_space(f.space(), g.space(), "dominates");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= g[i])) return false;
    }
    return true;
}

}  // namespace fcg
