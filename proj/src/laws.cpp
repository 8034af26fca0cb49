#include "fcg/laws.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fcg/combine.hpp"

namespace fcg {

bool LawsReport::passed() const {
    return std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.passed; });
}

SampleBox closed_sample_box(const UtilitySpec& u) {
    switch (u.kind()) {
        case UtilityKind::identity: return {-10.0, 10.0};
        case UtilityKind::log1p: return {-0.99, 10.0};
        case UtilityKind::power: return {0.0, 5.0};
        case UtilityKind::discounted: return {0.0, 5.0};
        case UtilityKind::exponential:
            // exp(-a x) in [exp(-0.39), exp(1.5)], so three draws keep
            // sum exp(-a x_i) >= 2.03 > 2.
            return {-1.5 / u.parameter(), 0.39 / u.parameter()};
    }
    return {};
}

namespace {

double max_abs_diff(const Gamble& a, const Gamble& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

}  // namespace

LawsReport run_laws(const UtilitySpec& u, std::size_t trials, std::uint64_t seed, double tolerance,
                    std::size_t states) {
    LawsReport report{u, trials, seed, tolerance, {}, {}};
    const auto box = closed_sample_box(u);
    {
        std::ostringstream os;
        os.precision(6);
        os << "uniform on [" << box.lo << ", " << box.hi << "] per state, " << states << " states";
        report.sampler = os.str();
    }

    const auto space = StateSpace::anonymous(states);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(box.lo, box.hi);
    auto sample = [&] {
        std::vector<double> r(states);
        for (auto& x : r) {
            do {
                x = draw(rng);
            } while (!u.in_domain(x));
        }
        return Gamble(space, std::move(r));
    };
    auto op = [&](const Gamble& a, const Gamble& b) { return combine(u, a, b).combined; };
    const Gamble zero = Gamble::constant(space, 0.0);
    const bool log_kind = u.kind() == UtilityKind::log1p;

    double assoc = 0.0, comm = 0.0, ident = 0.0, mono = 0.0, fold = 0.0, logadd = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto f = sample();
        const auto g = sample();
        const auto h = sample();

        assoc = std::max(assoc, max_abs_diff(op(op(f, g), h), op(f, op(g, h))));
        comm = std::max(comm, max_abs_diff(op(f, g), op(g, f)));
        ident = std::max(ident, max_abs_diff(op(f, zero), f));

        std::vector<double> hi(states), lo(states);
        for (std::size_t i = 0; i < states; ++i) {
            hi[i] = std::max(f[i], g[i]);
            lo[i] = std::min(f[i], g[i]);
        }
        const auto upper = op(Gamble(space, hi), h);
        const auto lower = op(Gamble(space, lo), h);
        for (std::size_t i = 0; i < states; ++i) mono = std::max(mono, lower[i] - upper[i]);

        std::vector<Gamble> seq{f, g, h};
        const auto base = combine_seq(u, seq).combined;
        std::shuffle(seq.begin(), seq.end(), rng);
        fold = std::max(fold, max_abs_diff(base, combine_seq(u, seq).combined));

        if (log_kind) logadd = std::max(logadd, log_additivity_check(f, g));
    }

    auto add = [&](std::string name, double residual, double tol) {
        report.laws.push_back({std::move(name), residual, trials, residual <= tol});
    };
    add("associativity", assoc, tolerance);
    add("commutativity", comm, tolerance);
    add("identity", ident, tolerance);
    add("monotonicity", mono, tolerance);
    add("fold_order", fold, tolerance);
    if (log_kind) add("log_additivity", logadd, std::min(tolerance, 1e-10));
    return report;
}

}  // namespace fcg
