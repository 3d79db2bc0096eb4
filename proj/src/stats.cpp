#include "commentbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "commentbench/rng.hpp"

namespace commentbench {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

constexpr std::uint64_t kPermutationBudget = 100000;

bool is_constant(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

std::uint64_t factorial_capped(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= i;
        if (f > kPermutationBudget) return kPermutationBudget + 1;
    }
    return f;
}

// Statistics equal to the observed one up to rounding count as "as extreme".
constexpr double kTieTolerance = 1e-12;

double exact_permutation_p(const std::vector<double>& rx, const std::vector<double>& ry, double rho) {
    std::vector<std::size_t> perm(ry.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(ry.size());
    std::uint64_t extreme = 0;
    std::uint64_t total = 0;
    do {
        for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = ry[perm[i]];
        if (std::abs(pearson(rx, shuffled)) >= std::abs(rho) - kTieTolerance) ++extreme;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double monte_carlo_p(const std::vector<double>& rx, std::vector<double> ry, double rho, std::uint64_t seed) {
    Rng rng(seed);
    std::uint64_t extreme = 0;
    for (std::uint64_t b = 0; b < kPermutationBudget; ++b) {
        for (std::size_t i = ry.size() - 1; i > 0; --i) std::swap(ry[i], ry[rng.below(i + 1)]);
        if (std::abs(pearson(rx, ry)) >= std::abs(rho) - kTieTolerance) ++extreme;
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(kPermutationBudget + 1);
}

double t_approximation_p(double rho, std::size_t n) {
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

} // namespace

std::optional<SpearmanResult> spearman(std::span<const double> xs, std::span<const double> ys,
                                       std::uint64_t permutation_seed) {
    if (xs.size() != ys.size()) throw std::invalid_argument("spearman: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("spearman: need at least 3 pairs");
    if (is_constant(xs) || is_constant(ys)) return std::nullopt;
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    SpearmanResult r;
    r.rho = std::clamp(pearson(rx, ry), -1.0, 1.0);
    const std::size_t n = xs.size();
    if (n >= 10) {
        r.method = PValueMethod::t_approximation;
        r.p = t_approximation_p(r.rho, n);
    } else if (factorial_capped(n) <= kPermutationBudget) {
        r.method = PValueMethod::exact_permutation;
        r.p = exact_permutation_p(rx, ry, r.rho);
    } else {
        r.method = PValueMethod::monte_carlo;
        r.p = monte_carlo_p(rx, ry, r.rho, permutation_seed);
    }
    return r;
}

std::vector<double> bh_adjust(std::span<const double> pvals) {
    for (double p : pvals) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bh_adjust: p-value outside [0, 1]");
    }
    const std::size_t m = pvals.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pvals[a] < pvals[b]; });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t k = m; k-- > 0;) {
        const double candidate = pvals[order[k]] * (static_cast<double>(m) / static_cast<double>(k + 1));
        running = std::min(running, candidate);
        adjusted[order[k]] = std::min(1.0, running);
    }
    return adjusted;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty data");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace commentbench
