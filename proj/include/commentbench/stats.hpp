#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace commentbench {

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> xs, std::span<const double> ys);

enum class PValueMethod { exact_permutation, monte_carlo, t_approximation };

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0; // two-sided
    PValueMethod method = PValueMethod::t_approximation;
};

/// Spearman's rho as the Pearson correlation of average ranks.
///
/// p-value: for n >= 10 the t approximation t = rho*sqrt((n-2)/(1-rho^2))
/// with n-2 degrees of freedom. For smaller n the permutation distribution
/// is used, enumerated exactly when n! <= 100000 and otherwise estimated
/// from 100000 seeded random permutations.
///
/// Returns nullopt when either input is constant (rho undefined). Throws
/// std::invalid_argument on length mismatch or n < 3.
std::optional<SpearmanResult> spearman(std::span<const double> xs, std::span<const double> ys,
                                       std::uint64_t permutation_seed = 0);

/// Benjamini-Hochberg step-up adjustment, returned in input order.
/// Throws std::invalid_argument on p outside [0, 1].
std::vector<double> bh_adjust(std::span<const double> pvals);

/// Linear-interpolation quantile (q in [0,1]) of unsorted data.
double quantile(std::vector<double> values, double q);

} // namespace commentbench
