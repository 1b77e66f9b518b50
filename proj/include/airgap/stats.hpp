#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace airgap::stats {

double mean(std::span<const double> xs);

/// Unbiased (n-1) sample variance. Returns 0 for fewer than two values.
double variance(std::span<const double> xs);

/// Linear-interpolated percentile, p in [0, 100]; the same rule as numpy's
/// default ("type 7"). Throws on empty input.
double percentile(std::span<const double> xs, double p);

/// Gaussian tail probability Q(x) = P(Z > x).
double q_function(double x);

std::vector<double> to_double(std::span<const int> codes);

}  // namespace airgap::stats
