#pragma once

#include <span>
#include <vector>

#include "hoising/constraints.hpp"

namespace hoising {

/// values[k] is the degree-k elementary symmetric polynomial of the inputs;
/// values[0] is always 1.
using Profile = std::vector<double>;

/// Linear convolution, output length |g|+|h|-1. Throws on empty input.
std::vector<double> convolve(std::span<const double> g, std::span<const double> h);

/// Profile of d inputs: the convolution of the d factors [1, a_j].
Profile symmetric_profile(std::span<const double> a);

/// Prefix and suffix profiles. seq[j] covers a_1..a_j (ascending folds),
/// rev[k] covers a_{d-k+1}..a_d (descending folds); seq[0] = rev[0] = [1].
struct CumulativePair {
  std::vector<Profile> seq;
  std::vector<Profile> rev;
};

CumulativePair cumulative_pair(std::span<const double> a);

/// Symmetric-table evaluation: sum_k coeffs[k] * E_k(a), ascending k.
double evaluate_edge(const FourierTable& t, std::span<const double> a);

/// Full gradient via the bidirectional cumulative profiles: component j sums
/// coeffs[k+1] * (seq[j-1] * rev[d-j])_k, one extra convolution per coordinate.
std::vector<double> edge_gradient(const FourierTable& t, std::span<const double> a);

// Instrumentation used by tests to bound the work per gradient call.
long long convolve_call_count();
void reset_convolve_call_count();

}  // namespace hoising
