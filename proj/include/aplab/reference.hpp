#pragma once

// Straightforward serial versions of the parallel kernels. Tests compare the
// two; the benchmark times them against each other.

#include "aplab/apcount.hpp"
#include "aplab/majorant.hpp"
#include "aplab/sieve_core.hpp"
#include "aplab/wtrick.hpp"

#include <span>
#include <vector>

namespace aplab::reference {

/// Unsegmented byte-per-number sieve of (x, x + H].
PrimeWindow sieve_window(u64 x, u64 H);

/// Lambda_R over a block with d in the outer loop.
std::vector<double> divisor_sum(const Block& block, double R);

/// weighted_ap_sum by a plain double loop over (r, n).
double weighted_ap_sum(std::span<const double> f, unsigned k);

/// Prime k-APs on a block by the same double loop.
u64 count_prime_aps(const PrimeWindow& pw, const Block& block, unsigned k, RRange mode);

/// S(x; Q) summed class by class over every q <= Q and a < q.
double bdh_variance(const PrimeWindow& pw, u64 Q);

} // namespace aplab::reference
