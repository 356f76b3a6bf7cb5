#pragma once

#include "aplab/numeric.hpp"
#include "aplab/wtrick.hpp"

#include <span>
#include <vector>

namespace aplab {

/// Truncated divisor sum Lambda_R and the majorant nu over a Block.
/// Vectors are indexed by t - 1.
struct MajorantTable {
    Block block;
    double eta = 0.0; // NaN when R was given directly
    double R = 0.0;
    double log_R = 0.0;
    std::vector<double> lambdaR;
    std::vector<double> nu;
    double normalization = 1.0;
};

/// Lambda_R(m_t) = sum over d | m_t, d <= R of mu(d) log(R/d), with R = N^eta.
/// Computed by a progression-restricted divisor sieve.
MajorantTable divisor_sum_table(const Block& block, double eta);

/// Same sieve at an explicit level R > 1.
MajorantTable divisor_sum_table_at_level(const Block& block, double R);

/// nu[t] = normalization * (phi(W)/W) * Lambda_R^2 / log R.
std::vector<double> nu_from_lambda(std::span<const double> lambdaR, double phi_ratio, double log_R,
                                   double normalization = 1.0);

/// Fills table.nu. With normalize set, normalization = 1 / mean(raw nu).
void nu_weights(MajorantTable& table, bool normalize);

struct MajorizationReport {
    bool holds = true;
    u64 worst_index = 0; // 1-based t of the largest f/nu, 0 if f == 0
    double worst_ratio = 0.0;
    u64 violations = 0;
    u64 first_violation = 0; // 1-based, 0 when none
};

/// Checks 0 <= f[t] <= nu[t] for every t. nu must be un-normalized.
MajorizationReport majorization_check(std::span<const double> f, const MajorantTable& table);

struct MomentOptions {
    double box_fraction = 0.0;      // r <= floor(N * box_fraction); 0 selects N / (3k)
    double exact_limit = 1e8;       // box sizes above this are sampled
    bool force_exact = false;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
};

struct MomentResult {
    double mean = 0.0;
    bool exact = true;
    std::uint64_t samples = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    double box_size = 0.0;
    u64 r_max = 0;
};

/// Average of prod_i nu(n + j_i r) over 1 <= r <= r_max, 1 <= n <= N - (k-1) r.
MomentResult moment_diagnostic(std::span<const double> nu, std::span<const u64> shifts, unsigned k,
                               const MomentOptions& options = {});

/// Same, on the table's nu rescaled to unit mean.
MomentResult moment_diagnostic(const MajorantTable& table, std::span<const u64> shifts, unsigned k,
                               const MomentOptions& options = {});

} // namespace aplab
