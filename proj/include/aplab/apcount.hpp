#pragma once

#include "aplab/numeric.hpp"
#include "aplab/sieve_core.hpp"
#include "aplab/wtrick.hpp"

#include <span>
#include <utility>
#include <vector>

namespace aplab {

struct WeightedApSum {
    double S = 0.0;
    u64 r_max = 0;
    bool degenerate = false; // N < k
};

/// S = sum over 1 <= r <= N/(3k), 1 <= n <= N-(k-1)r of prod_j f(n + j r).
WeightedApSum weighted_ap_sum(std::span<const double> f, unsigned k);

enum class RRange {
    box, // r <= N/(3k)
    all, // every r with n + (k-1) r <= N
};

/// Classification of block indices: 0 neither, 1 prime, 2 prime power p^m, m >= 2.
std::vector<std::uint8_t> classify_block(const PrimeWindow& pw, const Block& block);

/// Number of (n, r), r >= 1, whose k block values are all prime.
u64 count_prime_aps(const PrimeWindow& pw, const Block& block, unsigned k, RRange mode);

/// Pairs in the box r <= N/(3k) whose k values are all prime powers (primes included).
u64 count_prime_power_aps(const PrimeWindow& pw, const Block& block, unsigned k);

struct ExclusionReport {
    u64 count = 0;
    std::vector<std::pair<u64, u64>> witnesses; // (n, r), sorted
    u64 proper_powers = 0;                      // prime powers of exponent >= 2 on the block
    u64 containment_bound = 0;                  // k * N * proper_powers
    bool within_bound = true;
};

/// Pairs in the box r <= N/(3k) with all entries prime powers and at least one of exponent >= 2.
ExclusionReport prime_power_exclusions(const PrimeWindow& pw, const Block& block, unsigned k);

/// ((phi(W) / (W log R)) log 3X)^k with X = cap_scale(window).
double cap_factor(const Block& block, double R, unsigned k);

struct WeightCapReport {
    bool holds = true;
    double max_product = 0.0;
    u64 pairs_checked = 0;
};

/// Every prime-power pair's weight product stays below the cap.
WeightCapReport check_weight_cap(std::span<const double> f, const PrimeWindow& pw, const Block& block, unsigned k,
                                 double cap);

struct LedgerInputs {
    unsigned k = 3;
    double S = 0.0;
    double cap_factor = 1.0;
    u64 all_prime_power_pairs = 0; // |T|
    u64 prime_aps = 0;             // |M|
    u64 exclusions = 0;            // |E|
    double C_k = 1.0;
    double c_k = 1.0;
    double delta = 0.0;            // mean of f
    u64 N = 0;
    u64 H = 0;
    u64 x = 0;
    double phi_ratio = 1.0;
    double log_R = 1.0;
};

/// Every term of the weighted-to-unweighted conversion, with the checks that
/// hold unconditionally under exact enumeration.
struct ConversionLedger {
    LedgerInputs in;
    double supper_rhs = 0.0; // cap * |T|
    bool supper_holds = false;
    bool partition_holds = false; // |T| = |M| + |E|
    double exact_lower = 0.0;     // S / cap - |E|
    bool exact_chain_holds = false;
    double exclusion_term = 0.0; // C_k N H / sqrt(x)
    double asymptotic_lower = 0.0;    // S / cap - C_k N H / sqrt(x)
    bool asymptotic_chain_holds = false;
    bool exclusion_bound_holds = false; // |E| <= C_k N H / sqrt(x)
    double rsz_rhs = 0.0;               // c_k delta^k N^2
    bool rsz_observed = false;
    double headline_scale = 0.0;  // N^2 / ((phi/W)^k (log R)^k)
    double benchmark_scale = 0.0; // H^2 / (log x)^(k+1)
    double headline_ratio = 0.0;
    double benchmark_ratio = 0.0;

    /// The checks that must hold on every run.
    bool unconditional_ok() const noexcept { return supper_holds && partition_holds && exact_chain_holds; }
};

ConversionLedger lower_bound_ledger(const LedgerInputs& in);

struct APCountReport {
    unsigned k = 3;
    double R = 0.0;
    WeightedApSum weighted;
    u64 count_prime_aps_box = 0;
    u64 count_prime_aps_all = 0;
    u64 count_prime_power_pairs = 0; // |T|
    ExclusionReport exclusions;
    double cap_factor = 0.0;
    WeightCapReport weight_cap;
    ConversionLedger ledger;
};

/// Full pipeline on one block with the prime-power-inclusive weights.
APCountReport run_apcount(const PrimeWindow& pw, const Block& block, unsigned k, double R, double C_k = 1.0,
                          double c_k = 1.0);

} // namespace aplab
