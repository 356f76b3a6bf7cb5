#pragma once

#include "aplab/numeric.hpp"
#include "aplab/sieve_core.hpp"

#include <optional>
#include <vector>

namespace aplab {

struct VarianceReport {
    u64 x = 0;
    u64 H = 0;
    u64 Q = 0;
    double A = 1.0;
    double S_total = 0.0;     // S_star + S_zero
    double S_star = 0.0;      // reduced classes
    double S_zero = 0.0;      // classes sharing a factor with q
    double S_psi = 0.0;       // sum over reduced classes of Psi^2
    double S_pp = 0.0;        // sum over reduced classes of P^2
    double S_class_sum = 0.0; // every class in one pass, for the split check
    std::vector<double> per_q; // per_q[q - 1] = contribution of modulus q
    double zero_closed_form = 0.0; // sum (q - phi(q)) (H / phi(q))^2
    bool zero_closed_form_applies = false; // Q <= x, so no window prime divides any q
    bool split_holds = false;      // S_total agrees with S_class_sum
    bool inequality_holds = false; // S_star <= 2 S_psi + 2 S_pp
    double log_X = 0.0;            // log of the window's x
    double ratio_HX = 0.0;
    double ratio_HXlogX = 0.0;
    double ratio_A = 0.0; // S / (H X (log X)^(1-A))
};

/// S(x; Q) = sum over q <= Q and all a mod q of
/// (theta(x+H; q, a) - theta(x; q, a) - H / phi(q))^2, with its decomposition.
VarianceReport bdh_variance(const PrimeWindow& pw, u64 Q, double A = 1.0);

/// Class sums for one modulus, every a in [0, q).
struct ClassTerms {
    std::vector<double> theta; // log p over window primes p = a
    std::vector<double> pp;    // log p over proper prime powers p^m = a
    std::vector<double> psi;   // Lambda mass, theta + pp
};

ClassTerms class_terms(const PrimeWindow& pw, u64 q);

struct PsiPpDecomposition {
    double S_psi = 0.0;
    double S_pp = 0.0;
    u64 classes_checked = 0;
    double max_identity_error = 0.0; // |(theta - H/phi) - (Psi - P)|
    bool identity_holds = false;
};

PsiPpDecomposition psi_pp_decomposition(const PrimeWindow& pw, u64 Q);

struct OffdiagReport {
    double offdiag = 0.0;        // ordered pairs p^k != p'^l of proper powers, tau_Q weighted
    double diagonal = 0.0;       // Q * sum (log p)^2
    double S_pp_all = 0.0;       // sum over q <= Q, all classes, of P^2
    bool identity_holds = false; // S_pp_all = diagonal + offdiag
};

/// Number of divisors d <= Q of h.
u64 tau_Q(u64 h, u64 Q);

OffdiagReport offdiag_divisor_count(const PrimeWindow& pw, u64 Q);

struct ScanRow {
    u64 x = 0;
    u64 H = 0;
    double S = 0.0;
    double ratio = 0.0;
};

struct ScanTable {
    u64 X = 0;
    double theta = 0.0;
    double B = 0.0;
    double A = 0.0;
    u64 Q = 0;
    std::uint64_t seed = 0;
    std::vector<ScanRow> rows;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

/// x uniform in [X, 2X], H = floor(x^theta), Q = floor(X^(1/2) (log X)^-B).
ScanTable variance_scan(u64 X, double theta, double B, double A, std::size_t sample_count, std::uint64_t seed);

struct MonotonicityReport {
    std::vector<u64> grid;
    std::vector<double> values;
    std::vector<double> increments;      // values[i] - values[i-1]
    std::vector<double> per_q_increments; // same from the per-q list of the largest Q
    bool verified = false;
    bool increments_match = false;
};

/// Nondecreasing grid; repeated entries allowed.
MonotonicityReport monotonicity_check(const PrimeWindow& pw, const std::vector<u64>& Q_grid);

struct CongruenceSubclass {
    u64 m = 1;
    std::vector<u64> residues; // reduced classes mod m
};

struct EmptyClassWitness {
    u64 q = 0;
    u64 a = 0;
};

struct EmptyClassReport {
    double delta = 1.0;
    u64 restricted_primes = 0;
    double lower_bound = 0.0;
    std::vector<EmptyClassWitness> witnesses;
    double mertens_sum = 0.0;        // sum of 1/q over primes H+1 < q <= Q
    double mertens_reference = 0.0;  // log log Q - log log(H + 1)
    bool all_verified = false;
};

EmptyClassReport empty_class_bound(const PrimeWindow& pw, u64 Q, double delta_class = 1.0,
                                   const std::optional<CongruenceSubclass>& subclass = std::nullopt);

} // namespace aplab
