#pragma once

#include "aplab/numeric.hpp"
#include "aplab/sieve_core.hpp"

#include <vector>

namespace aplab {

/// W = extra_factor * (product of primes p <= w_cut).
struct WModulus {
    double w_cut = 0.0;
    u64 extra_factor = 1;
    u64 W = 1;
    u64 phi_W = 1;
    std::vector<u64> primes; // distinct prime divisors of W, increasing

    double phi_ratio() const noexcept { return static_cast<double>(phi_W) / static_cast<double>(W); }
};

WModulus build_modulus(double w_cut, u64 extra_factor = 1);

/// Cutoff w = (1/2) log log X used for the primorial at scale X.
double default_w_cut(u64 X);

struct ResidueChoice {
    u64 b = 0;
    double score = 0.0;           // Lambda mass of the chosen class
    double reduced_total = 0.0;   // Lambda mass over all reduced classes
    u64 reduced_classes = 0;      // phi(W)
};

/// Reduced class b mod W with the largest Lambda mass in the window.
/// Ties go to the smallest b.
ResidueChoice select_residue(const PrimeWindow& pw, const WModulus& mod);

/// W-tricked reindexing t -> W(m0 + t - 1) + b, 1 <= t <= N.
struct Block {
    Window window;
    WModulus modulus;
    u64 b = 0;
    u64 m0 = 0;
    u64 N = 0;

    u64 value(u64 t) const noexcept { return modulus.W * (m0 + t - 1) + b; }
    /// Index t of value v, or 0 when v is off the progression or outside [1, N].
    u64 index_of(u64 v) const noexcept;
};

Block align_block(const PrimeWindow& pw, const WModulus& mod, u64 b);

enum class WeightVariant {
    with_prime_powers, // (phi(W)/W) Lambda(m) / log R
    truncated_prime,   // log R / (2 log 3X) * (phi(W)/W) Lambda(m) 1_{m prime}, X = cap_scale
};

/// Scale X behind the log(3X) cap: x itself, raised to ceil((x+H)/3) when the
/// window is long enough that x + H > 3x (only toy windows near 0).
u64 cap_scale(const Window& window) noexcept;

/// Weights f[t-1] for t = 1..N.
std::vector<double> prime_weights(const Block& block, const PrimeWindow& pw, double R, WeightVariant variant);

/// Mean of the weight vector.
double density(const std::vector<double>& f);

} // namespace aplab
