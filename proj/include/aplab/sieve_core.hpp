#pragma once

#include "aplab/numeric.hpp"

#include <optional>
#include <vector>

namespace aplab {

/// Half-open window (x, x + H].
struct Window {
    u64 x = 0;
    u64 H = 0;
    std::optional<double> theta_exponent;

    u64 end() const noexcept { return x + H; }
};

/// Window (x, x + H] with H unchecked beyond overflow.
Window make_window(u64 x, u64 H);

/// Window with H = floor(x^theta).
Window window_from_theta(u64 x, double theta);

/// floor(x^theta), snapping to the nearest integer when x^theta lies within
/// a relative 1e-12 of it (so 10^5 at 0.4 gives 100, not 99).
u64 floor_power(u64 x, double theta);

struct PrimePower {
    u64 offset = 0;
    u64 base = 0;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A sieved window: primes and proper prime powers inside (x, x + H].
/// Immutable once built; safe to share across threads.
struct PrimeWindow {
    Window window;
    std::vector<u64> prime_offsets;       // strictly increasing, x + o prime
    std::vector<PrimePower> prime_powers; // p^m with m >= 2, by offset

    u64 value(u64 offset) const noexcept { return window.x + offset; }
    bool is_prime_offset(u64 offset) const noexcept;

    /// Von Mangoldt weight at offset: log p on p^m (m >= 1), 0 otherwise.
    double lambda_at(u64 offset) const noexcept;

    /// Every n with Lambda(n) > 0 merged by offset: (offset, log p).
    std::vector<std::pair<u64, double>> lambda_support() const;
};

struct SieveOptions {
    u64 segment_bits = u64{1} << 20; // odd numbers per segment
    bool parallel = true;
};

/// Segmented, bit-packed odd-only sieve of (x, x + H].
PrimeWindow sieve_window(u64 x, u64 H, const SieveOptions& options = {});

/// Sum of Lambda(n) over the window.
double psi_delta(const PrimeWindow& pw);

/// Sum of log p over the window's primes.
double theta_delta(const PrimeWindow& pw);

/// Sum of log p over primes p = a (mod q) in the window. Requires a < q.
double theta_delta_progression(const PrimeWindow& pw, u64 q, u64 a);

u64 count_primes_progression(const PrimeWindow& pw, u64 q, u64 a);

} // namespace aplab
