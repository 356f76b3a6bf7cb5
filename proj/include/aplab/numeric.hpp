#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aplab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Neumaier-compensated running sum. Order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }
    void merge(const CompensatedSum& o) noexcept {
        add(o.sum_);
        add(o.comp_);
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Pairwise (tree) summation with compensated leaves. Deterministic for a
/// given input order.
double stable_sum(std::span<const double> values) noexcept;

double mean(std::span<const double> values);

u64 isqrt(u64 n) noexcept;

/// Largest r with r^k <= n.
u64 iroot(u64 n, unsigned k) noexcept;

u64 gcd(u64 a, u64 b) noexcept;

/// Inverse of a modulo m (m >= 1, gcd(a, m) = 1). Returns 0 when m = 1.
u64 mod_inverse(u64 a, u64 m);

u64 mul_mod(u64 a, u64 b, u64 m) noexcept;

/// Primes p <= limit, plain sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

/// Distinct prime factors by trial division.
std::vector<u64> distinct_prime_factors(u64 n);

u64 euler_phi(u64 n);

/// Moebius function values mu[0..limit] (mu[0] = 0).
std::vector<std::int8_t> moebius_table(u64 limit);

bool is_prime_trial(u64 n) noexcept;

/// Number of threads the parallel kernels should use; honours APLAB_THREADS.
int kernel_threads();

} // namespace aplab
