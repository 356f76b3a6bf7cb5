#include "aplab/numeric.hpp"

#include "aplab/errors.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <string>

namespace aplab {

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

namespace {

CompensatedSum tree_sum(std::span<const double> values) noexcept {
    constexpr std::size_t leaf = 32;
    CompensatedSum acc;
    if (values.size() <= leaf) {
        for (double v : values) acc.add(v);
        return acc;
    }
    const std::size_t half = values.size() / 2;
    acc = tree_sum(values.first(half));
    acc.merge(tree_sum(values.subspan(half)));
    return acc;
}

} // namespace

double stable_sum(std::span<const double> values) noexcept { return tree_sum(values).value(); }

double mean(std::span<const double> values) {
    if (values.empty()) throw input_error("mean of an empty vector");
    return stable_sum(values) / static_cast<double>(values.size());
}

u64 isqrt(u64 n) noexcept {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

namespace {

// r^k compared with n without overflow; returns true when r^k <= n.
bool pow_le(u64 r, unsigned k, u64 n) noexcept {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= r;
        if (acc > n) return false;
    }
    return true;
}

} // namespace

u64 iroot(u64 n, unsigned k) noexcept {
    if (k == 0) return 0;
    if (k == 1 || n < 2) return n;
    u64 r = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
    while (r > 0 && !pow_le(r, k, n)) --r;
    while (pow_le(r + 1, k, n)) ++r;
    return r;
}

u64 gcd(u64 a, u64 b) noexcept {
    while (b != 0) {
        const u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_inverse(u64 a, u64 m) {
    if (m == 1) return 0;
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 quot = old_r / r;
        i64 tmp = old_r - quot * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quot * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw input_error("mod_inverse: arguments are not coprime");
    const i64 mm = static_cast<i64>(m);
    return static_cast<u64>(((old_s % mm) + mm) % mm);
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (u128 m = static_cast<u128>(p) * p; m <= limit; m += p) composite[static_cast<u64>(m)] = true;
    }
    return primes;
}

std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 euler_phi(u64 n) {
    if (n == 0) return 0;
    u64 phi = n;
    for (u64 p : distinct_prime_factors(n)) phi = phi / p * (p - 1);
    return phi;
}

std::vector<std::int8_t> moebius_table(u64 limit) {
    std::vector<std::int8_t> mu(limit + 1, 1);
    mu[0] = 0;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        for (u64 m = p; m <= limit; m += p) {
            if (m > p) composite[m] = true;
            mu[m] = static_cast<std::int8_t>(-mu[m]);
        }
        const u128 sq = static_cast<u128>(p) * p;
        for (u128 m = sq; m <= limit; m += sq) mu[static_cast<u64>(m)] = 0;
    }
    return mu;
}

bool is_prime_trial(u64 n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d <= n / d; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

int kernel_threads() {
    if (const char* env = std::getenv("APLAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

} // namespace aplab
