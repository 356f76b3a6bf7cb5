#include "aplab/reference.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace aplab::reference {

PrimeWindow sieve_window(u64 x, u64 H) {
    PrimeWindow pw;
    pw.window = make_window(x, H);
    const u64 end = x + H;
    std::vector<std::uint8_t> composite(H + 1, 0); // index v - x
    const auto small = primes_up_to(isqrt(end));
    for (u64 p : small) {
        u64 m = std::max(p * p, (x / p + 1) * p);
        for (; m <= end; m += p) composite[m - x] = 1;
    }
    for (u64 v = x + 1; v <= end; ++v) {
        if (v >= 2 && !composite[v - x]) pw.prime_offsets.push_back(v - x);
    }
    for (u64 p : small) {
        u128 v = static_cast<u128>(p) * p;
        for (unsigned m = 2; v <= end; ++m, v *= p) {
            if (v > x) pw.prime_powers.push_back(PrimePower{static_cast<u64>(v) - x, p, m});
        }
    }
    std::sort(pw.prime_powers.begin(), pw.prime_powers.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.offset < b.offset; });
    return pw;
}

std::vector<double> divisor_sum(const Block& block, double R) {
    if (!(R > 1.0)) throw input_error("R must be > 1");
    const u64 D = static_cast<u64>(std::floor(R));
    const auto mu = moebius_table(D);
    std::vector<double> out(block.N, 0.0);
    for (u64 d = 1; d <= D; ++d) {
        if (mu[d] == 0 || gcd(d, block.modulus.W) != 1) continue;
        const double w = mu[d] * std::log(R / static_cast<double>(d));
        for (u64 t = 1; t <= block.N; ++t) {
            if (block.value(t) % d == 0) out[t - 1] += w;
        }
    }
    return out;
}

double weighted_ap_sum(std::span<const double> f, unsigned k) {
    if (k < 2) throw input_error("k must be >= 2");
    const u64 N = f.size();
    if (N < k) return 0.0;
    const u64 r_max = N / (3 * static_cast<u64>(k));
    CompensatedSum total;
    for (u64 r = 1; r <= r_max; ++r) {
        CompensatedSum row;
        for (u64 n = 1; n + (k - 1) * r <= N; ++n) {
            double prod = 1.0;
            for (unsigned j = 0; j < k; ++j) prod *= f[n + j * r - 1];
            if (prod != 0.0) row.add(prod);
        }
        total.add(row.value());
    }
    return total.value();
}

u64 count_prime_aps(const PrimeWindow& pw, const Block& block, unsigned k, RRange mode) {
    if (k < 2) throw input_error("k must be >= 2");
    const u64 N = block.N;
    std::vector<bool> prime(N + 1, false);
    for (u64 o : pw.prime_offsets) {
        if (const u64 t = block.index_of(pw.value(o))) prime[t] = true;
    }
    const u64 r_box = N / (3 * static_cast<u64>(k));
    u64 count = 0;
    for (u64 r = 1; (k - 1) * r < N; ++r) {
        if (mode == RRange::box && r > r_box) break;
        for (u64 n = 1; n + (k - 1) * r <= N; ++n) {
            bool ok = true;
            for (unsigned j = 0; j < k && ok; ++j) ok = prime[n + j * r];
            count += ok ? 1 : 0;
        }
    }
    return count;
}

double bdh_variance(const PrimeWindow& pw, u64 Q) {
    const double H = static_cast<double>(pw.window.H);
    CompensatedSum total;
    for (u64 q = 1; q <= Q; ++q) {
        const double c = H / static_cast<double>(euler_phi(q));
        for (u64 a = 0; a < q; ++a) {
            double theta = 0.0;
            for (u64 o : pw.prime_offsets) {
                const u64 p = pw.value(o);
                if (p % q == a) theta += std::log(static_cast<double>(p));
            }
            total.add((theta - c) * (theta - c));
        }
    }
    return total.value();
}

} // namespace aplab::reference
