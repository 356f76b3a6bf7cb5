#include "aplab/sieve_core.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace aplab {

Window make_window(u64 x, u64 H) {
    if (H > std::numeric_limits<u64>::max() - x) {
        throw input_error("window (x, x+H] overflows 64 bits: x=" + std::to_string(x) +
                          " H=" + std::to_string(H));
    }
    return Window{x, H, std::nullopt};
}

u64 floor_power(u64 x, double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw input_error("theta must be finite and >= 0");
    const long double v = std::pow(static_cast<long double>(x), static_cast<long double>(theta));
    if (v >= 18446744073709551615.0L) throw input_error("x^theta overflows 64 bits");
    const long double nearest = std::round(v);
    if (nearest > 0 && std::fabs(v - nearest) <= 1e-12L * nearest) return static_cast<u64>(nearest);
    return static_cast<u64>(std::floor(v));
}

Window window_from_theta(u64 x, double theta) {
    Window w = make_window(x, floor_power(x, theta));
    w.theta_exponent = theta;
    return w;
}

bool PrimeWindow::is_prime_offset(u64 offset) const noexcept {
    return std::binary_search(prime_offsets.begin(), prime_offsets.end(), offset);
}

double PrimeWindow::lambda_at(u64 offset) const noexcept {
    if (is_prime_offset(offset)) return std::log(static_cast<double>(value(offset)));
    auto it = std::lower_bound(prime_powers.begin(), prime_powers.end(), offset,
                               [](const PrimePower& pp, u64 o) { return pp.offset < o; });
    if (it != prime_powers.end() && it->offset == offset) return std::log(static_cast<double>(it->base));
    return 0.0;
}

std::vector<std::pair<u64, double>> PrimeWindow::lambda_support() const {
    std::vector<std::pair<u64, double>> out;
    out.reserve(prime_offsets.size() + prime_powers.size());
    std::size_t i = 0, j = 0;
    while (i < prime_offsets.size() || j < prime_powers.size()) {
        const bool take_prime =
            j == prime_powers.size() || (i < prime_offsets.size() && prime_offsets[i] < prime_powers[j].offset);
        if (take_prime) {
            out.emplace_back(prime_offsets[i], std::log(static_cast<double>(value(prime_offsets[i]))));
            ++i;
        } else {
            out.emplace_back(prime_powers[j].offset, std::log(static_cast<double>(prime_powers[j].base)));
            ++j;
        }
    }
    return out;
}

namespace {

// Offsets of the primes among the odd numbers first_odd + 2i, i in [lo, hi).
std::vector<u64> sieve_segment(u64 x, u64 first_odd, u64 lo, u64 hi, const std::vector<u64>& base) {
    const u64 bits = hi - lo;
    std::vector<std::uint64_t> words((bits + 63) / 64, ~std::uint64_t{0});
    if (bits % 64 != 0) words.back() = (std::uint64_t{1} << (bits % 64)) - 1;

    const u128 seg_start = static_cast<u128>(first_odd) + 2 * static_cast<u128>(lo);
    const u128 seg_last = seg_start + 2 * static_cast<u128>(bits - 1);
    for (u64 p : base) {
        if (p == 2) continue;
        const u128 sq = static_cast<u128>(p) * p;
        if (sq > seg_last) break;
        u128 start = std::max(sq, seg_start);
        u128 m = (start + p - 1) / p * p;
        if ((m & 1) == 0) m += p;
        for (u128 j = (m - seg_start) / 2; j < bits; j += p) {
            words[static_cast<u64>(j >> 6)] &= ~(std::uint64_t{1} << (j & 63));
        }
    }
    if (seg_start == 1) words[0] &= ~std::uint64_t{1};

    std::vector<u64> offsets;
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t word = words[w];
        while (word != 0) {
            const int bit = std::countr_zero(word);
            word &= word - 1;
            const u64 value = static_cast<u64>(seg_start) + 2 * (64 * w + static_cast<u64>(bit));
            offsets.push_back(value - x);
        }
    }
    return offsets;
}

} // namespace

PrimeWindow sieve_window(u64 x, u64 H, const SieveOptions& options) {
    PrimeWindow pw;
    pw.window = make_window(x, H);
    if (H == 0) return pw;
    if (options.segment_bits == 0) throw input_error("segment size must be positive");

    const u64 end = x + H;
    const u64 root = isqrt(end);
    const std::vector<u64> base = primes_up_to(root);

    if (x < 2 && end >= 2) pw.prime_offsets.push_back(2 - x);

    const u64 first_odd = (x % 2 == 0) ? x + 1 : x + 2;
    if (first_odd > x && first_odd <= end) {
        const u64 odd_count = (end - first_odd) / 2 + 1;
        const u64 seg = options.segment_bits;
        const u64 segments = (odd_count + seg - 1) / seg;
        std::vector<std::vector<u64>> found(segments);
        const int threads = options.parallel ? kernel_threads() : 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (segments > 1)
        for (long long s = 0; s < static_cast<long long>(segments); ++s) {
            const u64 lo = static_cast<u64>(s) * seg;
            const u64 hi = std::min(odd_count, lo + seg);
            found[static_cast<std::size_t>(s)] = sieve_segment(x, first_odd, lo, hi, base);
        }
        for (auto& part : found) pw.prime_offsets.insert(pw.prime_offsets.end(), part.begin(), part.end());
    }

    // p^m in (x, end] for m >= 2: bases lie in (iroot(x, m), iroot(end, m)].
    for (unsigned m = 2; m < 64; ++m) {
        const u64 hi_base = iroot(end, m);
        if (hi_base < 2) break;
        const u64 lo_base = iroot(x, m) + 1;
        auto it = std::lower_bound(base.begin(), base.end(), lo_base);
        for (; it != base.end() && *it <= hi_base; ++it) {
            u128 v = 1;
            for (unsigned e = 0; e < m; ++e) v *= *it;
            pw.prime_powers.push_back(PrimePower{static_cast<u64>(v) - x, *it, m});
        }
    }
    std::sort(pw.prime_powers.begin(), pw.prime_powers.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.offset < b.offset; });
    return pw;
}

double psi_delta(const PrimeWindow& pw) {
    const auto support = pw.lambda_support();
    std::vector<double> logs;
    logs.reserve(support.size());
    for (const auto& [offset, w] : support) logs.push_back(w);
    return stable_sum(logs);
}

double theta_delta(const PrimeWindow& pw) {
    std::vector<double> logs;
    logs.reserve(pw.prime_offsets.size());
    for (u64 o : pw.prime_offsets) logs.push_back(std::log(static_cast<double>(pw.value(o))));
    return stable_sum(logs);
}

namespace {

void check_progression(u64 q, u64 a) {
    if (q == 0) throw input_error("modulus q must be >= 1");
    if (a >= q) throw input_error("residue a must satisfy a < q");
}

} // namespace

double theta_delta_progression(const PrimeWindow& pw, u64 q, u64 a) {
    check_progression(q, a);
    std::vector<double> logs;
    for (u64 o : pw.prime_offsets) {
        const u64 v = pw.value(o);
        if (v % q == a) logs.push_back(std::log(static_cast<double>(v)));
    }
    return stable_sum(logs);
}

u64 count_primes_progression(const PrimeWindow& pw, u64 q, u64 a) {
    check_progression(q, a);
    u64 count = 0;
    for (u64 o : pw.prime_offsets) count += (pw.value(o) % q == a) ? 1 : 0;
    return count;
}

} // namespace aplab
