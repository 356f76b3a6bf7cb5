#include "aplab/wtrick.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aplab {

WModulus build_modulus(double w_cut, u64 extra_factor) {
    if (!(w_cut >= 0.0) || !std::isfinite(w_cut)) throw input_error("w_cut must be finite and >= 0");
    if (extra_factor == 0) throw input_error("extra_factor must be >= 1");

    WModulus mod;
    mod.w_cut = w_cut;
    mod.extra_factor = extra_factor;
    u64 W = extra_factor;
    const u64 cutoff = static_cast<u64>(std::floor(std::min(w_cut, 1e6)));
    for (u64 p : primes_up_to(cutoff)) {
        u64 next = 0;
        if (__builtin_mul_overflow(W, p, &next)) {
            throw input_error("W overflows 64 bits at prime " + std::to_string(p) +
                              "; the largest admissible w_cut is below " + std::to_string(p));
        }
        W = next;
    }
    mod.W = W;
    mod.primes = distinct_prime_factors(W);
    mod.phi_W = W;
    for (u64 p : mod.primes) mod.phi_W = mod.phi_W / p * (p - 1);
    return mod;
}

double default_w_cut(u64 X) {
    const double lx = std::log(static_cast<double>(X));
    return lx > 1.0 ? 0.5 * std::log(lx) : 0.0;
}

ResidueChoice select_residue(const PrimeWindow& pw, const WModulus& mod) {
    const u64 W = mod.W;
    std::vector<std::pair<u64, double>> by_class;
    for (const auto& [offset, w] : pw.lambda_support()) by_class.emplace_back(pw.value(offset) % W, w);
    std::stable_sort(by_class.begin(), by_class.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    ResidueChoice choice;
    choice.b = (W == 1) ? 0 : 1;
    choice.reduced_classes = mod.phi_W;
    CompensatedSum total;
    std::vector<double> run;
    for (std::size_t i = 0; i < by_class.size();) {
        const u64 r = by_class[i].first;
        run.clear();
        std::size_t j = i;
        for (; j < by_class.size() && by_class[j].first == r; ++j) run.push_back(by_class[j].second);
        i = j;
        if (gcd(r, W) != 1 && W != 1) continue;
        const double s = stable_sum(run);
        total.add(s);
        if (s > choice.score || (s == choice.score && r < choice.b)) {
            choice.score = s;
            choice.b = r;
        }
    }
    choice.reduced_total = total.value();
    return choice;
}

u64 Block::index_of(u64 v) const noexcept {
    const u64 W = modulus.W;
    if (v < b || (v - b) % W != 0) return 0;
    const u64 j = (v - b) / W;
    if (j < m0) return 0;
    const u64 t = j - m0 + 1;
    return t <= N ? t : 0;
}

Block align_block(const PrimeWindow& pw, const WModulus& mod, u64 b) {
    const u64 W = mod.W;
    if (b >= W && !(W == 1 && b == 0)) throw input_error("residue b must satisfy b < W");
    if (W != 1 && gcd(b, W) != 1) throw input_error("residue b must be coprime to W");

    Block block;
    block.window = pw.window;
    block.modulus = mod;
    block.b = b;
    const u64 x = pw.window.x;
    // floor((x - b)/W) + 1; x < b only when b < W, where the floor is -1.
    block.m0 = (x >= b) ? (x - b) / W + 1 : 0;
    block.N = pw.window.H / W;
    if (block.N == 0) {
        throw degenerate_error("window of length " + std::to_string(pw.window.H) + " is shorter than W = " +
                               std::to_string(W));
    }
    for (u64 t : {u64{1}, block.N}) {
        const u64 v = block.value(t);
        if (!(v > x && v <= pw.window.end())) {
            throw invariant_violation("aligned block leaves the window at t=" + std::to_string(t));
        }
    }
    return block;
}

u64 cap_scale(const Window& window) noexcept {
    const u64 third = window.end() / 3 + (window.end() % 3 != 0 ? 1 : 0);
    return std::max<u64>({window.x, third, 1});
}

std::vector<double> prime_weights(const Block& block, const PrimeWindow& pw, double R, WeightVariant variant) {
    if (!(R > 1.0) || !std::isfinite(R)) throw input_error("sieve level R must be > 1");
    const double log_R = std::log(R);
    const double ratio = block.modulus.phi_ratio();
    double scale = ratio / log_R;
    const bool prime_only = variant == WeightVariant::truncated_prime;
    if (prime_only) {
        const double cap = std::log(3.0 * static_cast<double>(cap_scale(pw.window)));
        scale = log_R / (2.0 * cap) * ratio;
    }

    std::vector<double> f(block.N, 0.0);
    for (u64 o : pw.prime_offsets) {
        const u64 v = pw.value(o);
        if (const u64 t = block.index_of(v)) f[t - 1] = scale * std::log(static_cast<double>(v));
    }
    if (!prime_only) {
        for (const PrimePower& pp : pw.prime_powers) {
            if (const u64 t = block.index_of(pw.value(pp.offset))) {
                f[t - 1] = scale * std::log(static_cast<double>(pp.base));
            }
        }
    }
    return f;
}

double density(const std::vector<double>& f) {
    if (f.empty()) throw input_error("density of an empty weight vector");
    return mean(f);
}

} // namespace aplab
