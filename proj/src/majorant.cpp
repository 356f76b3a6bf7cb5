#include "aplab/majorant.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace aplab {

namespace {

struct DivisorClass {
    u64 d;
    u64 first_t; // smallest t >= 1 with d | m_t
    double weight;
};

std::vector<DivisorClass> divisor_classes(const Block& block, double R) {
    const u64 D = static_cast<u64>(std::floor(R));
    const u64 W = block.modulus.W;
    const u64 first_value = block.value(1);
    const auto mu = moebius_table(D);
    std::vector<DivisorClass> classes;
    for (u64 d = 1; d <= D; ++d) {
        if (mu[d] == 0 || gcd(d, W) != 1) continue;
        u64 t = 1;
        if (d > 1) {
            const u64 r0 = first_value % d;
            const u64 need = (d - r0) % d;
            t = 1 + mul_mod(need, mod_inverse(W % d, d), d);
        }
        classes.push_back(DivisorClass{d, t, mu[d] * std::log(R / static_cast<double>(d))});
    }
    return classes;
}

} // namespace

MajorantTable divisor_sum_table_at_level(const Block& block, double R) {
    if (!(R > 1.0) || !std::isfinite(R)) throw input_error("sieve level R must be > 1, got " + std::to_string(R));
    if (block.modulus.W != 1 && gcd(block.b, block.modulus.W) != 1) {
        throw invariant_violation("block residue is not coprime to W");
    }
    MajorantTable table;
    table.block = block;
    table.eta = std::numeric_limits<double>::quiet_NaN();
    table.R = R;
    table.log_R = std::log(R);
    table.lambdaR.assign(block.N, 0.0);

    const auto classes = divisor_classes(block, R);
    const u64 N = block.N;
    constexpr u64 tile = u64{1} << 16;
    const u64 tiles = (N + tile - 1) / tile;
    double* out = table.lambdaR.data();
    // Tiles own disjoint index ranges; within a tile every index receives its
    // divisor terms in increasing d, matching the serial order exactly.
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernel_threads()) if (tiles > 1)
    for (long long s = 0; s < static_cast<long long>(tiles); ++s) {
        const u64 lo = static_cast<u64>(s) * tile + 1;
        const u64 hi = std::min(N, lo + tile - 1);
        for (const DivisorClass& c : classes) {
            u64 t = c.first_t;
            if (t < lo) t += (lo - t + c.d - 1) / c.d * c.d;
            for (; t <= hi; t += c.d) out[t - 1] += c.weight;
        }
    }
    return table;
}

MajorantTable divisor_sum_table(const Block& block, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw input_error("eta must lie in (0, 1)");
    const double R = std::pow(static_cast<double>(block.N), eta);
    MajorantTable table = divisor_sum_table_at_level(block, R);
    table.eta = eta;
    return table;
}

std::vector<double> nu_from_lambda(std::span<const double> lambdaR, double phi_ratio, double log_R,
                                   double normalization) {
    std::vector<double> nu(lambdaR.size());
    const double scale = normalization * phi_ratio / log_R;
    for (std::size_t i = 0; i < lambdaR.size(); ++i) nu[i] = scale * lambdaR[i] * lambdaR[i];
    return nu;
}

void nu_weights(MajorantTable& table, bool normalize) {
    if (table.lambdaR.empty()) throw input_error("majorant table is empty");
    const double ratio = table.block.modulus.phi_ratio();
    table.normalization = 1.0;
    table.nu = nu_from_lambda(table.lambdaR, ratio, table.log_R);
    if (normalize) {
        const double m = mean(table.nu);
        if (!(m > 0.0)) throw input_error("cannot normalize a majorant with zero mean");
        table.normalization = 1.0 / m;
        table.nu = nu_from_lambda(table.lambdaR, ratio, table.log_R, table.normalization);
    }
}

MajorizationReport majorization_check(std::span<const double> f, const MajorantTable& table) {
    if (f.size() != table.nu.size()) throw input_error("weight and majorant lengths differ");
    if (table.normalization != 1.0) throw input_error("majorization is checked against un-normalized nu");
    MajorizationReport rep;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fi = f[i];
        const double ni = table.nu[i];
        const bool ok = fi >= 0.0 && fi <= ni;
        if (!ok) {
            if (rep.holds) rep.first_violation = i + 1;
            rep.holds = false;
            ++rep.violations;
        }
        double ratio = 0.0;
        if (fi != 0.0) ratio = ni > 0.0 ? fi / ni : std::numeric_limits<double>::infinity();
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_index = i + 1;
        }
    }
    return rep;
}

MomentResult moment_diagnostic(std::span<const double> nu, std::span<const u64> shifts, unsigned k,
                               const MomentOptions& options) {
    if (k < 1) throw input_error("k must be >= 1");
    if (shifts.empty()) throw input_error("at least one shift is required");
    std::set<u64> distinct(shifts.begin(), shifts.end());
    if (distinct.size() != shifts.size()) throw input_error("shifts must be distinct");
    if (*distinct.rbegin() > k - 1) throw input_error("shift exceeds k - 1");

    const u64 N = nu.size();
    u64 r_max = N / (3 * static_cast<u64>(k));
    if (options.box_fraction > 0.0) r_max = static_cast<u64>(std::floor(static_cast<double>(N) * options.box_fraction));
    r_max = std::min<u64>(r_max, k > 1 ? (N > 0 ? (N - 1) / (k - 1) : 0) : N);
    if (r_max == 0) throw input_error("moment box is empty");

    MomentResult res;
    res.r_max = r_max;
    res.seed = options.seed;
    long double box = 0;
    for (u64 r = 1; r <= r_max; ++r) box += static_cast<long double>(N - (k - 1) * r);
    res.box_size = static_cast<double>(box);

    if (options.force_exact || box <= options.exact_limit) {
        std::vector<double> per_r(r_max, 0.0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(kernel_threads())
        for (long long rr = 1; rr <= static_cast<long long>(r_max); ++rr) {
            const u64 r = static_cast<u64>(rr);
            const u64 n_max = N - (k - 1) * r;
            CompensatedSum acc;
            for (u64 n = 1; n <= n_max; ++n) {
                double prod = 1.0;
                for (u64 j : shifts) {
                    prod *= nu[n + j * r - 1];
                    if (prod == 0.0) break;
                }
                acc.add(prod);
            }
            per_r[r - 1] = acc.value();
        }
        res.mean = stable_sum(per_r) / res.box_size;
        res.exact = true;
        res.samples = static_cast<std::uint64_t>(box);
        return res;
    }

    if (options.samples == 0) throw input_error("sampling needs at least one sample");
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<u64> pick_r(1, r_max);
    std::uniform_int_distribution<u64> pick_n(1, N - (k - 1));
    CompensatedSum sum, sum_sq;
    for (std::uint64_t s = 0; s < options.samples;) {
        const u64 r = pick_r(rng);
        const u64 n = pick_n(rng);
        if (n > N - (k - 1) * r) continue;
        double prod = 1.0;
        for (u64 j : shifts) prod *= nu[n + j * r - 1];
        sum.add(prod);
        sum_sq.add(prod * prod);
        ++s;
    }
    const double m = sum.value() / static_cast<double>(options.samples);
    const double var = std::max(0.0, sum_sq.value() / static_cast<double>(options.samples) - m * m);
    res.mean = m;
    res.exact = false;
    res.samples = options.samples;
    res.std_error = std::sqrt(var / static_cast<double>(options.samples));
    return res;
}

MomentResult moment_diagnostic(const MajorantTable& table, std::span<const u64> shifts, unsigned k,
                               const MomentOptions& options) {
    const auto raw = nu_from_lambda(table.lambdaR, table.block.modulus.phi_ratio(), table.log_R);
    const double m = mean(raw);
    if (!(m > 0.0)) throw input_error("cannot normalize a majorant with zero mean");
    const auto nu = nu_from_lambda(table.lambdaR, table.block.modulus.phi_ratio(), table.log_R, 1.0 / m);
    return moment_diagnostic(std::span<const double>(nu), shifts, k, options);
}

} // namespace aplab
