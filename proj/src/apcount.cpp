#include "aplab/apcount.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace aplab {

WeightedApSum weighted_ap_sum(std::span<const double> f, unsigned k) {
    if (k < 2) throw input_error("k must be >= 2");
    WeightedApSum out;
    const u64 N = f.size();
    if (N < k) {
        out.degenerate = true;
        return out;
    }
    out.r_max = N / (3 * static_cast<u64>(k));
    if (out.r_max == 0) return out;

    std::vector<u64> support; // 1-based indices with f != 0
    for (u64 t = 1; t <= N; ++t) {
        if (f[t - 1] != 0.0) support.push_back(t);
    }
    std::vector<double> per_r(out.r_max, 0.0);
#pragma omp parallel for schedule(dynamic, 8) num_threads(kernel_threads())
    for (long long rr = 1; rr <= static_cast<long long>(out.r_max); ++rr) {
        const u64 r = static_cast<u64>(rr);
        const u64 n_max = N - (k - 1) * r;
        CompensatedSum acc;
        for (u64 n : support) {
            if (n > n_max) break;
            double prod = f[n - 1];
            for (unsigned j = 1; j < k && prod != 0.0; ++j) prod *= f[n + j * r - 1];
            if (prod != 0.0) acc.add(prod);
        }
        per_r[r - 1] = acc.value();
    }
    CompensatedSum total;
    for (double v : per_r) total.add(v);
    out.S = total.value();
    return out;
}

std::vector<std::uint8_t> classify_block(const PrimeWindow& pw, const Block& block) {
    std::vector<std::uint8_t> kind(block.N, 0);
    for (u64 o : pw.prime_offsets) {
        if (const u64 t = block.index_of(pw.value(o))) kind[t - 1] = 1;
    }
    for (const PrimePower& pp : pw.prime_powers) {
        if (const u64 t = block.index_of(pw.value(pp.offset))) kind[t - 1] = 2;
    }
    return kind;
}

namespace {

// Counts (n, r) whose k entries all have an accepted kind. With
// require_proper, at least one entry must be a proper prime power.
u64 count_pattern(const std::vector<std::uint8_t>& kind, unsigned k, RRange mode, bool allow_proper,
                  bool require_proper, std::vector<std::pair<u64, u64>>* witnesses) {
    if (k < 2) throw input_error("k must be >= 2");
    const u64 N = kind.size();
    if (N < k) return 0;
    const u64 r_box = N / (3 * static_cast<u64>(k));
    if (mode == RRange::box && r_box == 0) return 0;

    auto accepted = [&](u64 t) { return kind[t - 1] == 1 || (allow_proper && kind[t - 1] == 2); };
    std::vector<u64> cand;
    for (u64 t = 1; t <= N; ++t) {
        if (accepted(t)) cand.push_back(t);
    }

    std::vector<u64> counts(cand.size(), 0);
    std::vector<std::vector<std::pair<u64, u64>>> found(witnesses ? cand.size() : 0);
#pragma omp parallel for schedule(dynamic, 64) num_threads(kernel_threads())
    for (long long ii = 0; ii < static_cast<long long>(cand.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const u64 n = cand[i];
        u64 c = 0;
        for (std::size_t m = i + 1; m < cand.size(); ++m) {
            const u64 r = cand[m] - n;
            if (mode == RRange::box && r > r_box) break;
            if (n + (k - 1) * r > N) break;
            bool ok = true;
            bool proper = kind[n - 1] == 2 || kind[cand[m] - 1] == 2;
            for (unsigned j = 2; j < k && ok; ++j) {
                const u64 t = n + j * r;
                ok = accepted(t);
                proper = proper || kind[t - 1] == 2;
            }
            if (!ok || (require_proper && !proper)) continue;
            ++c;
            if (witnesses) found[i].emplace_back(n, r);
        }
        counts[i] = c;
    }
    u64 total = 0;
    for (u64 c : counts) total += c;
    if (witnesses) {
        witnesses->clear();
        for (auto& part : found) witnesses->insert(witnesses->end(), part.begin(), part.end());
        std::sort(witnesses->begin(), witnesses->end());
    }
    return total;
}

} // namespace

u64 count_prime_aps(const PrimeWindow& pw, const Block& block, unsigned k, RRange mode) {
    return count_pattern(classify_block(pw, block), k, mode, false, false, nullptr);
}

u64 count_prime_power_aps(const PrimeWindow& pw, const Block& block, unsigned k) {
    return count_pattern(classify_block(pw, block), k, RRange::box, true, false, nullptr);
}

ExclusionReport prime_power_exclusions(const PrimeWindow& pw, const Block& block, unsigned k) {
    const auto kind = classify_block(pw, block);
    ExclusionReport rep;
    rep.count = count_pattern(kind, k, RRange::box, true, true, &rep.witnesses);
    rep.proper_powers = static_cast<u64>(std::count(kind.begin(), kind.end(), std::uint8_t{2}));
    rep.containment_bound = static_cast<u64>(k) * block.N * rep.proper_powers;
    rep.within_bound = rep.count <= rep.containment_bound;
    return rep;
}

double cap_factor(const Block& block, double R, unsigned k) {
    if (!(R > 1.0)) throw input_error("sieve level R must be > 1");
    const double X = static_cast<double>(cap_scale(block.window));
    const double base = block.modulus.phi_ratio() / std::log(R) * std::log(3.0 * X);
    return std::pow(base, static_cast<double>(k));
}

WeightCapReport check_weight_cap(std::span<const double> f, const PrimeWindow& pw, const Block& block, unsigned k,
                                 double cap) {
    if (f.size() != block.N) throw input_error("weight vector does not match the block");
    std::vector<std::pair<u64, u64>> pairs;
    count_pattern(classify_block(pw, block), k, RRange::box, true, false, &pairs);
    WeightCapReport rep;
    rep.pairs_checked = pairs.size();
    for (const auto& [n, r] : pairs) {
        double prod = 1.0;
        for (unsigned j = 0; j < k; ++j) prod *= f[n + j * r - 1];
        rep.max_product = std::max(rep.max_product, prod);
        if (prod > cap) rep.holds = false;
    }
    return rep;
}

ConversionLedger lower_bound_ledger(const LedgerInputs& in) {
    ConversionLedger L;
    L.in = in;
    const double T = static_cast<double>(in.all_prime_power_pairs);
    const double M = static_cast<double>(in.prime_aps);
    const double E = static_cast<double>(in.exclusions);
    const double N = static_cast<double>(in.N);
    const double H = static_cast<double>(in.H);
    const double kk = static_cast<double>(in.k);
    constexpr double slack = 1e-12;

    L.supper_rhs = in.cap_factor * T;
    L.supper_holds = in.S <= L.supper_rhs * (1.0 + slack);
    L.partition_holds = in.all_prime_power_pairs == in.prime_aps + in.exclusions;
    L.exact_lower = in.S / in.cap_factor - E;
    L.exact_chain_holds = L.exact_lower <= M * (1.0 + slack) + slack;

    L.exclusion_term = in.x > 0 ? in.C_k * N * H / std::sqrt(static_cast<double>(in.x)) : 0.0;
    L.asymptotic_lower = in.S / in.cap_factor - L.exclusion_term;
    L.asymptotic_chain_holds = L.asymptotic_lower <= M * (1.0 + slack) + slack;
    L.exclusion_bound_holds = E <= L.exclusion_term;

    L.rsz_rhs = in.c_k * std::pow(in.delta, kk) * N * N;
    L.rsz_observed = in.S >= L.rsz_rhs;

    L.headline_scale = N * N / (std::pow(in.phi_ratio, kk) * std::pow(in.log_R, kk));
    if (in.x > 1) L.benchmark_scale = H * H / std::pow(std::log(static_cast<double>(in.x)), kk + 1.0);
    L.headline_ratio = L.headline_scale > 0.0 ? M / L.headline_scale : 0.0;
    L.benchmark_ratio = L.benchmark_scale > 0.0 ? M / L.benchmark_scale : 0.0;
    return L;
}

APCountReport run_apcount(const PrimeWindow& pw, const Block& block, unsigned k, double R, double C_k, double c_k) {
    APCountReport rep;
    rep.k = k;
    rep.R = R;
    const auto f = prime_weights(block, pw, R, WeightVariant::with_prime_powers);
    rep.weighted = weighted_ap_sum(f, k);
    rep.count_prime_aps_box = count_prime_aps(pw, block, k, RRange::box);
    rep.count_prime_aps_all = count_prime_aps(pw, block, k, RRange::all);
    rep.count_prime_power_pairs = count_prime_power_aps(pw, block, k);
    rep.exclusions = prime_power_exclusions(pw, block, k);
    rep.cap_factor = cap_factor(block, R, k);
    rep.weight_cap = check_weight_cap(f, pw, block, k, rep.cap_factor);

    LedgerInputs in;
    in.k = k;
    in.S = rep.weighted.S;
    in.cap_factor = rep.cap_factor;
    in.all_prime_power_pairs = rep.count_prime_power_pairs;
    in.prime_aps = rep.count_prime_aps_box;
    in.exclusions = rep.exclusions.count;
    in.C_k = C_k;
    in.c_k = c_k;
    in.delta = density(f);
    in.N = block.N;
    in.H = block.window.H;
    in.x = block.window.x;
    in.phi_ratio = block.modulus.phi_ratio();
    in.log_R = std::log(R);
    rep.ledger = lower_bound_ledger(in);
    return rep;
}

} // namespace aplab
