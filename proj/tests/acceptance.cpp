// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure.

#include "oracles.hpp"

#include "cli.hpp"

#include "aplab/apcount.hpp"
#include "aplab/bdh_lab.hpp"
#include "aplab/majorant.hpp"
#include "aplab/polynomial.hpp"
#include "aplab/tuple_sieve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace aplab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome sieve_oracle() {
    oracle::Gen g(1);
    double sieve_time = 0;
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const u64 H = g.uniform(0, 5000);
        const u64 x = g.uniform(0, 1000000 - H);
        const auto t0 = Clock::now();
        const auto pw = sieve_window(x, H);
        sieve_time += seconds_since(t0);
        std::vector<u64> primes, powers;
        for (u64 o : pw.prime_offsets) primes.push_back(pw.value(o));
        for (const auto& p : pw.prime_powers) powers.push_back(pw.value(p.offset));
        bad += primes != oracle::primes_in(x, H) || powers != oracle::proper_powers_in(x, H);
    }
    return {bad == 0 && sieve_time < 10, fmt("200 windows, %d mismatches, sieve time %.3f s", bad, sieve_time)};
}

Outcome lambda_oracle() {
    const u64 top = 100000;
    const auto pw = sieve_window(0, top);
    const auto blk = align_block(pw, build_modulus(0), 0);
    double worst = 0;
    u64 prime_misses = 0;
    for (double R : {10.0, 50.0, 100.0}) {
        const auto tab = divisor_sum_table_at_level(blk, R);
        for (u64 m = 1; m <= top; ++m) worst = std::max(worst, std::abs(tab.lambdaR[m - 1] - oracle::lambda_R(m, R)));
        const double logR = std::log(R);
        for (u64 o : pw.prime_offsets) {
            if (static_cast<double>(o) <= R) continue;
            const double v = tab.lambdaR[o - 1];
            prime_misses += v != logR && std::nextafter(v, logR) != logR;
        }
    }
    return {worst <= 1e-9 && prime_misses == 0,
            fmt("m <= 1e5, R in {10,50,100}: max error %.3g, primes off log R by > 1 ulp: %llu", worst,
                static_cast<unsigned long long>(prime_misses))};
}

struct DeskBlock {
    u64 x;
    double theta;
};

std::vector<DeskBlock> desk_blocks() {
    oracle::Gen g(2026);
    std::vector<DeskBlock> out;
    for (double theta : {0.6, 0.7}) {
        for (int i = 0; i < 10; ++i) out.push_back({g.log_uniform(1e9, 1e10), theta});
    }
    return out;
}

struct DeskResult {
    u64 violations = 0;
    double worst_ratio = 0;
    double nu_mean = 0;
    double two_point = 0;
    double seconds = 0;
    u64 N = 0;
    double R = 0;
};

DeskResult desk_run(const DeskBlock& d) {
    const auto t0 = Clock::now();
    const auto pw = sieve_window(d.x, floor_power(d.x, d.theta));
    const auto mod = build_modulus(default_w_cut(d.x));
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    auto tab = divisor_sum_table(blk, 0.05);
    nu_weights(tab, false);
    const auto f = prime_weights(blk, pw, tab.R, WeightVariant::truncated_prime);
    const auto rep = majorization_check(f, tab);
    const std::vector<u64> pair{0, 1};
    MomentOptions mo;
    mo.seed = d.x;
    const auto two = moment_diagnostic(tab, pair, 2, mo);
    return {rep.violations, rep.worst_ratio, mean(tab.nu), two.mean, seconds_since(t0), blk.N, tab.R};
}

std::vector<DeskResult>& desk_results() {
    static std::vector<DeskResult> cache = [] {
        std::vector<DeskResult> r;
        for (const auto& d : desk_blocks()) r.push_back(desk_run(d));
        return r;
    }();
    return cache;
}

Outcome majorization() {
    u64 violations = 0;
    double worst = 0, Rmin = 1e300, Rmax = 0;
    for (const auto& r : desk_results()) {
        violations += r.violations;
        worst = std::max(worst, r.worst_ratio);
        Rmin = std::min(Rmin, r.R);
        Rmax = std::max(Rmax, r.R);
    }
    return {violations == 0, fmt("20 blocks, %llu violations, worst f/nu %.4f, R in [%.3f, %.3f]",
                                 static_cast<unsigned long long>(violations), worst, Rmin, Rmax)};
}

Outcome moments() {
    bool ok = true;
    double lo1 = 1e300, hi1 = 0, lo2 = 1e300, hi2 = 0, slowest = 0;
    for (const auto& r : desk_results()) {
        ok &= r.nu_mean >= 0.5 && r.nu_mean <= 1.5 && r.two_point >= 0.4 && r.two_point <= 1.8 && r.seconds < 300;
        lo1 = std::min(lo1, r.nu_mean);
        hi1 = std::max(hi1, r.nu_mean);
        lo2 = std::min(lo2, r.two_point);
        hi2 = std::max(hi2, r.two_point);
        slowest = std::max(slowest, r.seconds);
    }
    return {ok, fmt("mean nu in [%.4f, %.4f], two-point in [%.4f, %.4f], slowest block %.2f s", lo1, hi1, lo2, hi2,
                    slowest)};
}

u64 brute_aps(const Block& blk, unsigned k) {
    std::vector<char> prime(blk.N + 1, 0);
    for (u64 t = 1; t <= blk.N; ++t) prime[t] = oracle::is_prime(blk.value(t));
    return oracle::count_aps(blk.N, k, blk.N, [&](u64 t) { return prime[t] != 0; });
}

Outcome ap_ledger() {
    int runs = 0, ledger_bad = 0, count_bad = 0;
    auto one = [&](u64 x, u64 H, double w, unsigned k) {
        const auto pw = sieve_window(x, H);
        const auto mod = build_modulus(w);
        const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
        const double R = std::max(2.0, std::pow(static_cast<double>(blk.N), 0.25));
        const auto rep = run_apcount(pw, blk, k, R);
        ++runs;
        ledger_bad += !rep.ledger.supper_holds || !rep.ledger.partition_holds;
        count_bad += rep.count_prime_aps_all != brute_aps(blk, k);
        return rep.count_prime_aps_all;
    };
    const u64 tiny = one(0, 15, 0, 3);
    oracle::Gen g(5);
    for (int i = 0; i < 150; ++i) {
        const u64 H = g.log_uniform(20, 3000);
        const u64 x = g.uniform(0, 100000 - H);
        const double w = static_cast<double>(g.uniform(0, 3));
        if (H < 3 * build_modulus(w).W) continue;
        one(x, H, w, static_cast<unsigned>(g.uniform(3, 4)));
    }
    return {tiny == 2 && ledger_bad == 0 && count_bad == 0,
            fmt("%d runs with x+H <= 1e5, ledger failures %d, count mismatches %d, 3-APs in (0,15] = %llu", runs,
                ledger_bad, count_bad, static_cast<unsigned long long>(tiny))};
}

Outcome integrals() {
    const auto t0 = Clock::now();
    Polynomial F = Polynomial::constant(2, 1) - Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    const auto si = sieve_integrals(F);
    bool ok = si.I == Rational(1, 12) && si.J[0] == Rational(1, 20) && si.J[1] == Rational(1, 20) &&
              si.M == Rational(6, 5);
    ok &= sieve_integrals(F * Rational(7, 3)).M == si.M && sieve_integrals(F * Rational(-2)).M == si.M;
    const auto two = optimize_F(2, 3);
    ok &= two.M >= Rational(6, 5);
    Rational prev = 0;
    double last = 0;
    for (unsigned k = 2; k <= 10; ++k) {
        const auto r = optimize_F(k, 3);
        ok &= r.M >= prev;
        prev = r.M;
        last = to_double(r.M);
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 30, fmt("I=1/12, J=1/20, M=6/5 exact; M_2=%.5f; M_10=%.5f; %.2f s", to_double(two.M), last,
                                 secs)};
}

Outcome greedy() {
    oracle::Gen g(7);
    int bound_bad = 0, tuples = 0, inadmissible = 0;
    for (int i = 0; i < 100; ++i) {
        const u64 span = g.uniform(1, 5000);
        const u64 y = g.uniform(2, 50);
        const u64 q = g.uniform(1, 30);
        const auto r = greedy_survivors(span, y, q);
        Rational bound = static_cast<long>(span);
        long pi = 0;
        for (u64 p = 2; p <= y; ++p) {
            if (!oracle::is_prime(p)) continue;
            ++pi;
            if (q % p) bound *= Rational(static_cast<long>(p - 1), static_cast<long>(p));
        }
        bound -= pi;
        bound_bad += Rational(static_cast<long>(r.survivors.size())) < bound;
        const unsigned k = static_cast<unsigned>(std::min<u64>(y, 6));
        if (k >= 2 && r.survivors.size() >= k) {
            const auto t = build_tuple(r, k, 1 % q);
            ++tuples;
            inadmissible += !oracle::admissible(t.shifts);
        }
    }
    const bool rejected = !is_admissible(std::vector<u64>{0, 2, 4});
    return {bound_bad == 0 && inadmissible == 0 && rejected,
            fmt("100 greedy runs, %d bound failures; %d tuples, %d inadmissible; {0,2,4} %s", bound_bad, tuples,
                inadmissible, rejected ? "rejected" : "accepted")};
}

Outcome bdh() {
    oracle::Gen g(8);
    double worst = 0;
    int structural = 0;
    for (int i = 0; i < 50; ++i) {
        const u64 x = g.uniform(0, 1000000);
        const u64 H = g.uniform(1, 100);
        const u64 Q = g.uniform(1, 50);
        const auto pw = sieve_window(x, H);
        const auto rep = bdh_variance(pw, Q);
        const double naive = oracle::bdh_naive(x, H, Q);
        worst = std::max(worst, std::abs(rep.S_total - naive) / std::max(naive, 1e-300));
        std::vector<u64> grid;
        for (u64 q = 1; q <= Q; q += 1 + q / 4) grid.push_back(q);
        grid.push_back(Q);
        const auto mono = monotonicity_check(pw, grid);
        structural += !rep.split_holds || !rep.inequality_holds || !mono.verified;
    }
    return {worst <= 1e-9 && structural == 0,
            fmt("50 runs, max relative error %.3g, split/inequality/monotonicity failures %d", worst, structural)};
}

Outcome empty_class() {
    const auto pw = sieve_window(100000, floor_power(100000, 0.4));
    const auto rep = empty_class_bound(pw, 316);
    u64 primes = 0;
    for (u64 q = 102; q <= 316; ++q) primes += oracle::is_prime(q);
    const double target = std::log(1.0 / 0.8);
    return {pw.window.H == 100 && rep.all_verified && rep.witnesses.size() == primes &&
                std::abs(rep.mertens_sum - target) <= 0.05,
            fmt("H=%llu, %zu of %llu primes with a verified empty class, Mertens sum %.4f vs %.4f",
                static_cast<unsigned long long>(pw.window.H), rep.witnesses.size(),
                static_cast<unsigned long long>(primes), rep.mertens_sum, target)};
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "aplab_acceptance";
    std::filesystem::create_directories(dir);
    std::vector<std::string> docs;
    for (int i = 0; i < 2; ++i) {
        const auto path = (dir / ("verify" + std::to_string(i) + ".json")).string();
        const char* argv[] = {"aplab", "--out", path.c_str(), "verify"};
        std::ostringstream out, err;
        if (cli::run(4, argv, out, err) != 0) return {false, "verify reported failures"};
        std::ifstream in(path, std::ios::binary);
        docs.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return {!docs[0].empty() && docs[0] == docs[1], fmt("two verify documents of %zu bytes, identical: %s",
                                                        docs[0].size(), docs[0] == docs[1] ? "yes" : "no")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"sieve oracle", sieve_oracle},
        {"divisor sum oracle", lambda_oracle},
        {"majorization", majorization},
        {"moment bands", moments},
        {"AP-count ledger", ap_ledger},
        {"sieve integrals", integrals},
        {"greedy and admissibility", greedy},
        {"variance oracle", bdh},
        {"empty classes", empty_class},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %2zu  %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu passed, %d failed\n", criteria.size() - failed, failed);
    return failed ? 1 : 0;
}
