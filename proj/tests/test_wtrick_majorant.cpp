#include "oracles.hpp"

#include "aplab/errors.hpp"
#include "aplab/majorant.hpp"
#include "aplab/reference.hpp"
#include "aplab/wtrick.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace aplab;

TEST_CASE("modulus") {
    const auto m = build_modulus(7);
    CHECK(m.W == 210);
    CHECK(m.phi_W == 48);
    CHECK(m.primes == std::vector<u64>{2, 3, 5, 7});
    CHECK(build_modulus(1.9).W == 1);
    CHECK(build_modulus(0).W == 1);
    const auto e = build_modulus(3, 4);
    CHECK(e.W == 24);
    CHECK(e.phi_W == 8);
    CHECK(default_w_cut(1000000000) < 2.0);
}

TEST_CASE("residue selection by pigeonhole") {
    oracle::Gen g(7);
    for (int i = 0; i < 20; ++i) {
        const u64 x = g.uniform(1000, 200000);
        const u64 H = g.uniform(300, 3000);
        const auto pw = sieve_window(x, H);
        const auto mod = build_modulus(static_cast<double>(g.uniform(2, 7)));
        const auto ch = select_residue(pw, mod);
        CHECK(std::gcd(ch.b, mod.W) == 1);
        CHECK(ch.reduced_classes == mod.phi_W);
        CHECK(ch.score * static_cast<double>(mod.phi_W) >= ch.reduced_total * (1 - 1e-12));
        // brute force: the largest class mass, smallest b on ties
        double best = -1;
        u64 best_b = 0;
        for (u64 b = 0; b < mod.W; ++b) {
            if (std::gcd(b, mod.W) != 1) continue;
            double s = 0;
            for (u64 v = x + 1; v <= x + H; ++v) {
                if (v % mod.W == b) s += oracle::von_mangoldt(v);
            }
            if (s > best + 1e-9) {
                best = s;
                best_b = b;
            }
        }
        CHECK(ch.b == best_b);
        CHECK(ch.score == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("alignment stays inside the window") {
    oracle::Gen g(11);
    for (int i = 0; i < 40; ++i) {
        const u64 x = g.uniform(0, 5000);
        const u64 H = g.uniform(300, 1500);
        const auto pw = sieve_window(x, H);
        const auto mod = build_modulus(static_cast<double>(g.uniform(0, 7)));
        const auto ch = select_residue(pw, mod);
        const auto blk = align_block(pw, mod, ch.b);
        CHECK(blk.N == H / mod.W);
        for (u64 t = 1; t <= blk.N; ++t) {
            const u64 v = blk.value(t);
            REQUIRE(v > x);
            REQUIRE(v <= x + H);
            REQUIRE(v % mod.W == ch.b % mod.W);
            REQUIRE(blk.index_of(v) == t);
        }
        CHECK(blk.index_of(blk.value(1) + 1) == (mod.W == 1 ? 2u : 0u));
    }
    const auto pw = sieve_window(0, 15);
    CHECK_THROWS_AS(align_block(pw, build_modulus(7), 1), degenerate_error);
    CHECK_THROWS_AS(align_block(pw, build_modulus(3), 2), input_error);
}

TEST_CASE("weights") {
    const auto pw = sieve_window(1000, 2000);
    const auto mod = build_modulus(3);
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    const double R = 10.0;
    const auto f4 = prime_weights(blk, pw, R, WeightVariant::with_prime_powers);
    const auto f5 = prime_weights(blk, pw, R, WeightVariant::truncated_prime);
    REQUIRE(f4.size() == blk.N);
    const double pr = mod.phi_ratio();
    const double cap = std::log(R) / (2.0 * std::log(3.0 * static_cast<double>(cap_scale(pw.window))));
    for (u64 t = 1; t <= blk.N; ++t) {
        const u64 v = blk.value(t);
        const double L = oracle::von_mangoldt(v);
        CHECK(f4[t - 1] == doctest::Approx(pr * L / std::log(R)).epsilon(1e-14));
        const double expect5 = oracle::is_prime(v) ? cap * pr * L : 0.0;
        CHECK(f5[t - 1] == doctest::Approx(expect5).epsilon(1e-14));
        CHECK(f4[t - 1] >= 0.0);
    }
    CHECK_THROWS_AS(prime_weights(blk, pw, 1.0, WeightVariant::with_prime_powers), input_error);
    CHECK(density(std::vector<double>(5, 1.0)) == 1.0);
    CHECK(density(std::vector<double>(5, 0.0)) == 0.0);
    CHECK_THROWS_AS(density(std::vector<double>{}), input_error);
}

TEST_CASE("prime power weight excised in the prime-only variant") {
    const auto pw = sieve_window(120, 10); // holds 121 and 125 and 128
    const auto blk = align_block(pw, build_modulus(0), 0);
    const auto f = prime_weights(blk, pw, 5.0, WeightVariant::truncated_prime);
    CHECK(f[blk.index_of(121) - 1] == 0.0);
    CHECK(f[blk.index_of(127) - 1] > 0.0);
}

TEST_CASE("divisor sum against brute force") {
    for (double R : {2.5, 10.0, 50.0}) {
        const auto pw = sieve_window(0, 20000);
        const auto blk = align_block(pw, build_modulus(0), 0);
        const auto tab = divisor_sum_table_at_level(blk, R);
        for (u64 t = 1; t <= blk.N; t += 7) {
            CHECK(tab.lambdaR[t - 1] == doctest::Approx(oracle::lambda_R(blk.value(t), R)).epsilon(1e-12).scale(1));
        }
    }
    const auto pw = sieve_window(30000, 6000);
    const auto mod = build_modulus(5);
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    const auto tab = divisor_sum_table_at_level(blk, 40.0);
    const auto ref = reference::divisor_sum(blk, 40.0);
    for (u64 t = 1; t <= blk.N; ++t) {
        CHECK(tab.lambdaR[t - 1] == doctest::Approx(oracle::lambda_R(blk.value(t), 40.0, mod.W)).scale(1));
        CHECK(std::abs(tab.lambdaR[t - 1] - ref[t - 1]) < 1e-9);
    }
    CHECK_THROWS_AS(divisor_sum_table_at_level(blk, 1.0), input_error);
}

TEST_CASE("divisor sum at primes above the level is log R") {
    const auto pw = sieve_window(0, 5000);
    const auto blk = align_block(pw, build_modulus(0), 0);
    const auto tab = divisor_sum_table_at_level(blk, 30.0);
    for (u64 o : pw.prime_offsets) {
        if (o > 30) CHECK(tab.lambdaR[blk.index_of(o) - 1] == std::log(30.0));
    }
}

TEST_CASE("majorant") {
    const auto pw = sieve_window(100000, 20000);
    const auto mod = build_modulus(3);
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    auto tab = divisor_sum_table(blk, 0.3);
    CHECK(tab.R == doctest::Approx(std::pow(static_cast<double>(blk.N), 0.3)));
    nu_weights(tab, false);
    for (u64 t = 1; t <= blk.N; ++t) {
        const double expect = mod.phi_ratio() * tab.lambdaR[t - 1] * tab.lambdaR[t - 1] / tab.log_R;
        CHECK(tab.nu[t - 1] == doctest::Approx(expect).epsilon(1e-14));
    }
    const auto f = prime_weights(blk, pw, tab.R, WeightVariant::truncated_prime);
    const auto rep = majorization_check(f, tab);
    CHECK(rep.holds);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_ratio <= 0.5 + 1e-12);

    auto bad = f;
    bad[rep.worst_index - 1] = tab.nu[rep.worst_index - 1] * 2 + 1;
    const auto broken = majorization_check(bad, tab);
    CHECK_FALSE(broken.holds);
    CHECK(broken.first_violation == rep.worst_index);

    auto norm = tab;
    nu_weights(norm, true);
    CHECK(mean(norm.nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moments") {
    std::vector<double> ones(100, 1.0);
    const std::vector<u64> pair{0, 1};
    const auto m = moment_diagnostic(ones, pair, 2);
    CHECK(m.exact);
    CHECK(m.mean == 1.0);

    // brute force on a small vector
    std::vector<double> nu(60);
    for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = 0.5 + static_cast<double>(i % 7) / 3.0;
    const std::vector<u64> ap{0, 1, 2};
    MomentOptions opt;
    opt.box_fraction = 0.25;
    const auto got = moment_diagnostic(nu, ap, 3, opt);
    const u64 N = nu.size();
    double s = 0;
    u64 cnt = 0;
    for (u64 r = 1; r <= N / 4; ++r) {
        for (u64 n = 1; n + 2 * r <= N; ++n) {
            s += nu[n - 1] * nu[n + r - 1] * nu[n + 2 * r - 1];
            ++cnt;
        }
    }
    CHECK(got.r_max == N / 4);
    CHECK(got.mean == doctest::Approx(s / static_cast<double>(cnt)).epsilon(1e-13));

    opt.exact_limit = 10;
    opt.samples = 200000;
    opt.seed = 3;
    const auto sm = moment_diagnostic(nu, ap, 3, opt);
    CHECK_FALSE(sm.exact);
    CHECK(std::abs(sm.mean - got.mean) < 5 * sm.std_error + 1e-9);
    const auto again = moment_diagnostic(nu, ap, 3, opt);
    CHECK(again.mean == sm.mean);
}

TEST_CASE("property: majorant scales linearly") {
    oracle::Gen g(5);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> L(50);
        for (auto& v : L) v = g.real(-3, 3);
        const double c = g.real(0.5, 4);
        const auto a = nu_from_lambda(L, 0.5, 2.0, 1.0);
        const auto b = nu_from_lambda(L, 0.5, 2.0, c);
        for (std::size_t j = 0; j < L.size(); ++j) CHECK(b[j] == doctest::Approx(c * a[j]).epsilon(1e-15));
    }
}

TEST_CASE("moment bands at a level where the divisor sum is not constant") {
    const u64 x = 100000000;
    const auto pw = sieve_window(x, floor_power(x, 0.6));
    const auto mod = build_modulus(default_w_cut(x));
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    auto tab = divisor_sum_table(blk, 0.3);
    CHECK(tab.R > 20);
    nu_weights(tab, false);
    const double m = mean(tab.nu);
    CHECK(m >= 0.5);
    CHECK(m <= 1.5);
    const std::vector<u64> pair{0, 1};
    const auto two = moment_diagnostic(tab, pair, 2);
    CHECK(two.mean >= 0.4);
    CHECK(two.mean <= 1.8);
    const auto f = prime_weights(blk, pw, tab.R, WeightVariant::truncated_prime);
    CHECK(majorization_check(f, tab).holds);
}
