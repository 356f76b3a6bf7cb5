#include "oracles.hpp"

#include "aplab/bdh_lab.hpp"
#include "aplab/errors.hpp"
#include "aplab/reference.hpp"

#include <doctest.h>

#include <cmath>

using namespace aplab;

TEST_CASE("small variance example") {
    const auto pw = sieve_window(10, 10);
    const auto rep = bdh_variance(pw, 3);
    CHECK(rep.S_total == doctest::Approx(oracle::bdh_naive(10, 10, 3)).epsilon(1e-12));
    CHECK(rep.S_total == doctest::Approx(126.40955914651097).epsilon(1e-14));
    CHECK(rep.split_holds);
    CHECK(rep.inequality_holds);
}

TEST_CASE("property: variance matches the triple loop") {
    oracle::Gen g(2718);
    for (int i = 0; i < 50; ++i) {
        const u64 x = g.uniform(0, 100000);
        const u64 H = g.uniform(1, 100);
        const u64 Q = g.uniform(1, 50);
        const auto pw = sieve_window(x, H);
        const auto rep = bdh_variance(pw, Q);
        const double naive = oracle::bdh_naive(x, H, Q);
        CHECK(rep.S_total == doctest::Approx(naive).epsilon(1e-9));
        CHECK(reference::bdh_variance(pw, Q) == doctest::Approx(naive).epsilon(1e-9));
        CHECK(rep.split_holds);
        CHECK(rep.inequality_holds);
        CHECK(rep.S_star <= 2 * rep.S_psi + 2 * rep.S_pp + 1e-9 * rep.S_star);
        CHECK(rep.S_total == doctest::Approx(rep.S_star + rep.S_zero).epsilon(1e-12));
        double per_q = 0;
        for (double v : rep.per_q) per_q += v;
        CHECK(per_q == doctest::Approx(rep.S_total).epsilon(1e-12));
        if (rep.zero_closed_form_applies) CHECK(rep.S_zero == doctest::Approx(rep.zero_closed_form).epsilon(1e-12));
    }
}

TEST_CASE("class terms") {
    const auto pw = sieve_window(0, 50);
    const auto ct = class_terms(pw, 6);
    REQUIRE(ct.theta.size() == 6);
    for (u64 a = 0; a < 6; ++a) {
        double th = 0, ps = 0;
        for (u64 v = 1; v <= 50; ++v) {
            if (v % 6 != a) continue;
            ps += oracle::von_mangoldt(v);
            if (oracle::is_prime(v)) th += std::log(double(v));
        }
        CHECK(ct.theta[a] == doctest::Approx(th).scale(1));
        CHECK(ct.psi[a] == doctest::Approx(ps).scale(1));
        CHECK(ct.pp[a] == doctest::Approx(ps - th).scale(1));
    }
}

TEST_CASE("psi decomposition identity") {
    const auto pw = sieve_window(1000, 400);
    const auto d = psi_pp_decomposition(pw, 40);
    CHECK(d.identity_holds);
    CHECK(d.max_identity_error < 1e-9);
    u64 classes = 0;
    for (u64 q = 1; q <= 40; ++q) classes += oracle::phi(q);
    CHECK(d.classes_checked == classes);
}

TEST_CASE("off-diagonal divisor count") {
    for (u64 h = 1; h < 200; ++h) {
        u64 c = 0;
        for (u64 d = 1; d <= 12; ++d) c += h % d == 0;
        CHECK(tau_Q(h, 12) == c);
    }
    const auto rep = offdiag_divisor_count(sieve_window(10, 30), 10);
    CHECK(rep.identity_holds);
    CHECK(rep.S_pp_all == doctest::Approx(rep.diagonal + rep.offdiag).epsilon(1e-12));
    // brute force over ordered pairs of proper powers in (10, 40]: 16, 25, 27, 32
    const u64 v[] = {16, 25, 27, 32};
    const double lg[] = {std::log(2.0), std::log(5.0), std::log(3.0), std::log(2.0)};
    double off = 0, diag = 0;
    for (int i = 0; i < 4; ++i) {
        diag += 10 * lg[i] * lg[i];
        for (int j = 0; j < 4; ++j) {
            if (i != j) off += lg[i] * lg[j] * double(tau_Q(v[i] > v[j] ? v[i] - v[j] : v[j] - v[i], 10));
        }
    }
    CHECK(rep.offdiag == doctest::Approx(off).epsilon(1e-12));
    CHECK(rep.diagonal == doctest::Approx(diag).epsilon(1e-12));
}

TEST_CASE("monotone in Q") {
    oracle::Gen g(31);
    for (int i = 0; i < 10; ++i) {
        const auto pw = sieve_window(g.uniform(0, 50000), g.uniform(10, 200));
        std::vector<u64> grid{1, 2, 2, 5, 9, 20, 33};
        const auto m = monotonicity_check(pw, grid);
        CHECK(m.verified);
        CHECK(m.increments_match);
        for (std::size_t j = 1; j < m.values.size(); ++j) CHECK(m.values[j] >= m.values[j - 1]);
    }
    CHECK_THROWS_AS(monotonicity_check(sieve_window(0, 10), {3, 2}), input_error);
}

TEST_CASE("scan is reproducible") {
    const auto a = variance_scan(100000, 0.5, 1.0, 1.0, 6, 9);
    const auto b = variance_scan(100000, 0.5, 1.0, 1.0, 6, 9);
    REQUIRE(a.rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(a.rows[i].x == b.rows[i].x);
        CHECK(a.rows[i].S == b.rows[i].S);
        CHECK(a.rows[i].x >= 100000);
        CHECK(a.rows[i].x <= 200000);
        CHECK(a.rows[i].H == floor_power(a.rows[i].x, 0.5));
    }
}

TEST_CASE("empty classes beyond the window length") {
    const auto pw = sieve_window(100000, 100);
    const auto rep = empty_class_bound(pw, 316);
    CHECK(rep.all_verified);
    u64 primes = 0;
    for (u64 q = 102; q <= 316; ++q) primes += oracle::is_prime(q);
    CHECK(rep.witnesses.size() == primes);
    for (const auto& w : rep.witnesses) {
        CHECK(oracle::is_prime(w.q));
        CHECK(w.a % w.q != 0);
        for (u64 v = 100001; v <= 100100; ++v) CHECK_FALSE((oracle::is_prime(v) && v % w.q == w.a));
    }
    double mert = 0;
    for (u64 q = 102; q <= 316; ++q) {
        if (oracle::is_prime(q)) mert += 1.0 / double(q);
    }
    CHECK(rep.mertens_sum == doctest::Approx(mert).epsilon(1e-12));
    CHECK(std::abs(rep.mertens_sum - std::log(1.0 / 0.8)) < 0.05);
    CHECK_THROWS_AS(empty_class_bound(pw, 50), input_error);
}
