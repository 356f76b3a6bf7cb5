#include "oracles.hpp"

#include "aplab/errors.hpp"
#include "aplab/polynomial.hpp"
#include "aplab/tuple_sieve.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

using namespace aplab;

namespace {

Polynomial one_minus_sum(unsigned k) {
    Polynomial p = Polynomial::constant(k, 1);
    for (unsigned i = 0; i < k; ++i) p -= Polynomial::variable(k, i);
    return p;
}

// Midpoint rule on the triangle t1, t2 >= 0, t1 + t2 <= 1.
double triangle_quadrature(const std::function<double(double, double)>& g, int n) {
    const double h = 1.0 / n;
    double s = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; i + j < n; ++j) {
            // lower-left cell is a full square when i + j < n - 1, a half otherwise
            const double a = (i + 0.5) * h, b = (j + 0.5) * h;
            s += g(a, b) * (i + j < n - 1 ? 1.0 : 0.5);
        }
    }
    return s * h * h;
}

Rational frac(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

u64 binomial(u64 n, u64 r) {
    u64 c = 1;
    for (u64 i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

} // namespace

TEST_CASE("simplex moments") {
    CHECK(simplex_moment({0, 0}) == Rational(1, 2));
    CHECK(simplex_moment({1, 0}) == Rational(1, 6));
    CHECK(simplex_moment({2, 1, 0}) == frac(2, 720));
    // one variable: integral of t^a on [0, 1]
    for (std::uint8_t a = 0; a < 10; ++a) CHECK(simplex_moment({a}) == Rational(1, a + 1));
    // two variables: beta integral sum over binomial expansion of (1 - s)^(b+1)
    for (std::uint8_t a = 0; a < 6; ++a) {
        for (std::uint8_t b = 0; b < 6; ++b) {
            Rational expect = 0;
            for (u64 j = 0; j <= b + 1u; ++j) {
                const Rational term = frac(static_cast<long>(binomial(b + 1, j)), static_cast<long>((b + 1) * (a + j + 1)));
                expect += (j % 2 ? -term : term);
            }
            CHECK(simplex_moment({a, b}) == expect);
        }
    }
}

TEST_CASE("integration paths agree") {
    const auto F = one_minus_sum(3) * one_minus_sum(3) + Polynomial::variable(3, 0) * Polynomial::variable(3, 1);
    Polynomial p = F;
    for (unsigned i = 3; i-- > 0;) p = p.integrate_to_simplex_face(i);
    REQUIRE(p.vars() == 0);
    const Rational face = p.terms().empty() ? Rational(0) : p.terms().begin()->second;
    CHECK(integrate_simplex(F) == face);
    CHECK(integrate_product(F, F) == integrate_simplex(F * F));
    const auto e = elementary_symmetric(3);
    CHECK(integrate_product_symmetric(e[1] * e[2], e[2]) == integrate_product(e[1] * e[2], e[2]));
}

TEST_CASE("two-variable integrals") {
    const auto F = one_minus_sum(2);
    const auto si = sieve_integrals(F);
    CHECK(si.I == Rational(1, 12));
    CHECK(si.J.size() == 2);
    CHECK(si.J[0] == Rational(1, 20));
    CHECK(si.J[1] == Rational(1, 20));
    CHECK(si.M == Rational(6, 5));
    const double I = triangle_quadrature([](double a, double b) { return (1 - a - b) * (1 - a - b); }, 400);
    CHECK(I == doctest::Approx(1.0 / 12).epsilon(1e-4));
    const auto one = sieve_integrals(Polynomial::constant(1, 1));
    CHECK(one.I == 1);
    CHECK(one.M == 1);
    CHECK_THROWS_AS(sieve_integrals(Polynomial(2)), degenerate_error);
}

TEST_CASE("property: M is scale invariant") {
    oracle::Gen g(17);
    for (int i = 0; i < 20; ++i) {
        const unsigned k = static_cast<unsigned>(g.uniform(2, 4));
        const auto e = elementary_symmetric(k);
        Polynomial F = Polynomial::constant(k, static_cast<long>(g.uniform(1, 5)));
        for (unsigned j = 1; j <= k; ++j) F += e[j] * Rational(static_cast<long>(g.uniform(0, 6)) - 3, 2);
        if (F.is_zero()) continue;
        const Rational c(static_cast<long>(g.uniform(1, 50)), static_cast<long>(g.uniform(1, 50)));
        CHECK(sieve_integrals(F).M == sieve_integrals(F * c).M);
        CHECK(sieve_integrals(F).M == sieve_integrals(F * Rational(-1)).M);
        CHECK(F.is_symmetric());
    }
    CHECK_FALSE(Polynomial::variable(2, 0).is_symmetric());
}

TEST_CASE("symmetric basis") {
    const auto b = symmetric_basis(3, 3);
    // partitions of 0..3 into parts <= 3: 1, 1, 2, 3
    CHECK(b.size() == 7);
    for (const auto& el : b) {
        CHECK(el.poly.is_symmetric());
        CHECK(el.poly.degree() <= 3);
    }
    CHECK(b[0].poly.degree() == 0);
}

TEST_CASE("optimized M is nondecreasing and beats the simple weight") {
    Rational prev = 0;
    for (unsigned k = 2; k <= 10; ++k) {
        const auto r = optimize_F(k, 3);
        CHECK(r.M >= prev);
        CHECK(to_double(r.M) == doctest::Approx(r.eigenvalue).epsilon(1e-8));
        CHECK(r.eigenvalue == doctest::Approx(r.crosscheck).epsilon(1e-8));
        CHECK(sieve_integrals(r.F.polynomial()).M == r.M);
        prev = r.M;
    }
    CHECK(optimize_F(2, 3).M >= Rational(6, 5));
    CHECK(to_double(optimize_F(3, 3).M) == doctest::Approx(1.64603).epsilon(1e-5));
}

TEST_CASE("F support and nonnegativity") {
    const SieveF F(one_minus_sum(2));
    const double inside[] = {0.2, 0.3};
    const double outside[] = {0.7, 0.6};
    const double negative[] = {-0.1, 0.3};
    CHECK(F(inside) == doctest::Approx(0.5));
    CHECK(F(outside) == 0.0);
    CHECK(F.raw(outside) == doctest::Approx(-0.3));
    CHECK(F(negative) == 0.0);
    CHECK(nonnegative_on_simplex(F, 20));
    CHECK_FALSE(nonnegative_on_simplex(SieveF(Polynomial::variable(2, 0) - Polynomial::constant(2, Rational(1, 2))), 10));
}

TEST_CASE("property: greedy survivors and the bound") {
    oracle::Gen g(1234);
    for (int i = 0; i < 100; ++i) {
        const u64 span = g.uniform(1, 3000);
        const u64 y = g.uniform(2, 60);
        const u64 q = g.uniform(1, 30);
        const auto r = greedy_survivors(span, y, q);
        Rational bound = static_cast<long>(span);
        long pi = 0;
        for (u64 p = 2; p <= y; ++p) {
            if (!oracle::is_prime(p)) continue;
            ++pi;
            if (q % p == 0) continue;
            bound *= Rational(static_cast<long>(p - 1), static_cast<long>(p));
            REQUIRE(r.residues.count(p) == 1);
            CHECK(r.residues.at(p) < p);
        }
        bound -= pi;
        CHECK(r.pi_y == static_cast<u64>(pi));
        CHECK(r.lower_bound == bound);
        CHECK(r.bound_holds);
        CHECK(Rational(static_cast<long>(r.survivors.size())) >= bound);
        std::vector<u64> expect;
        for (u64 b = 1; b <= span; ++b) {
            bool keep = true;
            for (const auto& [p, rp] : r.residues) keep &= b % p != rp;
            if (keep) expect.push_back(b);
        }
        CHECK(r.survivors == expect);
    }
}

TEST_CASE("greedy example") {
    const auto r = greedy_survivors(10, 3, 1);
    CHECK(r.survivors == std::vector<u64>{1, 3, 7, 9});
    CHECK(r.lower_bound == Rational(4, 3) - 0);
}

TEST_CASE("property: built tuples are admissible") {
    oracle::Gen g(42);
    int built = 0;
    for (int i = 0; i < 100; ++i) {
        const unsigned k = static_cast<unsigned>(g.uniform(2, 8));
        const u64 q = g.uniform(1, 12);
        const u64 y = g.uniform(std::max(k, 2u), 40);
        const u64 span = g.uniform(40, 2000);
        const auto gr = greedy_survivors(span, y, q);
        if (gr.survivors.size() < k) {
            CHECK_THROWS_AS(build_tuple(gr, k, 1 % q), degenerate_error);
            continue;
        }
        u64 a = g.uniform(0, q - 1);
        while (std::gcd(a, q) != 1) a = (a + 1) % q;
        const auto t = build_tuple(gr, k, a);
        ++built;
        CHECK(t.admissible);
        CHECK(t.certified);
        CHECK(oracle::admissible(t.shifts));
        CHECK(is_admissible(t.shifts));
        for (u64 h : t.shifts) CHECK(h % q == 0);
    }
    CHECK(built > 50);
    CHECK_FALSE(is_admissible(std::vector<u64>{0, 2, 4}));
    CHECK_FALSE(tuple_from_shifts({0, 2, 4}).admissible);
    CHECK(tuple_from_shifts({0, 2, 6}).admissible);
}

TEST_CASE("property: admissibility checker against brute force") {
    oracle::Gen g(8);
    for (int i = 0; i < 300; ++i) {
        const std::size_t k = g.uniform(1, 7);
        std::vector<u64> h;
        u64 v = 0;
        for (std::size_t j = 0; j < k; ++j) {
            v += g.uniform(j ? 1 : 0, 6);
            h.push_back(v);
        }
        CHECK(is_admissible(h) == oracle::admissible(h));
    }
}

TEST_CASE("CRT residue") {
    oracle::Gen g(77);
    for (int i = 0; i < 40; ++i) {
        const u64 q = g.uniform(1, 9);
        u64 a = g.uniform(0, q - 1);
        while (std::gcd(a, q) != 1) a = (a + 1) % q;
        const auto t = build_tuple(greedy_survivors(200, 7, q), 3, a);
        const auto mod = build_modulus(static_cast<double>(g.uniform(0, 11)), q);
        const u64 v = crt_residue(t, mod);
        CHECK(v < mod.W);
        CHECK(v % q == a);
        for (u64 h : t.shifts) CHECK(std::gcd(v + h, mod.W) == 1);
    }
    const auto t = tuple_from_shifts({6, 12}, 3, 2);
    CHECK(crt_residue(t, build_modulus(3)) == 5);
}

TEST_CASE("sieve weight lambda") {
    const SieveF F(one_minus_sum(2));
    const u64 d1[] = {2, 3};
    CHECK(maynard_lambda(d1, F, 10, 1) == doctest::Approx(1 - std::log(6.0) / std::log(10.0)));
    const u64 d2[] = {2, 2};
    CHECK(maynard_lambda(d2, F, 10, 1) == 0.0);
    const u64 d3[] = {4, 1};
    CHECK(maynard_lambda(d3, F, 10, 1) == 0.0);
    const u64 d4[] = {3, 5};
    CHECK(maynard_lambda(d4, F, 10, 1) == 0.0);
    CHECK(maynard_lambda(d1, F, 10, 2) == 0.0);
}

TEST_CASE("property: omega against divisor enumeration") {
    const SieveF F(one_minus_sum(2) * one_minus_sum(2));
    const auto t = tuple_from_shifts({0, 2});
    oracle::Gen g(5);
    for (int i = 0; i < 30; ++i) {
        const u64 n = g.uniform(1, 100000);
        const double R = g.real(2, 40);
        const u64 W = g.coin() ? 1 : 2;
        const u64 Rf = static_cast<u64>(R);
        double s = 0;
        for (u64 a = 1; a <= Rf; ++a) {
            if ((n % a) || std::gcd(a, W) != 1 || !oracle::moebius(a)) continue;
            for (u64 b = 1; a * b <= Rf; ++b) {
                if (((n + 2) % b) || std::gcd(b, W) != 1 || !oracle::moebius(b) || std::gcd(a, b) != 1) continue;
                const double tt[] = {std::log(double(a)) / std::log(R), std::log(double(b)) / std::log(R)};
                s += oracle::moebius(a) * oracle::moebius(b) * F.raw(tt);
            }
        }
        CHECK(omega_weight(n, t, F, R, W) == doctest::Approx(s * s).epsilon(1e-12).scale(1));
    }
    CHECK_THROWS_AS(OmegaEvaluator(t, F, 1e8, 1, OmegaOptions{1000}), resource_error);
}

TEST_CASE("sieve sums and cluster search") {
    const auto t = tuple_from_shifts({0, 2, 6});
    const auto mod = build_modulus(0);
    const auto opt = optimize_F(3, 2);
    const double R = 10;
    const auto sums = sieve_sums(10000, 20000, mod, 0, t, opt.F, R);
    double s1 = 0, s2p = 0;
    for (u64 n = 10001; n <= 20000; ++n) {
        const double w = omega_weight(n, t, opt.F, R, 1);
        s1 += w;
        for (u64 h : t.shifts) {
            if (oracle::is_prime(n + h)) s2p += w * std::log(double(n + h));
        }
    }
    CHECK(sums.S1 == doctest::Approx(s1).epsilon(1e-10));
    CHECK(sums.S2prime == doctest::Approx(s2p).epsilon(1e-10));
    CHECK(sums.S2 >= sums.S2prime);
    CHECK(sums.terms == 10000);

    const auto c = cluster_search(10000, 20000, t, mod, 0, opt.F, R);
    CHECK(c.best_n == 10331);
    CHECK(c.best_hits == 3);
    CHECK(c.verified);
    u64 total = 0;
    for (u64 h : c.histogram) total += h;
    CHECK(total == c.scanned);
    for (u64 n = 10001; n < 10331; ++n) {
        CHECK_FALSE((oracle::is_prime(n) && oracle::is_prime(n + 2) && oracle::is_prime(n + 6)));
    }
}
