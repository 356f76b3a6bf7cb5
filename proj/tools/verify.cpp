#include "verify.hpp"

#include "aplab/apcount.hpp"
#include "aplab/bdh_lab.hpp"
#include "aplab/errors.hpp"
#include "aplab/majorant.hpp"
#include "aplab/sieve_core.hpp"
#include "aplab/tuple_sieve.hpp"
#include "aplab/wtrick.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace aplab::cli {

namespace {

// Oracles below are deliberately naive and share no code with the library.

bool slow_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// (base, exponent) when n = p^m with m >= 2, else (0, 0).
std::pair<u64, unsigned> slow_prime_power(u64 n) {
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        u64 m = n;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        return m == 1 && e >= 2 ? std::make_pair(p, e) : std::make_pair(u64{0}, 0u);
    }
    return {0, 0};
}

int slow_mu(u64 n) {
    int mu = 1;
    for (u64 p = 2; p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return mu;
}

double slow_lambdaR(u64 m, double R) {
    double s = 0.0;
    for (u64 d = 1; d <= m && static_cast<double>(d) <= R; ++d) {
        if (m % d == 0) s += slow_mu(d) * std::log(R / static_cast<double>(d));
    }
    return s;
}

double slow_Lambda(u64 n) {
    if (slow_prime(n)) return std::log(static_cast<double>(n));
    const auto [p, e] = slow_prime_power(n);
    return p ? std::log(static_cast<double>(p)) : 0.0;
}

bool near(double a, double b, double rel = 1e-12) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

Polynomial one_minus_sum(unsigned k) {
    Polynomial p = Polynomial::constant(k, 1);
    for (unsigned i = 0; i < k; ++i) p -= Polynomial::variable(k, i);
    return p;
}

struct Check {
    std::string group;
    std::string key;
    std::string embodies;
    std::function<bool(json&)> run;
};

std::vector<Check> build_checks(bool corrupt) {
    std::vector<Check> c;
    // What the library sees for F; the oracles keep the true F.
    auto library_F = [corrupt](const Polynomial& p) {
        if (!corrupt) return SieveF(p);
        return SieveF(p + Polynomial::constant(p.vars(), Rational(1, 1000)));
    };

    c.push_back({"sieve", "sieve/window-100-40", "primes and prime powers in (100, 140]", [](json& d) {
                     const auto pw = sieve_window(100, 40);
                     std::vector<u64> primes, want, powers, want_pp;
                     for (u64 o : pw.prime_offsets) primes.push_back(pw.value(o));
                     for (const auto& p : pw.prime_powers) powers.push_back(pw.value(p.offset));
                     for (u64 v = 101; v <= 140; ++v) {
                         if (slow_prime(v)) want.push_back(v);
                         if (slow_prime_power(v).first) want_pp.push_back(v);
                     }
                     d["primes"] = primes;
                     d["prime_powers"] = powers;
                     return primes == want && powers == want_pp && primes.size() == 9 && powers.size() == 3;
                 }});
    c.push_back({"sieve", "sieve/window-10-20", "prime powers 16, 25, 27 in (10, 30]", [](json& d) {
                     const auto pw = sieve_window(10, 20);
                     std::vector<u64> powers;
                     for (const auto& p : pw.prime_powers) powers.push_back(pw.value(p.offset));
                     d["prime_powers"] = powers;
                     return powers == std::vector<u64>{16, 25, 27};
                 }});
    c.push_back({"sieve", "sieve/psi-delta", "psi(x+H) - psi(x) by direct Lambda summation", [](json& d) {
                     double want = 0.0;
                     for (u64 v = 101; v <= 140; ++v) want += slow_Lambda(v);
                     const double got = psi_delta(sieve_window(100, 40));
                     const double small = psi_delta(sieve_window(2, 2));
                     d["value"] = got;
                     d["small"] = small;
                     return near(got, want) && near(small, std::log(3.0) + std::log(2.0));
                 }});
    c.push_back({"sieve", "sieve/progression", "theta and counts restricted to a mod q", [](json& d) {
                     const auto pw = sieve_window(100, 40);
                     const double got = theta_delta_progression(pw, 4, 1);
                     const double want = std::log(101.0) + std::log(109.0) + std::log(113.0) + std::log(137.0);
                     d["theta_4_1"] = got;
                     return near(got, want) && count_primes_progression(pw, 4, 1) == 4 &&
                            count_primes_progression(pw, 1, 0) == 9;
                 }});
    c.push_back({"sieve", "sieve/trial-division", "segmented sieve equals trial division", [](json& d) {
                     std::mt19937_64 rng(1);
                     u64 windows = 0;
                     for (int i = 0; i < 20; ++i) {
                         const u64 x = rng() % 90000, H = rng() % 5000;
                         SieveOptions small_segments;
                         small_segments.segment_bits = 512;
                         const auto pw = sieve_window(x, H, small_segments);
                         std::vector<u64> primes, want;
                         for (u64 o : pw.prime_offsets) primes.push_back(pw.value(o));
                         for (u64 v = x + 1; v <= x + H; ++v) {
                             if (slow_prime(v)) want.push_back(v);
                         }
                         if (primes != want) return false;
                         ++windows;
                     }
                     d["windows"] = windows;
                     return true;
                 }});

    c.push_back({"wtrick", "wtrick/modulus", "W as primorial times extra factor", [](json& d) {
                     const auto a = build_modulus(5, 3), b = build_modulus(3, 1), e = build_modulus(1, 1);
                     d["W"] = a.W;
                     d["phi_W"] = a.phi_W;
                     return a.W == 90 && a.phi_W == 24 && b.W == 6 && b.phi_W == 2 && e.W == 1 && e.phi_W == 1;
                 }});
    c.push_back({"wtrick", "wtrick/residue", "pigeonhole choice of the heaviest reduced class", [](json& d) {
                     const auto pw = sieve_window(100, 30);
                     const auto r = select_residue(pw, build_modulus(3, 1));
                     d["b"] = r.b;
                     d["score"] = r.score;
                     return r.b == 1 && r.score * static_cast<double>(r.reduced_classes) >= r.reduced_total;
                 }});
    c.push_back({"wtrick", "wtrick/align", "m0 = floor((x - b) / W) + 1 and block containment", [](json& d) {
                     const auto pw = sieve_window(100, 40);
                     const auto blk = align_block(pw, build_modulus(3, 1), 5);
                     bool inside = true;
                     for (u64 t = 1; t <= blk.N; ++t) inside = inside && blk.value(t) > 100 && blk.value(t) <= 140;
                     d["m0"] = blk.m0;
                     d["N"] = blk.N;
                     return blk.m0 == 16 && blk.N == 6 && inside;
                 }});

    c.push_back({"majorant", "majorant/lambda-6", "Lambda_R(6) at R = 5 by divisor enumeration", [](json& d) {
                     const auto pw = sieve_window(5, 1);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const auto t = divisor_sum_table_at_level(blk, 5.0);
                     d["value"] = t.lambdaR[0];
                     return blk.value(1) == 6 && near(t.lambdaR[0], std::log(6.0 / 5.0)) &&
                            near(t.lambdaR[0], slow_lambdaR(6, 5.0));
                 }});
    c.push_back({"majorant", "majorant/prime-identity", "Lambda_R(p) = log R for primes p > R", [](json& d) {
                     const auto pw = sieve_window(0, 20000);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const double R = 50.0;
                     const auto t = divisor_sum_table_at_level(blk, R);
                     u64 checked = 0;
                     bool ok = true;
                     for (u64 o : pw.prime_offsets) {
                         const u64 p = pw.value(o);
                         if (static_cast<double>(p) <= R) continue;
                         ok = ok && t.lambdaR[blk.index_of(p) - 1] == std::log(R);
                         ++checked;
                     }
                     d["primes_checked"] = checked;
                     return ok;
                 }});
    c.push_back({"majorant", "majorant/divisor-oracle", "divisor sieve equals brute-force divisor sums", [](json& d) {
                     const auto pw = sieve_window(0, 3000);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     double worst = 0.0;
                     for (double R : {10.0, 50.0, 100.0}) {
                         const auto t = divisor_sum_table_at_level(blk, R);
                         for (u64 m = 1; m <= 3000; ++m) {
                             worst = std::max(worst, std::abs(t.lambdaR[m - 1] - slow_lambdaR(m, R)));
                         }
                     }
                     d["max_abs_error"] = worst;
                     return worst <= 1e-9;
                 }});
    c.push_back({"majorant", "majorant/majorization", "0 <= f <= nu with f / nu = log p / (2 log 3X) on primes",
                 [](json& d) {
                     const auto pw = sieve_window(1000000, 50000);
                     const auto mod = build_modulus(3, 1);
                     const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
                     auto t = divisor_sum_table(blk, 0.2);
                     nu_weights(t, false);
                     const auto f = prime_weights(blk, pw, t.R, WeightVariant::truncated_prime);
                     const auto rep = majorization_check(f, t);
                     const double scale = 2.0 * std::log(3.0 * static_cast<double>(cap_scale(pw.window)));
                     bool ratios = true;
                     for (u64 i = 1; i <= blk.N; ++i) {
                         const u64 m = blk.value(i);
                         if (f[i - 1] == 0.0 || static_cast<double>(m) <= t.R) continue;
                         ratios = ratios && near(f[i - 1] / t.nu[i - 1], std::log(static_cast<double>(m)) / scale, 1e-9);
                     }
                     d["worst_ratio"] = rep.worst_ratio;
                     d["violations"] = rep.violations;
                     return rep.holds && ratios && rep.worst_ratio <= 0.5;
                 }});

    c.push_back({"apcount", "apcount/three-aps-0-15", "prime 3-APs in (0, 15] by brute force", [](json& d) {
                     const auto pw = sieve_window(0, 15);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     u64 want = 0;
                     for (u64 n = 1; n <= 15; ++n) {
                         for (u64 r = 1; n + 2 * r <= 15; ++r) want += slow_prime(n) && slow_prime(n + r) && slow_prime(n + 2 * r);
                     }
                     const u64 got = count_prime_aps(pw, blk, 3, RRange::all);
                     d["count"] = got;
                     return got == want && got == 2;
                 }});
    c.push_back({"apcount", "apcount/pairs-0-10", "prime 2-APs in (0, 10] are the 6 pairs", [](json& d) {
                     const auto pw = sieve_window(0, 10);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const u64 got = count_prime_aps(pw, blk, 2, RRange::all);
                     d["count"] = got;
                     return got == 6;
                 }});
    c.push_back({"apcount", "apcount/exclusions-5-30", "prime-power progressions with a proper power", [](json& d) {
                     const auto pw = sieve_window(5, 25);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const auto rep = prime_power_exclusions(pw, blk, 2);
                     const u64 N = blk.N, rbox = N / 6;
                     u64 want = 0;
                     for (u64 n = 1; n <= N; ++n) {
                         for (u64 r = 1; r <= rbox && n + r <= N; ++r) {
                             const u64 a = 5 + n, b = 5 + n + r;
                             const bool pa = slow_prime(a) || slow_prime_power(a).first;
                             const bool pb = slow_prime(b) || slow_prime_power(b).first;
                             const bool proper = slow_prime_power(a).first || slow_prime_power(b).first;
                             want += pa && pb && proper;
                         }
                     }
                     d["count"] = rep.count;
                     return rep.count == want && rep.within_bound;
                 }});
    c.push_back({"apcount", "apcount/weighted-0-15", "weighted AP sum equals brute-force products", [](json& d) {
                     const auto pw = sieve_window(0, 15);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const double R = 10.0;
                     const auto f = prime_weights(blk, pw, R, WeightVariant::with_prime_powers);
                     double want = 0.0;
                     for (u64 r = 1; r <= 15 / 9; ++r) {
                         for (u64 n = 1; n + 2 * r <= 15; ++n) {
                             want += slow_Lambda(n) * slow_Lambda(n + r) * slow_Lambda(n + 2 * r) / std::pow(std::log(R), 3);
                         }
                     }
                     const double got = weighted_ap_sum(f, 3).S;
                     d["S"] = got;
                     return near(got, want);
                 }});
    c.push_back({"apcount", "apcount/ledger-0-15", "S <= cap |T|, |T| = |M| + |E| and the exact chain", [](json& d) {
                     const auto pw = sieve_window(0, 15);
                     const auto blk = align_block(pw, build_modulus(0, 1), 0);
                     const auto rep = run_apcount(pw, blk, 3, 10.0);
                     d["S"] = rep.weighted.S;
                     d["T"] = rep.count_prime_power_pairs;
                     return rep.ledger.unconditional_ok();
                 }});

    c.push_back({"tuple", "tuple/greedy", "greedy residue pass and its survivor bound", [](json& d) {
                     const auto g = greedy_survivors(10, 3, 1);
                     const auto h = greedy_survivors(12, 2, 2);
                     d["survivors"] = g.survivors;
                     d["lower_bound"] = g.lower_bound.get_str();
                     return g.survivors == std::vector<u64>{1, 3, 7, 9} && g.bound_holds && g.lower_bound == Rational(4, 3) &&
                            h.survivors.size() == 12 && h.residues.empty();
                 }});
    c.push_back({"tuple", "tuple/admissibility", "tuples omit a class modulo every prime", [](json& d) {
                     const std::vector<u64> a{1, 3}, bad{0, 2, 4}, one{5};
                     const auto t = build_tuple(greedy_survivors(50, 3, 1), 3, 1);
                     d["greedy_shifts"] = t.shifts;
                     return is_admissible(a) && !is_admissible(bad) && is_admissible(one) && t.certified && t.admissible;
                 }});
    c.push_back({"tuple", "tuple/crt", "nu = a mod q with nu + h_i coprime to W", [](json& d) {
                     const u64 nu = crt_residue(tuple_from_shifts({6, 12}, 3, 2), build_modulus(2, 3));
                     const u64 nu1 = crt_residue(tuple_from_shifts({0}), build_modulus(2, 1));
                     bool refused = false;
                     try {
                         crt_residue(tuple_from_shifts({0, 1}), build_modulus(2, 1));
                     } catch (const invariant_violation&) {
                         refused = true;
                     }
                     d["nu"] = nu;
                     return nu == 5 && nu1 == 1 && refused;
                 }});
    c.push_back({"tuple", "tuple/weights-lambda", "lambda_d = mu(d_1)...mu(d_k) F(log d / log R)",
                 [library_F](json& d) {
                     const Polynomial P = one_minus_sum(2);
                     const SieveF F = library_F(P);
                     const std::vector<u64> d23{2, 3}, d11{1, 1}, d4{4, 1};
                     const double got = maynard_lambda(d23, F, 10.0, 1);
                     const double want = 1.0 - std::log(6.0) / std::log(10.0);
                     d["lambda_2_3"] = got;
                     return near(got, want) && maynard_lambda(d11, F, 10.0, 1) == 1.0 &&
                            maynard_lambda(d4, F, 10.0, 1) == 0.0;
                 }});
    c.push_back({"tuple", "tuple/weights-omega", "omega(n) as the squared divisor sum of lambda", [library_F](json& d) {
                     const SieveF F = library_F(one_minus_sum(1));
                     const double got = omega_weight(6, tuple_from_shifts({0}), F, 5.0, 1);
                     const double want = std::pow(std::log(6.0 / 5.0) / std::log(5.0), 2);
                     d["omega_6"] = got;
                     return near(got, want);
                 }});
    c.push_back({"tuple", "tuple/weights-majorant", "k = 1 weights reduce to (Lambda_R / log R)^2",
                 [library_F](json& d) {
                     const SieveF F = library_F(one_minus_sum(1));
                     const double R = 30.0;
                     const auto tup = tuple_from_shifts({0});
                     const OmegaEvaluator omega(tup, F, R, 1);
                     const auto pw = sieve_window(0, 2000);
                     const auto t = divisor_sum_table_at_level(align_block(pw, build_modulus(0, 1), 0), R);
                     double worst = 0.0;
                     for (u64 n = 1; n <= 2000; ++n) {
                         worst = std::max(worst, std::abs(omega(n) - std::pow(t.lambdaR[n - 1] / std::log(R), 2)));
                     }
                     d["max_abs_error"] = worst;
                     return worst <= 1e-9;
                 }});
    c.push_back({"tuple", "tuple/integrals", "I_k, J_k,i and M_k as exact rationals", [](json& d) {
                     const auto a = sieve_integrals(one_minus_sum(2));
                     const auto b = sieve_integrals(Polynomial::constant(1, 1));
                     d["I"] = a.I.get_str();
                     d["J"] = a.J[0].get_str();
                     d["M"] = a.M.get_str();
                     return a.I == Rational(1, 12) && a.J[0] == Rational(1, 20) && a.J[1] == Rational(1, 20) &&
                            a.M == Rational(6, 5) && b.I == 1 && b.J[0] == 1 && b.M == 1;
                 }});
    c.push_back({"tuple", "tuple/scaling", "M_k(cF) = M_k(F)", [](json& d) {
                     const Polynomial F = one_minus_sum(3) * one_minus_sum(3) + Polynomial::constant(3, Rational(1, 7));
                     const Rational m = sieve_integrals(F).M;
                     d["M"] = m.get_str();
                     return sieve_integrals(F * Rational(7, 3)).M == m && sieve_integrals(F * Rational(-2)).M == m;
                 }});
    c.push_back({"tuple", "tuple/optimize", "optimized M_k dominates every basis element", [](json& d) {
                     const std::vector<BasisElement> basis{{Polynomial::constant(2, 1), "1"}, {one_minus_sum(2), "1-t1-t2"}};
                     const auto two = optimize_F(2, basis);
                     const auto one = optimize_F(1, 3);
                     const auto single = optimize_F(2, std::vector<BasisElement>{basis[1]});
                     const auto full = optimize_F(2, 3);
                     d["M2_pair"] = two.M.get_str();
                     d["M2_degree3"] = to_double(full.M);
                     return two.M >= Rational(6, 5) && one.M == 1 && single.M == Rational(6, 5) && full.M >= Rational(6, 5);
                 }});
    c.push_back({"tuple", "tuple/monotone-k", "optimized M_k nondecreasing for k = 2..10", [](json& d) {
                     json values = json::array();
                     Rational prev = 0;
                     bool ok = true;
                     for (unsigned k = 2; k <= 10; ++k) {
                         const auto r = optimize_F(k, 3);
                         ok = ok && r.M >= prev;
                         prev = r.M;
                         values.push_back(to_double(r.M));
                     }
                     d["M"] = values;
                     return ok;
                 }});
    c.push_back({"tuple", "tuple/cluster", "a prime triple n, n+2, n+6 in (10^4, 2*10^4]", [](json& d) {
                     const auto tup = tuple_from_shifts({0, 2, 6});
                     const auto r = cluster_search(10000, 20000, tup, build_modulus(0, 1), 0,
                                                   SieveF(Polynomial::constant(3, 1)), 50.0);
                     d["best_n"] = r.best_n;
                     d["hits"] = r.best_hits;
                     return r.best_hits == 3 && slow_prime(r.best_n) && slow_prime(r.best_n + 2) &&
                            slow_prime(r.best_n + 6) && r.verified;
                 }});
    c.push_back({"tuple", "tuple/sums", "S1 and S2' by direct summation, ratio below max theta / log R",
                 [library_F](json& d) {
                     const Polynomial P = one_minus_sum(1);
                     const SieveF F = library_F(P);
                     const SieveF exact(P);
                     const auto tup = tuple_from_shifts({0});
                     const double R = 10.0;
                     const auto s = sieve_sums(10000, 12000, build_modulus(0, 1), 0, tup, F, R);
                     double s1 = 0.0, s2p = 0.0;
                     for (u64 n = 10001; n <= 12000; ++n) {
                         const double w = std::pow(slow_lambdaR(n, R) / std::log(R), 2);
                         s1 += w;
                         if (slow_prime(n)) s2p += w * std::log(static_cast<double>(n));
                     }
                     d["S1"] = s.S1;
                     d["ratio"] = s.ratio;
                     return near(s.S1, s1, 1e-9) && near(s.S2prime, s2p, 1e-9) &&
                            s.ratio <= s.max_theta_sum / s.log_R;
                 }});

    c.push_back({"bdh", "bdh/q1", "Q = 1 leaves the single class (theta delta - H)^2", [](json& d) {
                     const auto pw = sieve_window(1000, 100);
                     const auto r = bdh_variance(pw, 1);
                     const double dev = theta_delta(pw) - 100.0;
                     d["S"] = r.S_total;
                     return near(r.S_total, dev * dev, 1e-9);
                 }});
    c.push_back({"bdh", "bdh/naive-10-10-3", "variance by the direct double loop", [](json& d) {
                     const auto r = bdh_variance(sieve_window(10, 10), 3);
                     double want = 0.0;
                     for (u64 q = 1; q <= 3; ++q) {
                         const double phi = q == 1 ? 1.0 : static_cast<double>(q - 1);
                         for (u64 a = 0; a < q; ++a) {
                             double th = 0.0;
                             for (u64 p = 11; p <= 20; ++p) th += slow_prime(p) && p % q == a ? std::log(static_cast<double>(p)) : 0.0;
                             want += (th - 10.0 / phi) * (th - 10.0 / phi);
                         }
                     }
                     d["S"] = r.S_total;
                     d["oracle"] = want;
                     return near(r.S_total, want, 1e-9);
                 }});
    c.push_back({"bdh", "bdh/split", "S = S* + S0, S* <= 2 S_psi + 2 S_pp and theta = Psi - P", [](json& d) {
                     const auto pw = sieve_window(5000, 700);
                     const auto r = bdh_variance(pw, 40);
                     const auto dec = psi_pp_decomposition(pw, 40);
                     d["S_star"] = r.S_star;
                     d["bound"] = 2 * r.S_psi + 2 * r.S_pp;
                     return r.split_holds && r.inequality_holds && dec.identity_holds && r.S_total == r.S_star + r.S_zero;
                 }});
    c.push_back({"bdh", "bdh/zero-classes", "non-reduced classes give sum (q - phi(q)) (H / phi(q))^2", [](json& d) {
                     const auto r = bdh_variance(sieve_window(1000, 200), 30);
                     double want = 0.0;
                     for (u64 q = 1; q <= 30; ++q) {
                         u64 phi = 0;
                         for (u64 a = 1; a <= q; ++a) phi += std::gcd(a, q) == 1;
                         want += static_cast<double>(q - phi) * std::pow(200.0 / static_cast<double>(phi), 2);
                     }
                     d["S_zero"] = r.S_zero;
                     return near(r.S_zero, want, 1e-9);
                 }});
    c.push_back({"bdh", "bdh/prime-power-classes", "P_{4,a} on (10, 30] from 16, 25, 27", [](json& d) {
                     const auto t = class_terms(sieve_window(10, 20), 4);
                     d["P"] = t.pp;
                     return near(t.pp[0], std::log(2.0)) && near(t.pp[1], std::log(5.0)) && t.pp[2] == 0.0 &&
                            near(t.pp[3], std::log(3.0));
                 }});
    c.push_back({"bdh", "bdh/offdiag", "off-diagonal prime-power pairs weighted by tau_Q", [](json& d) {
                     const auto r = offdiag_divisor_count(sieve_window(10, 20), 10);
                     const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0);
                     const double want = 2.0 * (l2 * l5 * 3 + l2 * l3 * 1 + l5 * l3 * 2);
                     d["offdiag"] = r.offdiag;
                     return near(r.offdiag, want) && r.identity_holds && tau_Q(9, 10) == 3 && tau_Q(11, 10) == 1 &&
                            tau_Q(2, 10) == 2;
                 }});
    c.push_back({"bdh", "bdh/monotone", "S(x; Q) nondecreasing in Q with per-q increments", [](json& d) {
                     const auto pw = sieve_window(10, 20);
                     const auto a = monotonicity_check(pw, {1, 5, 10});
                     const auto b = monotonicity_check(pw, {1, 2, 3, 3});
                     d["values"] = a.values;
                     return a.verified && a.increments_match && b.verified && b.values[2] == b.values[3];
                 }});
    c.push_back({"bdh", "bdh/scan", "variance scan is finite, positive and seed-stable", [](json& d) {
                     const auto a = variance_scan(1000000, 0.6, 1.0, 1.0, 5, 0);
                     const auto b = variance_scan(1000000, 0.6, 1.0, 1.0, 5, 0);
                     bool ok = a.rows.size() == 5;
                     for (std::size_t i = 0; i < a.rows.size(); ++i) {
                         ok = ok && a.rows[i].x == b.rows[i].x && a.rows[i].ratio == b.rows[i].ratio &&
                              std::isfinite(a.rows[i].ratio) && a.rows[i].ratio > 0.0;
                     }
                     d["max_ratio"] = a.max_ratio;
                     return ok;
                 }});

    c.push_back({"empty-class", "empty-class/witnesses", "an empty reduced class for every prime q in (H+1, Q]",
                 [](json& d) {
                     const Window w = window_from_theta(100000, 0.4);
                     const auto pw = sieve_window(w.x, w.H);
                     const auto r = empty_class_bound(pw, 316);
                     double mertens = 0.0;
                     u64 primes = 0;
                     for (u64 q = 102; q <= 316; ++q) {
                         if (!slow_prime(q)) continue;
                         mertens += 1.0 / static_cast<double>(q);
                         ++primes;
                     }
                     d["H"] = w.H;
                     d["witnesses"] = r.witnesses.size();
                     d["mertens_sum"] = r.mertens_sum;
                     return w.H == 100 && r.all_verified && r.witnesses.size() == primes &&
                            near(r.mertens_sum, mertens) && std::abs(r.mertens_sum - std::log(1.0 / 0.8)) <= 0.05;
                 }});
    c.push_back({"empty-class", "empty-class/no-primes", "a prime-free window empties every reduced class", [](json& d) {
                     const auto pw = sieve_window(24, 4);
                     const auto r = empty_class_bound(pw, 20);
                     double want = 0.0;
                     for (u64 q : {7, 11, 13, 17, 19}) want += 1.0 / static_cast<double>(q - 1);
                     want *= 4.0 / std::log(24.0);
                     d["lower_bound"] = r.lower_bound;
                     return pw.prime_offsets.empty() && near(r.lower_bound, want);
                 }});
    c.push_back({"empty-class", "empty-class/precondition", "Q <= H + 1 is refused", [](json& d) {
                     bool refused = false;
                     try {
                         empty_class_bound(sieve_window(1000, 50), 51);
                     } catch (const input_error&) {
                         refused = true;
                     }
                     d["refused"] = refused;
                     return refused;
                 }});
    return c;
}

} // namespace

const std::vector<std::string>& verify_groups() {
    static const std::vector<std::string> g{"sieve", "wtrick", "majorant", "apcount", "tuple", "bdh", "empty-class"};
    return g;
}

VerifyRun run_verify(const std::string& only, bool corrupt_lambda) {
    if (only != "all" && std::find(verify_groups().begin(), verify_groups().end(), only) == verify_groups().end()) {
        throw input_error("unknown verify group " + only);
    }
    VerifyRun out;
    json rows = json::array();
    u64 passed = 0, failed = 0;
    for (const Check& check : build_checks(corrupt_lambda)) {
        if (only != "all" && check.group != only) continue;
        json detail = json::object();
        bool ok = false;
        try {
            ok = check.run(detail);
        } catch (const std::exception& e) {
            detail["error"] = e.what();
        }
        rows.push_back({{"key", check.key}, {"group", check.group}, {"embodies", check.embodies}, {"passed", ok},
                        {"detail", detail}});
        out.matrix += std::string(ok ? "PASS  " : "FAIL  ") + check.key + "  " + check.embodies + "\n";
        if (ok) {
            ++passed;
        } else {
            ++failed;
            out.failures.push_back(check.key);
        }
    }
    out.matrix += std::to_string(passed) + " passed, " + std::to_string(failed) + " failed\n";
    out.results = {{"checks", rows}};
    out.summary = {{"passed", passed}, {"failed", failed}, {"all_passed", failed == 0}};
    return out;
}

} // namespace aplab::cli
