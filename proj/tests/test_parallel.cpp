#include "oracles.hpp"

#include "aplab/apcount.hpp"
#include "aplab/bdh_lab.hpp"
#include "aplab/majorant.hpp"
#include "aplab/reference.hpp"
#include "aplab/tuple_sieve.hpp"

#include <doctest.h>

#include <cstdlib>
#include <string>

using namespace aplab;

namespace {

struct Snapshot {
    PrimeWindow pw;
    std::vector<double> lambdaR;
    double S = 0;
    u64 aps = 0;
    double bdh = 0;
    double s1 = 0;
};

Snapshot compute() {
    Snapshot s;
    s.pw = sieve_window(2000000, 300000, SieveOptions{1u << 12, true});
    const auto mod = build_modulus(5);
    const auto blk = align_block(s.pw, mod, select_residue(s.pw, mod).b);
    s.lambdaR = divisor_sum_table(blk, 0.4).lambdaR;
    const auto f = prime_weights(blk, s.pw, 20.0, WeightVariant::with_prime_powers);
    s.S = weighted_ap_sum(f, 3).S;
    s.aps = count_prime_aps(s.pw, blk, 3, RRange::box);
    s.bdh = bdh_variance(sieve_window(100000, 2000), 200).S_total;
    const auto t = tuple_from_shifts({0, 2, 6});
    s.s1 = sieve_sums(100000, 160000, build_modulus(0), 0, t, optimize_F(3, 1).F, 30).S1;
    return s;
}

void set_threads(int n) { setenv("APLAB_THREADS", std::to_string(n).c_str(), 1); }

} // namespace

TEST_CASE("thread count does not change any bit") {
    set_threads(1);
    const auto one = compute();
    for (int n : {2, 3, 8}) {
        set_threads(n);
        const auto many = compute();
        CHECK(many.pw.prime_offsets == one.pw.prime_offsets);
        CHECK(many.pw.prime_powers == one.pw.prime_powers);
        CHECK(many.lambdaR == one.lambdaR);
        CHECK(many.S == one.S);
        CHECK(many.aps == one.aps);
        CHECK(many.bdh == one.bdh);
        CHECK(many.s1 == one.s1);
    }
    unsetenv("APLAB_THREADS");
}

TEST_CASE("parallel kernels agree with the serial reference") {
    oracle::Gen g(606);
    for (int i = 0; i < 8; ++i) {
        const u64 x = g.log_uniform(10, 1e9);
        const u64 H = g.uniform(500, 8000);
        const auto pw = sieve_window(x, H);
        const auto ref = reference::sieve_window(x, H);
        CHECK(pw.prime_offsets == ref.prime_offsets);
        CHECK(pw.prime_powers == ref.prime_powers);

        const auto mod = build_modulus(static_cast<double>(g.uniform(0, 7)));
        if (H < mod.W * 3) continue;
        const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
        const double R = g.real(2, 200);
        const auto tab = divisor_sum_table_at_level(blk, R);
        const auto slow = reference::divisor_sum(blk, R);
        for (std::size_t t = 0; t < slow.size(); ++t) CHECK(std::abs(tab.lambdaR[t] - slow[t]) < 1e-9);

        const auto f = prime_weights(blk, pw, R, WeightVariant::with_prime_powers);
        CHECK(weighted_ap_sum(f, 3).S == doctest::Approx(reference::weighted_ap_sum(f, 3)).epsilon(1e-12));
        for (RRange m : {RRange::box, RRange::all}) {
            CHECK(count_prime_aps(pw, blk, 3, m) == reference::count_prime_aps(pw, blk, 3, m));
        }
        const auto small = sieve_window(x, std::min<u64>(H, 300));
        CHECK(bdh_variance(small, 40).S_total ==
              doctest::Approx(reference::bdh_variance(small, 40)).epsilon(1e-12));
    }
}
