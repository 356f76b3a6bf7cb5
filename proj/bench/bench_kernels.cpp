// Times each parallel kernel against its serial reference on one fixed input.
// Usage: bench_kernels [scale]   (scale multiplies the default sizes)

#include "aplab/apcount.hpp"
#include "aplab/bdh_lab.hpp"
#include "aplab/majorant.hpp"
#include "aplab/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

using namespace aplab;

namespace {

double time_best(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double par, double ref, bool same) {
    std::printf("%-18s %12.4f %12.4f %9.2fx  %s\n", name, par * 1e3, ref * 1e3, ref / par, same ? "match" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
    const auto sz = [&](double v) { return static_cast<u64>(std::max(1.0, v * scale)); };
    std::printf("threads %d\n", kernel_threads());
    std::printf("%-18s %12s %12s %10s\n", "kernel", "parallel ms", "serial ms", "speedup");

    const u64 x = 1000000000, H = sz(2e6);
    PrimeWindow pw, pw_ref;
    const double t_sieve = time_best([&] { pw = sieve_window(x, H); });
    const double t_sieve_ref = time_best([&] { pw_ref = reference::sieve_window(x, H); });
    row("sieve_window", t_sieve, t_sieve_ref, pw.prime_offsets == pw_ref.prime_offsets && pw.prime_powers == pw_ref.prime_powers);

    const auto mod = build_modulus(3);
    const auto blk = align_block(pw, mod, select_residue(pw, mod).b);
    const double R = std::pow(static_cast<double>(blk.N), 0.3);
    MajorantTable tab;
    std::vector<double> slow;
    const double t_div = time_best([&] { tab = divisor_sum_table_at_level(blk, R); });
    const double t_div_ref = time_best([&] { slow = reference::divisor_sum(blk, R); });
    double err = 0;
    for (std::size_t i = 0; i < slow.size(); ++i) err = std::max(err, std::abs(slow[i] - tab.lambdaR[i]));
    row("divisor_sum", t_div, t_div_ref, err < 1e-9);

    const auto small_pw = sieve_window(x, sz(3e4));
    const auto small_blk = align_block(small_pw, mod, select_residue(small_pw, mod).b);
    const auto f = prime_weights(small_blk, small_pw, 10.0, WeightVariant::with_prime_powers);
    double s = 0, s_ref = 0;
    const double t_ap = time_best([&] { s = weighted_ap_sum(f, 3).S; });
    const double t_ap_ref = time_best([&] { s_ref = reference::weighted_ap_sum(f, 3); });
    row("weighted_ap_sum", t_ap, t_ap_ref, std::abs(s - s_ref) <= 1e-12 * std::abs(s_ref));

    u64 c = 0, c_ref = 0;
    const double t_cnt = time_best([&] { c = count_prime_aps(small_pw, small_blk, 3, RRange::all); });
    const double t_cnt_ref = time_best([&] { c_ref = reference::count_prime_aps(small_pw, small_blk, 3, RRange::all); });
    row("count_prime_aps", t_cnt, t_cnt_ref, c == c_ref);

    const auto var_pw = sieve_window(x, sz(2000));
    const u64 Q = sz(400);
    double v = 0, v_ref = 0;
    const double t_var = time_best([&] { v = bdh_variance(var_pw, Q).S_total; });
    const double t_var_ref = time_best([&] { v_ref = reference::bdh_variance(var_pw, Q); });
    row("bdh_variance", t_var, t_var_ref, std::abs(v - v_ref) <= 1e-9 * v_ref);
    return 0;
}
