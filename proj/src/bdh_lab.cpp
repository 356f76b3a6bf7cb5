#include "aplab/bdh_lab.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace aplab {

namespace {

struct Entry {
    u64 value;
    double log_p;
    bool proper_power;
};

// Window primes and proper prime powers, increasing by value.
std::vector<Entry> window_entries(const PrimeWindow& pw, bool primes, bool powers) {
    std::vector<Entry> out;
    std::size_t i = 0, j = 0;
    const auto& P = pw.prime_offsets;
    const auto& PP = pw.prime_powers;
    while ((primes && i < P.size()) || (powers && j < PP.size())) {
        const bool take_prime =
            primes && i < P.size() && (!powers || j >= PP.size() || P[i] < PP[j].offset);
        if (take_prime) {
            const u64 v = pw.value(P[i++]);
            out.push_back({v, std::log(static_cast<double>(v)), false});
        } else {
            const PrimePower& pp = PP[j++];
            out.push_back({pw.value(pp.offset), std::log(static_cast<double>(pp.base)), true});
        }
    }
    return out;
}

std::vector<u64> phi_table(u64 n) {
    std::vector<u64> phi(n + 1);
    for (u64 i = 0; i <= n; ++i) phi[i] = i;
    for (u64 p = 2; p <= n; ++p) {
        if (phi[p] != p) continue;
        for (u64 m = p; m <= n; m += p) phi[m] -= phi[m] / p;
    }
    return phi;
}

struct ClassSum {
    u64 a;
    CompensatedSum theta;
    CompensatedSum pp;
};

// Nonempty classes mod q in increasing a. Within a class, entries are added
// in increasing value whichever layout is used.
std::vector<ClassSum> nonempty_classes(const std::vector<Entry>& entries, u64 q) {
    std::vector<ClassSum> out;
    if (entries.empty()) return out;
    if (q <= 4 * entries.size()) {
        std::vector<ClassSum> dense(q);
        std::vector<bool> used(q, false);
        for (const Entry& e : entries) {
            const u64 a = e.value % q;
            used[a] = true;
            (e.proper_power ? dense[a].pp : dense[a].theta).add(e.log_p);
        }
        for (u64 a = 0; a < q; ++a) {
            if (!used[a]) continue;
            dense[a].a = a;
            out.push_back(dense[a]);
        }
        return out;
    }
    std::vector<std::pair<u64, std::size_t>> keyed;
    keyed.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) keyed.emplace_back(entries[i].value % q, i);
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [a, i] : keyed) {
        if (out.empty() || out.back().a != a) out.push_back(ClassSum{a, {}, {}});
        (entries[i].proper_power ? out.back().pp : out.back().theta).add(entries[i].log_p);
    }
    return out;
}

struct QPart {
    double star = 0.0, zero = 0.0, psi = 0.0, pp = 0.0, all = 0.0;
    double max_identity_error = 0.0;
    u64 checked = 0;
};

QPart modulus_part(const std::vector<Entry>& entries, u64 q, u64 phi, u64 H) {
    const double c = static_cast<double>(H) / static_cast<double>(phi);
    CompensatedSum star, zero, psi, pp, all;
    u64 nonempty_coprime = 0, nonempty_other = 0;
    QPart part;
    for (const ClassSum& cs : nonempty_classes(entries, q)) {
        const double th = cs.theta.value();
        const double P = cs.pp.value();
        const double dev = th - c;
        const double Psi = (th + P) - c;
        all.add(dev * dev);
        if (gcd(cs.a, q) == 1) {
            ++nonempty_coprime;
            star.add(dev * dev);
            psi.add(Psi * Psi);
            pp.add(P * P);
            const double err = std::abs(dev - (Psi - P));
            part.max_identity_error = std::max(part.max_identity_error, err / (std::abs(th) + P + c + 1.0));
        } else {
            ++nonempty_other;
            zero.add(dev * dev);
        }
    }
    // empty reduced classes satisfy the identity exactly: both sides are -c
    part.checked = phi;
    const double empty_coprime = static_cast<double>(phi - nonempty_coprime);
    const double empty_other = static_cast<double>((q - phi) - nonempty_other);
    star.add(empty_coprime * c * c);
    psi.add(empty_coprime * c * c);
    zero.add(empty_other * c * c);
    all.add((empty_coprime + empty_other) * c * c);
    part.star = star.value();
    part.zero = zero.value();
    part.psi = psi.value();
    part.pp = pp.value();
    part.all = all.value();
    return part;
}

double safe_log(u64 x) { return x >= 2 ? std::log(static_cast<double>(x)) : std::numeric_limits<double>::quiet_NaN(); }

struct VarianceCore {
    VarianceReport report;
    u64 checked = 0;
    double max_identity_error = 0.0;
};

VarianceCore variance_core(const PrimeWindow& pw, u64 Q, double A) {
    if (Q < 1) throw input_error("Q must be >= 1");
    if (Q > (u64{1} << 32)) throw input_error("Q too large");
    const auto entries = window_entries(pw, true, true);
    const auto phi = phi_table(Q);
    const u64 H = pw.window.H;
    std::vector<QPart> parts(Q);
#pragma omp parallel for schedule(dynamic, 16) num_threads(kernel_threads()) if (Q > 64)
    for (long long i = 0; i < static_cast<long long>(Q); ++i) {
        const u64 q = static_cast<u64>(i) + 1;
        parts[i] = modulus_part(entries, q, phi[q], H);
    }

    VarianceCore core;
    VarianceReport& r = core.report;
    r.x = pw.window.x;
    r.H = H;
    r.Q = Q;
    r.A = A;
    CompensatedSum star, zero, psi, pp, all, closed;
    r.per_q.reserve(Q);
    for (u64 q = 1; q <= Q; ++q) {
        const QPart& p = parts[q - 1];
        star.add(p.star);
        zero.add(p.zero);
        psi.add(p.psi);
        pp.add(p.pp);
        all.add(p.all);
        r.per_q.push_back(p.star + p.zero);
        const double c = static_cast<double>(H) / static_cast<double>(phi[q]);
        closed.add(static_cast<double>(q - phi[q]) * c * c);
        core.checked += p.checked;
        core.max_identity_error = std::max(core.max_identity_error, p.max_identity_error);
    }
    r.S_star = star.value();
    r.S_zero = zero.value();
    r.S_total = r.S_star + r.S_zero;
    r.S_psi = psi.value();
    r.S_pp = pp.value();
    r.S_class_sum = all.value();
    r.zero_closed_form = closed.value();
    r.zero_closed_form_applies = Q <= pw.window.x;

    r.split_holds = std::abs(r.S_total - r.S_class_sum) <= 1e-12 * std::abs(r.S_class_sum) + 1e-300;
    r.inequality_holds = r.S_star <= (2.0 * r.S_psi + 2.0 * r.S_pp) * (1.0 + 1e-12) + 1e-300;
    if (!r.split_holds) throw invariant_violation("S != S* + S0");
    if (!r.inequality_holds) throw invariant_violation("S* exceeds 2 S_psi + 2 S_pp");
    if (core.max_identity_error > 1e-12) throw invariant_violation("theta term != Psi - P at some class");

    r.log_X = safe_log(r.x);
    const double HX = static_cast<double>(H) * static_cast<double>(r.x);
    r.ratio_HX = HX > 0.0 ? r.S_total / HX : std::numeric_limits<double>::quiet_NaN();
    r.ratio_HXlogX = r.ratio_HX / r.log_X;
    r.ratio_A = r.ratio_HX / std::pow(r.log_X, 1.0 - A);
    return core;
}

} // namespace

VarianceReport bdh_variance(const PrimeWindow& pw, u64 Q, double A) { return variance_core(pw, Q, A).report; }

ClassTerms class_terms(const PrimeWindow& pw, u64 q) {
    if (q < 1) throw input_error("q must be >= 1");
    ClassTerms out;
    out.theta.assign(q, 0.0);
    out.pp.assign(q, 0.0);
    out.psi.assign(q, 0.0);
    for (const ClassSum& cs : nonempty_classes(window_entries(pw, true, true), q)) {
        out.theta[cs.a] = cs.theta.value();
        out.pp[cs.a] = cs.pp.value();
        out.psi[cs.a] = cs.theta.value() + cs.pp.value();
    }
    return out;
}

PsiPpDecomposition psi_pp_decomposition(const PrimeWindow& pw, u64 Q) {
    const VarianceCore core = variance_core(pw, Q, 1.0);
    PsiPpDecomposition out;
    out.S_psi = core.report.S_psi;
    out.S_pp = core.report.S_pp;
    out.classes_checked = core.checked;
    out.max_identity_error = core.max_identity_error;
    out.identity_holds = core.max_identity_error <= 1e-12;
    return out;
}

u64 tau_Q(u64 h, u64 Q) {
    if (h == 0) throw input_error("tau_Q needs h >= 1");
    u64 count = 0;
    for (u64 d = 1; d * d <= h; ++d) {
        if (h % d != 0) continue;
        const u64 e = h / d;
        if (d <= Q) ++count;
        if (e != d && e <= Q) ++count;
    }
    return count;
}

OffdiagReport offdiag_divisor_count(const PrimeWindow& pw, u64 Q) {
    if (Q < 1) throw input_error("Q must be >= 1");
    const auto powers = window_entries(pw, false, true);
    OffdiagReport out;
    CompensatedSum off, diag;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        diag.add(powers[i].log_p * powers[i].log_p);
        for (std::size_t j = i + 1; j < powers.size(); ++j) {
            const u64 h = powers[j].value - powers[i].value;
            off.add(powers[i].log_p * powers[j].log_p * static_cast<double>(tau_Q(h, Q)));
        }
    }
    out.offdiag = 2.0 * off.value();
    out.diagonal = static_cast<double>(Q) * diag.value();
    CompensatedSum all;
    for (u64 q = 1; q <= Q; ++q) {
        for (const ClassSum& cs : nonempty_classes(powers, q)) {
            const double P = cs.pp.value();
            all.add(P * P);
        }
    }
    out.S_pp_all = all.value();
    const double rhs = out.diagonal + out.offdiag;
    out.identity_holds = std::abs(out.S_pp_all - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs));
    if (!out.identity_holds) throw invariant_violation("S_pp over all classes != diagonal + off-diagonal");
    return out;
}

ScanTable variance_scan(u64 X, double theta, double B, double A, std::size_t sample_count, std::uint64_t seed) {
    if (X < 3) throw input_error("X must be >= 3");
    if (!(theta > 0.0 && theta < 1.0)) throw input_error("theta must lie in (0, 1)");
    if (sample_count == 0) throw input_error("sample count must be >= 1");
    if (X > (std::numeric_limits<u64>::max() >> 2)) throw input_error("X too large");
    const double logX = std::log(static_cast<double>(X));
    const double Qd = std::floor(std::sqrt(static_cast<double>(X)) * std::pow(logX, -B));
    if (!(Qd >= 1.0)) throw input_error("Q = floor(X^(1/2) (log X)^-B) is 0");
    ScanTable t;
    t.X = X;
    t.theta = theta;
    t.B = B;
    t.A = A;
    t.Q = static_cast<u64>(Qd);
    t.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pick(X, 2 * X);
    const double scale = static_cast<double>(X) * std::pow(logX, 1.0 - A);
    CompensatedSum total;
    for (std::size_t i = 0; i < sample_count; ++i) {
        ScanRow row;
        row.x = pick(rng);
        row.H = floor_power(row.x, theta);
        const auto pw = sieve_window(row.x, row.H);
        row.S = bdh_variance(pw, t.Q, A).S_total;
        row.ratio = row.S / (static_cast<double>(row.H) * scale);
        t.max_ratio = i == 0 ? row.ratio : std::max(t.max_ratio, row.ratio);
        total.add(row.ratio);
        t.rows.push_back(row);
    }
    t.mean_ratio = total.value() / static_cast<double>(sample_count);
    return t;
}

MonotonicityReport monotonicity_check(const PrimeWindow& pw, const std::vector<u64>& Q_grid) {
    if (Q_grid.empty()) throw input_error("Q grid is empty");
    for (std::size_t i = 0; i < Q_grid.size(); ++i) {
        if (Q_grid[i] < 1) throw input_error("Q grid entries must be >= 1");
        if (i > 0 && Q_grid[i] < Q_grid[i - 1]) throw input_error("Q grid must be nondecreasing");
    }
    MonotonicityReport out;
    out.grid = Q_grid;
    for (u64 Q : Q_grid) out.values.push_back(bdh_variance(pw, Q).S_total);
    const auto per_q = bdh_variance(pw, Q_grid.back()).per_q;
    out.verified = true;
    out.increments_match = true;
    const double tol = 1e-9 * std::max(1.0, out.values.back());
    for (std::size_t i = 1; i < Q_grid.size(); ++i) {
        const double inc = out.values[i] - out.values[i - 1];
        CompensatedSum expected;
        for (u64 q = Q_grid[i - 1] + 1; q <= Q_grid[i]; ++q) expected.add(per_q[q - 1]);
        out.increments.push_back(inc);
        out.per_q_increments.push_back(expected.value());
        if (out.values[i] < out.values[i - 1] * (1.0 - 1e-12)) out.verified = false;
        if (std::abs(inc - expected.value()) > tol) out.increments_match = false;
    }
    if (!out.verified) throw invariant_violation("S(x; Q) decreased along the grid");
    return out;
}

EmptyClassReport empty_class_bound(const PrimeWindow& pw, u64 Q, double delta_class,
                                   const std::optional<CongruenceSubclass>& subclass) {
    const u64 H = pw.window.H;
    const u64 x = pw.window.x;
    if (Q <= H + 1) throw input_error("empty-class bound needs Q > H + 1");
    if (x < 2) throw input_error("empty-class bound needs x >= 2");
    EmptyClassReport out;
    out.delta = delta_class;
    if (subclass) {
        const u64 m = subclass->m;
        if (m < 1 || subclass->residues.empty()) throw input_error("subclass needs m >= 1 and residues");
        std::vector<u64> set = subclass->residues;
        std::sort(set.begin(), set.end());
        if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw input_error("repeated subclass residue");
        for (u64 r : set) {
            if (r >= m || gcd(r, m) != 1) throw input_error("subclass residues must be reduced classes mod m");
        }
        out.delta = static_cast<double>(set.size()) / static_cast<double>(euler_phi(m));
    }
    if (!(out.delta > 0.0 && out.delta <= 1.0)) throw input_error("delta must lie in (0, 1]");

    std::vector<u64> restricted;
    for (u64 off : pw.prime_offsets) {
        const u64 p = pw.value(off);
        if (subclass) {
            const auto& s = subclass->residues;
            if (std::find(s.begin(), s.end(), p % subclass->m) == s.end()) continue;
        }
        restricted.push_back(p);
    }
    out.restricted_primes = restricted.size();

    const double scale = out.delta * static_cast<double>(H) / std::log(static_cast<double>(x));
    CompensatedSum bound, mertens;
    bool ok = true;
    std::vector<u64> residues;
    for (u64 q : primes_up_to(Q)) {
        if (q <= H + 1) continue;
        residues.clear();
        for (u64 p : restricted) residues.push_back(p % q);
        std::sort(residues.begin(), residues.end());
        u64 a = 1;
        for (u64 r : residues) {
            if (r < a) continue;
            if (r == a) ++a;
            else break;
        }
        if (a >= q) throw invariant_violation("no empty reduced class mod " + std::to_string(q));
        bool empty = true;
        for (u64 p : restricted) empty = empty && p % q != a;
        ok = ok && empty;
        out.witnesses.push_back({q, a});
        bound.add(scale / static_cast<double>(q - 1));
        mertens.add(1.0 / static_cast<double>(q));
    }
    out.lower_bound = bound.value();
    out.mertens_sum = mertens.value();
    out.mertens_reference = std::log(std::log(static_cast<double>(Q))) - std::log(std::log(static_cast<double>(H + 1)));
    out.all_verified = ok;
    if (!ok) throw invariant_violation("empty-class witness contains a restricted prime");
    return out;
}

} // namespace aplab
