#include "commands.hpp"

#include "verify.hpp"

#include "aplab/apcount.hpp"
#include "aplab/bdh_lab.hpp"
#include "aplab/errors.hpp"
#include "aplab/majorant.hpp"
#include "aplab/sieve_core.hpp"
#include "aplab/tuple_sieve.hpp"
#include "aplab/wtrick.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aplab::cli {

namespace {

using T = OptType;

OptionSpec opt(std::string name, T type, json fallback, std::string help, bool required = false,
               std::string excludes = {}) {
    return OptionSpec{std::move(name), type, std::move(fallback), std::move(help), required, std::move(excludes)};
}

std::vector<OptionSpec> window_options() {
    return {opt("x", T::integer, nullptr, "window start, the window is (x, x+H]", true),
            opt("H", T::integer, nullptr, "window length", false, "theta"),
            opt("theta", T::real, nullptr, "set H = floor(x^theta)", false, "H")};
}

std::vector<OptionSpec> with_window(std::vector<OptionSpec> extra) {
    auto v = window_options();
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
}

} // namespace

const std::vector<CommandSpec>& command_specs() {
    static const std::vector<CommandSpec> specs = {
        {"sieve", "primes and prime powers in a window",
         with_window({opt("list", T::flag, false, "include the full prime list")})},
        {"wtrick", "primorial modulus, residue class and reindexed block",
         with_window({opt("w-cut", T::real, 7.0, "primorial cutoff w"),
                      opt("extra", T::integer, 1, "extra factor of W"),
                      opt("eta", T::real, 0.05, "R = N^eta", false, "R"),
                      opt("R", T::real, nullptr, "sieve level R", false, "eta"),
                      opt("variant", T::text, "with_prime_powers", "with_prime_powers | truncated_prime")})},
        {"majorant", "truncated divisor sum, majorant and moments",
         with_window({opt("w-cut", T::real, 7.0, "primorial cutoff w"),
                      opt("eta", T::real, 0.05, "R = N^eta", false, "R"),
                      opt("R", T::real, nullptr, "sieve level R", false, "eta"),
                      opt("k", T::integer, 3, "progression length for the k-point moment"),
                      opt("box-fraction", T::real, 0.0, "r <= N * fraction, 0 selects N/(3k)"),
                      opt("force-exact", T::flag, false, "never sample the moments"),
                      opt("samples", T::integer, 1000000, "Monte Carlo samples"),
                      opt("seed", T::integer, 0, "random seed")})},
        {"apcount", "weighted and unweighted progression counts with the conversion ledger",
         with_window({opt("w-cut", T::real, 7.0, "primorial cutoff w"),
                      opt("eta", T::real, 0.05, "R = N^eta", false, "R"),
                      opt("R", T::real, nullptr, "sieve level R", false, "eta"),
                      opt("k", T::integer, 3, "progression length"),
                      opt("C-k", T::real, 1.0, "exclusion constant"),
                      opt("c-k", T::real, 1.0, "Szemeredi-type constant")})},
        {"tuple", "greedy residue pass, admissible tuple and CRT residue",
         {opt("span", T::integer, nullptr, "survivor span", true), opt("y", T::integer, nullptr, "greedy prime bound", true),
          opt("q", T::integer, 1, "modulus of the shifts"), opt("a", T::integer, 1, "class a mod q"),
          opt("k", T::integer, nullptr, "tuple length", true),
          opt("w-cut", T::real, nullptr, "primorial cutoff for the CRT modulus (default y)")}},
        {"maynard-opt", "optimize M_k(F) over a symmetric polynomial basis",
         {opt("k", T::integer, nullptr, "number of variables", true), opt("degree", T::integer, 3, "basis degree"),
          opt("nonneg-resolution", T::integer, 0, "lattice resolution for the F >= 0 check, 0 skips")}},
        {"cluster", "prime hits among n + h_i and the sieve sums",
         {opt("X-lo", T::real, nullptr, "range start (exclusive)", true),
          opt("X-hi", T::real, nullptr, "range end (inclusive)", true),
          opt("shifts", T::integer_list, nullptr, "h_1 < ... < h_k", true), opt("q", T::integer, 1, "modulus"),
          opt("a", T::integer, 1, "class a mod q"), opt("w-cut", T::real, 0.0, "primorial cutoff of W"),
          opt("R", T::real, nullptr, "sieve level (default X_lo^(1/4))"),
          opt("F", T::text, "opt", "opt | one | zero"), opt("degree", T::integer, 3, "basis degree for F = opt")}},
        {"bdh", "variance of primes in progressions with its decomposition",
         with_window({opt("Q", T::integer, nullptr, "largest modulus", true),
                      opt("A", T::real, 1.0, "exponent in the (log X)^(1-A) normalization"),
                      opt("per-q", T::flag, false, "emit the per-modulus contributions"),
                      opt("offdiag", T::flag, false, "audit the prime-power part by divisor counting")})},
        {"empty-class", "empty reduced classes and the resulting lower bound",
         with_window({opt("Q", T::integer, nullptr, "largest modulus", true),
                      opt("delta", T::real, 1.0, "class density"),
                      opt("m", T::integer, nullptr, "congruence subclass modulus"),
                      opt("residues", T::integer_list, nullptr, "subclass residues mod m")})},
        {"scan", "variance ratios at sampled x in [X, 2X]",
         {opt("X", T::integer, nullptr, "scale", true), opt("theta", T::real, 0.6, "H = floor(x^theta)"),
          opt("B", T::real, 1.0, "Q = floor(X^(1/2) (log X)^-B)"), opt("A", T::real, 1.0, "normalization exponent"),
          opt("samples", T::integer, 10, "number of sampled x"), opt("seed", T::integer, 0, "random seed"),
          opt("format", T::text, "csv", "csv | json")}},
        {"verify", "run the oracle and invariant suite",
         {opt("only", T::text, "all", "restrict to one group"),
          OptionSpec{"corrupt-lambda", T::flag, false, "test hook: perturb the sieve weights", false, {}, true}}},
    };
    return specs;
}

namespace {

const json& need(const json& c, const char* key) {
    if (!c.contains(key) || c[key].is_null()) throw input_error(std::string("missing parameter --") + key);
    return c[key];
}

u64 get_u64(const json& c, const char* key) {
    const json& v = need(c, key);
    if (v.is_number_unsigned()) return v.get<u64>();
    if (v.is_number_integer() && v.get<i64>() >= 0) return static_cast<u64>(v.get<i64>());
    throw input_error(std::string("--") + key + " must be a nonnegative integer");
}

double get_real(const json& c, const char* key) {
    const json& v = need(c, key);
    if (!v.is_number()) throw input_error(std::string("--") + key + " must be a number");
    return v.get<double>();
}

bool get_flag(const json& c, const char* key) { return c.contains(key) && c[key].is_boolean() && c[key].get<bool>(); }

bool has(const json& c, const char* key) { return c.contains(key) && !c[key].is_null(); }

std::vector<u64> get_list(const json& c, const char* key) {
    const json& v = need(c, key);
    if (!v.is_array()) throw input_error(std::string("--") + key + " must be a list");
    std::vector<u64> out;
    for (const auto& e : v) {
        if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<i64>() >= 0)) {
            throw input_error(std::string("--") + key + " entries must be nonnegative integers");
        }
        out.push_back(e.get<u64>());
    }
    return out;
}

unsigned get_small(const json& c, const char* key) {
    const u64 v = get_u64(c, key);
    if (v > 1000000) throw input_error(std::string("--") + key + " is too large");
    return static_cast<unsigned>(v);
}

PrimeWindow window_from(const json& c) {
    const u64 x = get_u64(c, "x");
    if (has(c, "H")) return sieve_window(x, get_u64(c, "H"));
    if (!has(c, "theta")) throw input_error("give --H or --theta");
    const Window w = window_from_theta(x, get_real(c, "theta"));
    PrimeWindow pw = sieve_window(w.x, w.H);
    pw.window.theta_exponent = w.theta_exponent;
    return pw;
}

json window_json(const Window& w) {
    json j;
    j["x"] = w.x;
    j["H"] = w.H;
    j["end"] = w.end();
    if (w.theta_exponent) j["theta"] = *w.theta_exponent;
    return j;
}

json modulus_json(const WModulus& m) {
    json j;
    j["w_cut"] = m.w_cut;
    j["extra_factor"] = m.extra_factor;
    j["W"] = m.W;
    j["phi_W"] = m.phi_W;
    j["primes"] = m.primes;
    return j;
}

json block_json(const Block& b) {
    json j;
    j["b"] = b.b;
    j["m0"] = b.m0;
    j["N"] = b.N;
    j["first_value"] = b.value(1);
    j["last_value"] = b.value(b.N);
    return j;
}

json nan_or(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string rational(const Rational& r) { return r.get_str(); }

json seed_of(const json& c) { return c.contains("seed") ? c["seed"] : json(0); }

json document(const json& config, json results, json checks) {
    json doc;
    doc["tool"] = "aplab";
    doc["version"] = APLAB_VERSION;
    doc["seed"] = seed_of(config);
    doc["config"] = config;
    doc["results"] = std::move(results);
    doc["checks"] = std::move(checks);
    return doc;
}

double level(const json& c, const Block& block) {
    if (has(c, "R")) return get_real(c, "R");
    const double eta = get_real(c, "eta");
    if (!(eta > 0.0 && eta < 1.0)) throw input_error("eta must lie in (0, 1)");
    return std::pow(static_cast<double>(block.N), eta);
}

struct Aligned {
    PrimeWindow pw;
    WModulus mod;
    ResidueChoice choice;
    Block block;
};

Aligned aligned_block(const json& c, u64 extra) {
    Aligned a;
    a.pw = window_from(c);
    a.mod = build_modulus(get_real(c, "w-cut"), extra);
    a.choice = select_residue(a.pw, a.mod);
    a.block = align_block(a.pw, a.mod, a.choice.b);
    return a;
}

json residue_json(const ResidueChoice& r) {
    json j;
    j["b"] = r.b;
    j["score"] = r.score;
    j["reduced_total"] = r.reduced_total;
    j["reduced_classes"] = r.reduced_classes;
    return j;
}

Output run_sieve(const json& c) {
    const PrimeWindow pw = window_from(c);
    json r;
    r["window"] = window_json(pw.window);
    r["prime_count"] = pw.prime_offsets.size();
    r["prime_power_count"] = pw.prime_powers.size();
    json powers = json::array();
    for (const auto& p : pw.prime_powers) {
        powers.push_back({{"value", pw.value(p.offset)}, {"base", p.base}, {"exponent", p.exponent}});
    }
    r["prime_powers"] = powers;
    if (get_flag(c, "list")) {
        json primes = json::array();
        for (u64 o : pw.prime_offsets) primes.push_back(pw.value(o));
        r["primes"] = primes;
    }
    const double psi = psi_delta(pw), theta = theta_delta(pw);
    r["psi_delta"] = psi;
    r["theta_delta"] = theta;
    json checks;
    checks["psi_at_least_theta"] = psi >= theta;
    return {to_text(document(c, r, checks))};
}

WeightVariant variant_from(const json& c) {
    const std::string v = need(c, "variant").get<std::string>();
    if (v == "with_prime_powers") return WeightVariant::with_prime_powers;
    if (v == "truncated_prime") return WeightVariant::truncated_prime;
    throw input_error("--variant must be with_prime_powers or truncated_prime");
}

Output run_wtrick(const json& c) {
    const Aligned a = aligned_block(c, get_u64(c, "extra"));
    const double R = level(c, a.block);
    const auto f = prime_weights(a.block, a.pw, R, variant_from(c));
    json r;
    r["window"] = window_json(a.pw.window);
    r["modulus"] = modulus_json(a.mod);
    r["residue"] = residue_json(a.choice);
    r["block"] = block_json(a.block);
    r["R"] = R;
    r["cap_scale"] = cap_scale(a.pw.window);
    const double delta = density(f);
    u64 support = 0;
    for (double v : f) support += v > 0.0 ? 1 : 0;
    r["weights"] = {{"density", delta}, {"density_times_log_R", delta * std::log(R)}, {"support", support}};
    json checks;
    checks["pigeonhole"] =
        a.choice.score * static_cast<double>(a.choice.reduced_classes) >= a.choice.reduced_total * (1.0 - 1e-12);
    checks["alignment"] = a.block.value(1) > a.pw.window.x && a.block.value(a.block.N) <= a.pw.window.end();
    bool nonneg = true;
    for (double v : f) nonneg = nonneg && v >= 0.0;
    checks["weights_nonnegative"] = nonneg;
    return {to_text(document(c, r, checks))};
}

json moment_json(const MomentResult& m) {
    json j;
    j["mean"] = m.mean;
    j["exact"] = m.exact;
    j["samples"] = m.samples;
    j["std_error"] = m.std_error;
    j["seed"] = m.seed;
    j["r_max"] = m.r_max;
    return j;
}

Output run_majorant(const json& c) {
    const Aligned a = aligned_block(c, 1);
    MajorantTable table = has(c, "R") ? divisor_sum_table_at_level(a.block, get_real(c, "R"))
                                      : divisor_sum_table(a.block, get_real(c, "eta"));
    nu_weights(table, false);
    const auto f = prime_weights(a.block, a.pw, table.R, WeightVariant::truncated_prime);
    const auto rep = majorization_check(f, table);
    MomentOptions mo;
    mo.box_fraction = get_real(c, "box-fraction");
    mo.force_exact = get_flag(c, "force-exact");
    mo.samples = get_u64(c, "samples");
    mo.seed = get_u64(c, "seed");
    const unsigned k = get_small(c, "k");
    if (k < 2) throw input_error("--k must be >= 2");
    const std::vector<u64> pair{0, 1};
    std::vector<u64> ap(k);
    for (unsigned i = 0; i < k; ++i) ap[i] = i;
    const auto two = moment_diagnostic(table, pair, 2, mo);
    const auto kpt = moment_diagnostic(table, ap, k, mo);

    json r;
    r["window"] = window_json(a.pw.window);
    r["modulus"] = modulus_json(a.mod);
    r["block"] = block_json(a.block);
    r["R"] = table.R;
    r["log_R"] = table.log_R;
    const double mean_nu = mean(table.nu);
    r["nu_mean"] = mean_nu;
    r["c0"] = 1.0 / mean_nu;
    r["lambdaR_max"] = *std::max_element(table.lambdaR.begin(), table.lambdaR.end());
    r["majorization"] = {{"holds", rep.holds},
                         {"violations", rep.violations},
                         {"first_violation", rep.first_violation},
                         {"worst_index", rep.worst_index},
                         {"worst_ratio", rep.worst_ratio}};
    r["two_point_moment"] = moment_json(two);
    r["k_point_moment"] = moment_json(kpt);
    json checks;
    checks["majorization"] = rep.holds;
    checks["nu_nonnegative"] = *std::min_element(table.nu.begin(), table.nu.end()) >= 0.0;
    return {to_text(document(c, r, checks))};
}

Output run_apcount_cmd(const json& c) {
    const Aligned a = aligned_block(c, 1);
    const double R = level(c, a.block);
    const unsigned k = get_small(c, "k");
    const auto rep = run_apcount(a.pw, a.block, k, R, get_real(c, "C-k"), get_real(c, "c-k"));
    const auto& L = rep.ledger;
    json r;
    r["window"] = window_json(a.pw.window);
    r["modulus"] = modulus_json(a.mod);
    r["block"] = block_json(a.block);
    r["R"] = R;
    r["S"] = rep.weighted.S;
    r["r_max"] = rep.weighted.r_max;
    r["prime_aps_box"] = rep.count_prime_aps_box;
    r["prime_aps_all"] = rep.count_prime_aps_all;
    r["prime_power_pairs"] = rep.count_prime_power_pairs;
    r["exclusions"] = {{"count", rep.exclusions.count},
                       {"proper_powers", rep.exclusions.proper_powers},
                       {"containment_bound", rep.exclusions.containment_bound}};
    r["cap_factor"] = rep.cap_factor;
    r["weight_cap"] = {{"holds", rep.weight_cap.holds}, {"max_product", rep.weight_cap.max_product}};
    r["ledger"] = {{"supper_rhs", L.supper_rhs},
                   {"exact_lower", L.exact_lower},
                   {"exclusion_term", L.exclusion_term},
                   {"asymptotic_lower", L.asymptotic_lower},
                   {"rsz_rhs", L.rsz_rhs},
                   {"headline_scale", L.headline_scale},
                   {"benchmark_scale", L.benchmark_scale},
                   {"headline_ratio", L.headline_ratio},
                   {"benchmark_ratio", L.benchmark_ratio},
                   {"asymptotic_chain_holds", L.asymptotic_chain_holds},
                   {"exclusion_bound_holds", L.exclusion_bound_holds},
                   {"rsz_observed", L.rsz_observed}};
    json checks;
    checks["supper"] = L.supper_holds;
    checks["partition"] = L.partition_holds;
    checks["exact_chain"] = L.exact_chain_holds;
    checks["containment"] = rep.exclusions.within_bound;
    checks["weight_cap"] = rep.weight_cap.holds;
    Output out{to_text(document(c, r, checks))};
    if (!L.unconditional_ok()) throw invariant_violation("conversion ledger failed an unconditional check");
    return out;
}

Output run_tuple(const json& c) {
    const u64 q = get_u64(c, "q");
    const auto greedy = greedy_survivors(get_u64(c, "span"), get_u64(c, "y"), q);
    const auto tuple = build_tuple(greedy, get_small(c, "k"), get_u64(c, "a"));
    const double w_cut = has(c, "w-cut") ? get_real(c, "w-cut") : static_cast<double>(greedy.y);
    const auto mod = build_modulus(w_cut, q);
    const u64 nu = crt_residue(tuple, mod);
    json r;
    json residues = json::array();
    for (const auto& [p, a] : greedy.residues) residues.push_back({{"p", p}, {"r", a}});
    r["greedy"] = {{"survivors", greedy.survivors.size()},
                   {"pi_y", greedy.pi_y},
                   {"lower_bound", rational(greedy.lower_bound)},
                   {"lower_bound_value", to_double(greedy.lower_bound)},
                   {"residues", residues}};
    r["tuple"] = {{"q", tuple.q}, {"a", tuple.a}, {"span_L", tuple.span_L}, {"k", tuple.k}, {"shifts", tuple.shifts}};
    r["modulus"] = modulus_json(mod);
    r["crt_residue"] = nu;
    json checks;
    checks["greedy_bound"] = greedy.bound_holds;
    checks["certificate"] = tuple.certified;
    checks["direct_admissibility"] = tuple.admissible;
    return {to_text(document(c, r, checks))};
}

Output run_maynard(const json& c) {
    const unsigned k = get_small(c, "k");
    const auto opt = optimize_F(k, get_small(c, "degree"));
    const auto integrals = sieve_integrals(opt.F.polynomial());
    json r;
    r["M"] = rational(opt.M);
    r["M_value"] = to_double(opt.M);
    r["eigenvalue"] = opt.eigenvalue;
    r["crosscheck"] = opt.crosscheck;
    r["iterations"] = opt.iterations;
    r["rank"] = opt.rank;
    r["dropped"] = opt.dropped;
    json names = json::array(), coeffs = json::array();
    for (const auto& b : opt.basis) names.push_back(b.name);
    for (const auto& v : opt.coefficients) coeffs.push_back(rational(v));
    r["basis"] = names;
    r["coefficients"] = coeffs;
    r["single_element"] = opt.single_element;
    r["best_single"] = rational(opt.best_single);
    r["F"] = opt.F.polynomial().to_string();
    r["I"] = rational(integrals.I);
    r["J"] = rational(integrals.J.front());
    json checks;
    checks["dominates_basis"] = opt.M >= opt.best_single;
    checks["integrals_agree"] = integrals.M == opt.M;
    checks["eigensolvers_agree"] =
        std::abs(opt.eigenvalue - opt.crosscheck) <= 1e-9 * std::max(1.0, std::abs(opt.crosscheck));
    const u64 res = get_u64(c, "nonneg-resolution");
    if (res > 0) checks["nonnegative_on_simplex"] = nonnegative_on_simplex(opt.F, static_cast<unsigned>(res));
    return {to_text(document(c, r, checks))};
}

u64 real_to_u64(double v, const char* name) {
    if (!(v >= 0.0) || v > 1.8e19 || v != std::floor(v)) {
        throw input_error(std::string("--") + name + " must be a nonnegative integer");
    }
    return static_cast<u64>(v);
}

Output run_cluster(const json& c) {
    const u64 lo = real_to_u64(get_real(c, "X-lo"), "X-lo");
    const u64 hi = real_to_u64(get_real(c, "X-hi"), "X-hi");
    const u64 q = get_u64(c, "q");
    const auto tuple = tuple_from_shifts(get_list(c, "shifts"), q, get_u64(c, "a"));
    const auto mod = build_modulus(get_real(c, "w-cut"), q);
    const u64 nu = crt_residue(tuple, mod);
    const double R = has(c, "R") ? get_real(c, "R") : std::max(2.0, std::pow(static_cast<double>(lo), 0.25));
    const std::string which = need(c, "F").get<std::string>();
    const unsigned k = tuple.k;
    SieveF F;
    json m_of_F = nullptr;
    if (which == "opt") {
        const auto o = optimize_F(k, get_small(c, "degree"));
        F = o.F;
        m_of_F = to_double(o.M);
    } else if (which == "one") {
        F = SieveF(Polynomial::constant(k, 1), "1");
        m_of_F = to_double(sieve_integrals(F.polynomial()).M);
    } else if (which == "zero") {
        F = SieveF(Polynomial(k), "0");
    } else {
        throw input_error("--F must be opt, one or zero");
    }
    const auto cl = cluster_search(lo, hi, tuple, mod, nu, F, R);
    const auto sums = sieve_sums(lo, hi, mod, nu, tuple, F, R);
    json r;
    r["tuple"] = {{"shifts", tuple.shifts}, {"q", tuple.q}, {"a", tuple.a}, {"admissible", tuple.admissible}};
    r["modulus"] = modulus_json(mod);
    r["crt_residue"] = nu;
    r["R"] = R;
    r["F"] = F.polynomial().to_string();
    r["M_of_F"] = m_of_F;
    r["cluster"] = {{"best_n", cl.best_n},
                    {"best_hits", cl.best_hits},
                    {"primes", cl.best_primes},
                    {"histogram", cl.histogram},
                    {"weighted_hits", nan_or(cl.weighted_hits)},
                    {"weighted_defined", cl.weighted_defined},
                    {"scanned", cl.scanned}};
    r["sums"] = {{"S1", sums.S1},
                 {"S2", sums.S2},
                 {"S2prime", sums.S2prime},
                 {"ratio", nan_or(sums.ratio)},
                 {"ratio_defined", sums.ratio_defined},
                 {"terms", sums.terms},
                 {"max_theta_sum", sums.max_theta_sum}};
    json checks;
    checks["primes_verified"] = cl.verified;
    checks["ratio_bounded"] = !sums.ratio_defined || sums.ratio <= sums.max_theta_sum / sums.log_R * (1 + 1e-12);
    return {to_text(document(c, r, checks))};
}

Output run_bdh(const json& c) {
    const PrimeWindow pw = window_from(c);
    const u64 Q = get_u64(c, "Q");
    const auto rep = bdh_variance(pw, Q, get_real(c, "A"));
    const auto dec = psi_pp_decomposition(pw, Q);
    json r;
    r["window"] = window_json(pw.window);
    r["Q"] = Q;
    r["S_total"] = rep.S_total;
    r["S_star"] = rep.S_star;
    r["S_zero"] = rep.S_zero;
    r["S_psi"] = rep.S_psi;
    r["S_pp"] = rep.S_pp;
    r["zero_closed_form"] = rep.zero_closed_form;
    r["log_X"] = nan_or(rep.log_X);
    r["log_X_source"] = "window x";
    r["ratio_HX"] = nan_or(rep.ratio_HX);
    r["ratio_HXlogX"] = nan_or(rep.ratio_HXlogX);
    r["ratio_A"] = nan_or(rep.ratio_A);
    r["identity_classes_checked"] = dec.classes_checked;
    if (get_flag(c, "per-q")) r["per_q"] = rep.per_q;
    json checks;
    checks["split"] = rep.split_holds;
    checks["inequality"] = rep.inequality_holds;
    checks["psi_pp_identity"] = dec.identity_holds;
    if (rep.zero_closed_form_applies) {
        checks["zero_closed_form"] =
            std::abs(rep.S_zero - rep.zero_closed_form) <= 1e-9 * std::max(1.0, rep.zero_closed_form);
    }
    if (get_flag(c, "offdiag")) {
        const auto od = offdiag_divisor_count(pw, Q);
        r["offdiag"] = {{"offdiag", od.offdiag}, {"diagonal", od.diagonal}, {"S_pp_all_classes", od.S_pp_all}};
        checks["offdiag_identity"] = od.identity_holds;
    }
    return {to_text(document(c, r, checks))};
}

Output run_empty(const json& c) {
    const PrimeWindow pw = window_from(c);
    std::optional<CongruenceSubclass> sub;
    if (has(c, "m") || has(c, "residues")) sub = CongruenceSubclass{get_u64(c, "m"), get_list(c, "residues")};
    const auto rep = empty_class_bound(pw, get_u64(c, "Q"), get_real(c, "delta"), sub);
    json r;
    r["window"] = window_json(pw.window);
    r["delta"] = rep.delta;
    r["restricted_primes"] = rep.restricted_primes;
    r["lower_bound"] = rep.lower_bound;
    json w = json::array();
    for (const auto& e : rep.witnesses) w.push_back({{"q", e.q}, {"a", e.a}});
    r["witnesses"] = w;
    r["mertens_sum"] = rep.mertens_sum;
    r["mertens_reference"] = rep.mertens_reference;
    json checks;
    checks["witnesses_verified"] = rep.all_verified;
    return {to_text(document(c, r, checks))};
}

Output run_scan(const json& c) {
    const auto t = variance_scan(get_u64(c, "X"), get_real(c, "theta"), get_real(c, "B"), get_real(c, "A"),
                                 get_u64(c, "samples"), get_u64(c, "seed"));
    const std::string format = need(c, "format").get<std::string>();
    if (format == "json") {
        json rows = json::array();
        for (const auto& row : t.rows) {
            rows.push_back({{"x", row.x}, {"H", row.H}, {"S", row.S}, {"ratio", row.ratio}});
        }
        json r;
        r["Q"] = t.Q;
        r["rows"] = rows;
        r["max_ratio"] = t.max_ratio;
        r["mean_ratio"] = t.mean_ratio;
        return {to_text(document(c, r, json::object()))};
    }
    if (format != "csv") throw input_error("--format must be csv or json");
    json head;
    head["tool"] = "aplab";
    head["version"] = APLAB_VERSION;
    head["seed"] = seed_of(c);
    head["config"] = c;
    std::ostringstream os;
    os << "# " << head.dump() << "\n";
    os << "# Q=" << t.Q << " max_ratio=" << format_double(t.max_ratio) << " mean_ratio=" << format_double(t.mean_ratio)
       << "\n";
    os << "x,H,Q,S,ratio\n";
    for (const auto& row : t.rows) {
        os << row.x << "," << row.H << "," << t.Q << "," << format_double(row.S) << "," << format_double(row.ratio)
           << "\n";
    }
    Output out{os.str()};
    return out;
}

Output run_verify_cmd(const json& c) {
    const VerifyRun v = run_verify(need(c, "only").get<std::string>(), get_flag(c, "corrupt-lambda"));
    json doc = document(c, v.results, v.summary);
    Output out{to_text(doc), v.matrix};
    if (!v.failures.empty()) {
        out.exit_code = 3;
        for (const auto& f : v.failures) out.failure += "FAILED " + f + "\n";
    }
    return out;
}

} // namespace

Output execute(const json& config) {
    if (!config.is_object() || !config.contains("subcommand")) throw input_error("config lacks a subcommand");
    const std::string sub = config["subcommand"].get<std::string>();
    if (sub == "sieve") return run_sieve(config);
    if (sub == "wtrick") return run_wtrick(config);
    if (sub == "majorant") return run_majorant(config);
    if (sub == "apcount") return run_apcount_cmd(config);
    if (sub == "tuple") return run_tuple(config);
    if (sub == "maynard-opt") return run_maynard(config);
    if (sub == "cluster") return run_cluster(config);
    if (sub == "bdh") return run_bdh(config);
    if (sub == "empty-class") return run_empty(config);
    if (sub == "scan") return run_scan(config);
    if (sub == "verify") return run_verify_cmd(config);
    throw input_error("unknown subcommand " + sub);
}

json config_from_artifact(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text[0] == '#') {
        const auto end = text.find('\n');
        body = text.substr(2, end == std::string::npos ? std::string::npos : end - 2);
    }
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("artifact is not valid JSON: ") + e.what());
    }
    if (!doc.contains("config")) throw input_error("artifact has no config block");
    return doc["config"];
}

} // namespace aplab::cli
