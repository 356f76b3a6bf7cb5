#include "aplab/tuple_sieve.hpp"

#include "aplab/errors.hpp"
#include "aplab/sieve_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace aplab {

namespace {

int moebius_of(u64 n) {
    int mu = 1;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

std::string to_str(u64 v) { return std::to_string(v); }

// First n > lo with n = residue (mod W), or 0 if it exceeds hi.
u64 first_in_progression(u64 lo, u64 hi, u64 residue, u64 W) {
    const u64 start = lo + 1;
    const u64 n = start + ((residue % W) + W - start % W) % W;
    return n > hi ? 0 : n;
}

} // namespace

GreedyResult greedy_survivors(u64 span, u64 y, u64 q) {
    if (span < 1) throw input_error("survivor span must be >= 1");
    if (y < 2) throw input_error("y must be >= 2");
    if (q < 1) throw input_error("q must be >= 1");
    GreedyResult r;
    r.span = span;
    r.y = y;
    r.q = q;
    r.survivors.resize(span);
    std::iota(r.survivors.begin(), r.survivors.end(), u64{1});
    const auto primes = primes_up_to(y);
    r.pi_y = primes.size();
    Rational bound = Rational(mpz_class(std::to_string(span)));
    std::vector<u64> count;
    for (u64 p : primes) {
        if (q % p == 0) continue;
        count.assign(p, 0);
        for (u64 s : r.survivors) ++count[s % p];
        const u64 a = static_cast<u64>(std::min_element(count.begin(), count.end()) - count.begin());
        r.residues[p] = a;
        std::erase_if(r.survivors, [&](u64 s) { return s % p == a; });
        bound *= Rational(mpz_class(to_str(p - 1)), mpz_class(to_str(p)));
    }
    bound -= Rational(mpz_class(to_str(r.pi_y)));
    bound.canonicalize();
    r.lower_bound = bound;
    r.bound_holds = Rational(mpz_class(to_str(r.survivors.size()))) >= bound;
    if (!r.bound_holds) throw invariant_violation("greedy pass fell below its guaranteed survivor count");
    return r;
}

bool is_admissible(std::span<const u64> shifts) {
    std::vector<bool> seen;
    for (u64 p : primes_up_to(shifts.size())) {
        seen.assign(p, false);
        u64 covered = 0;
        for (u64 h : shifts) {
            if (!seen[h % p]) {
                seen[h % p] = true;
                ++covered;
            }
        }
        if (covered == p) return false;
    }
    return true;
}

AdmissibleTuple build_tuple(const GreedyResult& greedy, unsigned k, u64 a) {
    const u64 q = greedy.q;
    if (k < 1) throw input_error("tuple length k must be >= 1");
    if (gcd(a % q, q) != 1) throw input_error("a must be coprime to q");
    for (u64 p : primes_up_to(k)) {
        if (p > greedy.y && q % p != 0) {
            throw input_error("y = " + to_str(greedy.y) + " leaves the prime " + to_str(p) + " <= k uncovered");
        }
    }
    if (greedy.survivors.size() < k) {
        throw degenerate_error("only " + to_str(greedy.survivors.size()) + " survivors, need k = " + std::to_string(k));
    }
    AdmissibleTuple t;
    t.q = q;
    t.a = a % q;
    t.k = k;
    t.y = greedy.y;
    t.greedy_residues = greedy.residues;
    if (__builtin_mul_overflow(q, greedy.span, &t.span_L)) throw input_error("q * span overflows");
    for (unsigned i = 0; i < k; ++i) t.shifts.push_back(q * greedy.survivors[i]);

    // p | q: every h_i is 0 mod p. p <= y: h_i avoids q r_p. p > y: p > k.
    bool certified = true;
    for (u64 p : primes_up_to(std::max<u64>(k, greedy.y))) {
        if (q % p == 0) {
            for (u64 h : t.shifts) certified = certified && h % p == 0;
        } else if (p <= greedy.y) {
            const u64 avoid = mul_mod(q, greedy.residues.at(p), p);
            for (u64 h : t.shifts) certified = certified && h % p != avoid;
        } else {
            certified = certified && p > k;
        }
    }
    t.certified = certified;
    t.admissible = is_admissible(t.shifts);
    if (!t.certified || !t.admissible) {
        throw invariant_violation("greedy tuple failed its admissibility certificate");
    }
    return t;
}

AdmissibleTuple tuple_from_shifts(std::vector<u64> shifts, u64 q, u64 a) {
    if (shifts.empty()) throw input_error("tuple needs at least one shift");
    if (q < 1) throw input_error("q must be >= 1");
    if (gcd(a % q, q) != 1) throw input_error("a must be coprime to q");
    for (std::size_t i = 1; i < shifts.size(); ++i) {
        if (shifts[i] <= shifts[i - 1]) throw input_error("shifts must be strictly increasing");
    }
    for (u64 h : shifts) {
        if (h % q != 0) throw input_error("shift " + to_str(h) + " is not divisible by q");
    }
    AdmissibleTuple t;
    t.q = q;
    t.a = a % q;
    t.k = static_cast<unsigned>(shifts.size());
    t.span_L = shifts.back();
    t.shifts = std::move(shifts);
    t.admissible = is_admissible(t.shifts);
    return t;
}

u64 crt_residue(const AdmissibleTuple& tuple, const WModulus& mod) {
    const u64 W = mod.W;
    const u64 q = tuple.q;
    if (W % q != 0) throw input_error("q must divide W");
    if (gcd(tuple.a % q, q) != 1) throw input_error("a must be coprime to q");
    const auto primes = distinct_prime_factors(W);

    u64 nu = 0, M = 1;
    for (u64 p : primes) {
        u64 m = 1, rest = W;
        while (rest % p == 0) {
            rest /= p;
            m *= p;
        }
        u64 r = 0;
        if (q % p == 0) {
            u64 pq = 1;
            for (u64 s = q; s % p == 0; s /= p) pq *= p;
            r = tuple.a % pq;
        } else {
            m = p;
            bool found = false;
            for (u64 c = 0; c < p && !found; ++c) {
                bool ok = true;
                for (u64 h : tuple.shifts) ok = ok && (c + h % p) % p != 0;
                if (ok) {
                    r = c;
                    found = true;
                }
            }
            if (!found) throw invariant_violation("shifts cover every class mod " + to_str(p));
        }
        // nu' = nu (mod M), nu' = r (mod m)
        const u64 diff = (r % m + m - nu % m) % m;
        const u64 step = mul_mod(diff, mod_inverse(M % m, m), m);
        nu += M * step;
        M *= m;
    }
    nu %= W;
    if (nu % q != tuple.a % q) throw invariant_violation("CRT residue lost the class a mod q");
    for (u64 h : tuple.shifts) {
        if (gcd((nu + h % W) % W, W) != 1) throw invariant_violation("CRT residue shares a factor with W");
    }
    return nu;
}

SieveF::SieveF(Polynomial poly, std::string basis) : poly_(std::move(poly)), basis_(std::move(basis)) {
    for (const auto& [e, c] : poly_.terms()) terms_.emplace_back(e, to_double(c));
}

double SieveF::raw(std::span<const double> t) const {
    if (t.size() != poly_.vars()) throw input_error("F evaluated at a point of the wrong dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (unsigned j = 0; j < e[i]; ++j) m *= t[i];
        }
        acc += m;
    }
    return acc;
}

double SieveF::operator()(std::span<const double> t) const {
    double s = 0.0;
    for (double v : t) {
        if (v < 0.0) return 0.0;
        s += v;
    }
    if (s > 1.0) return 0.0;
    return raw(t);
}

bool nonnegative_on_simplex(const SieveF& F, unsigned resolution) {
    if (resolution == 0) throw input_error("resolution must be >= 1");
    const unsigned k = F.k();
    std::vector<unsigned> j(k, 0);
    std::vector<double> t(k, 0.0);
    // Odometer over compositions with sum <= resolution.
    while (true) {
        if (F.raw(t) < -1e-12) return false;
        unsigned used = std::accumulate(j.begin(), j.end(), 0u);
        std::size_t i = 0;
        while (i < k) {
            if (used < resolution) {
                ++j[i];
                t[i] = static_cast<double>(j[i]) / resolution;
                break;
            }
            used -= j[i];
            j[i] = 0;
            t[i] = 0.0;
            ++i;
        }
        if (i == k) return true;
    }
}

std::vector<BasisElement> symmetric_basis(unsigned k, unsigned max_degree) {
    if (k < 1) throw input_error("k must be >= 1");
    const auto e = elementary_symmetric(k);
    const unsigned top = std::min(k, max_degree);
    std::vector<BasisElement> out;
    std::vector<unsigned> power(top + 1, 0);
    // Exponent vectors (a_1..a_top) with sum j a_j <= max_degree, a_1 varying fastest.
    auto emit = [&] {
        Polynomial p = Polynomial::constant(k, 1);
        std::string name;
        for (unsigned j = 1; j <= top; ++j) {
            if (power[j] == 0) continue;
            p = p * e[j].pow(power[j]);
            if (!name.empty()) name += "*";
            name += "e" + std::to_string(j);
            if (power[j] > 1) name += "^" + std::to_string(power[j]);
        }
        out.push_back({std::move(p), name.empty() ? "1" : name});
    };
    while (true) {
        emit();
        unsigned j = 1;
        for (; j <= top; ++j) {
            ++power[j];
            unsigned deg = 0;
            for (unsigned i = 1; i <= top; ++i) deg += i * power[i];
            if (deg <= max_degree) break;
            power[j] = 0;
        }
        if (j > top) break;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const BasisElement& a, const BasisElement& b) { return a.poly.degree() < b.poly.degree(); });
    return out;
}

namespace {

Rational l2_product(const Polynomial& a, const Polynomial& b, bool symmetric) {
    return symmetric ? integrate_product_symmetric(a, b) : integrate_product(a, b);
}

} // namespace

SieveIntegrals sieve_integrals(const Polynomial& F) {
    const unsigned k = F.vars();
    if (k < 1) throw input_error("F needs at least one variable");
    if (F.is_zero()) throw degenerate_error("I_k(F) = 0: F vanishes identically");
    const bool sym = F.is_symmetric();
    SieveIntegrals out;
    out.I = l2_product(F, F, sym);
    if (out.I == 0) throw degenerate_error("I_k(F) = 0");
    if (sym) {
        const Polynomial G = F.integrate_to_simplex_face(0);
        out.J.assign(k, l2_product(G, G, true));
    } else {
        for (unsigned i = 0; i < k; ++i) {
            const Polynomial G = F.integrate_to_simplex_face(i);
            out.J.push_back(integrate_product(G, G));
        }
    }
    Rational sum = 0;
    for (const auto& j : out.J) sum += j;
    out.M = sum / out.I;
    out.M.canonicalize();
    return out;
}

OptimizeResult optimize_F(unsigned k, unsigned max_degree) { return optimize_F(k, symmetric_basis(k, max_degree)); }

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Indices of a maximal linearly independent set of columns, by exact elimination.
std::vector<std::size_t> pivot_columns(Matrix m) {
    const std::size_t n = m.size();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t sel = row;
        while (sel < n && m[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(m[sel], m[row]);
        for (std::size_t r = row + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const Rational f = m[r][col] / m[row][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

Rational quadratic_form(const Matrix& m, const std::vector<Rational>& c, const std::vector<std::size_t>& idx) {
    Rational s = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) s += c[i] * c[j] * m[idx[i]][idx[j]];
    }
    return s;
}

bool positive_definite(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

} // namespace

OptimizeResult optimize_F(unsigned k, const std::vector<BasisElement>& basis) {
    if (basis.empty()) throw input_error("basis is empty");
    bool all_sym = true;
    for (const auto& b : basis) {
        if (b.poly.vars() != k) throw input_error("basis element " + b.name + " has the wrong variable count");
        if (b.poly.is_zero()) throw input_error("basis element " + b.name + " is zero");
        all_sym = all_sym && b.poly.is_symmetric();
    }
    const std::size_t n = basis.size();

    // Gram matrices of I and of sum_i J_{k,i}.
    Matrix G(n, std::vector<Rational>(n)), A(n, std::vector<Rational>(n));
    const unsigned faces = all_sym ? 1 : k;
    std::vector<std::vector<Polynomial>> face(faces);
    for (unsigned i = 0; i < faces; ++i) {
        for (const auto& b : basis) face[i].push_back(b.poly.integrate_to_simplex_face(i));
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            G[a][b] = G[b][a] = l2_product(basis[a].poly, basis[b].poly, all_sym);
            Rational s = 0;
            for (unsigned i = 0; i < faces; ++i) s += l2_product(face[i][a], face[i][b], all_sym);
            if (all_sym) s *= k;
            s.canonicalize();
            A[a][b] = A[b][a] = s;
        }
    }

    OptimizeResult out;
    std::size_t best_idx = 0;
    for (std::size_t a = 0; a < n; ++a) {
        Rational m = A[a][a] / G[a][a];
        if (a == 0 || m > out.best_single) {
            out.best_single = m;
            best_idx = a;
        }
    }

    const auto idx = pivot_columns(G);
    out.rank = idx.size();
    out.dropped = n - idx.size();
    for (auto i : idx) out.basis.push_back(basis[i]);
    const auto r = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd Gd(r, r), Ad(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < r; ++j) {
            Gd(i, j) = to_double(G[idx[i]][idx[j]]);
            Ad(i, j) = to_double(A[idx[i]][idx[j]]);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> chol(Gd);
    if (chol.info() != Eigen::Success) throw invariant_violation("reduced I-Gram matrix is not positive definite");

    // Bracket the top eigenvalue of A v = M G v: Rayleigh quotients from below,
    // trace(L^-1 A L^-T) from above (A is positive semidefinite).
    double lo = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) lo = std::max(lo, Ad(i, i) / Gd(i, i));
    Eigen::MatrixXd C = chol.matrixL().solve(Ad);
    C = chol.matrixL().solve(C.transpose()).transpose();
    double hi = std::max(C.trace(), lo) * (1.0 + 1e-9) + 1e-300;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (positive_definite(mid * Gd - Ad)) hi = mid;
        else lo = mid;
    }

    // Shifted inverse iteration just above the bracket.
    const double sigma = hi + 1e-10 * std::max(hi, 1.0);
    Eigen::LLT<Eigen::MatrixXd> shifted(sigma * Gd - Ad);
    if (shifted.info() != Eigen::Success) throw invariant_violation("shifted pencil lost definiteness");
    Eigen::VectorXd v = Eigen::VectorXd::Ones(r);
    v /= std::sqrt(v.dot(Gd * v));
    double rho = v.dot(Ad * v);
    for (unsigned it = 1; it <= 100; ++it) {
        Eigen::VectorXd y = shifted.solve(Gd * v);
        v = y / std::sqrt(y.dot(Gd * y));
        const double next = v.dot(Ad * v);
        out.iterations = it;
        const bool done = it >= 3 && std::abs(next - rho) <= 1e-14 * std::abs(next);
        rho = next;
        if (done) break;
    }
    out.eigenvalue = rho;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Ad, Gd);
    out.crosscheck = ges.eigenvalues().maxCoeff();

    // Rational coefficients on a 2^-40 grid, largest entry scaled to 1.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v /= v(arg);
    out.coefficients.resize(idx.size());
    const double scale = std::ldexp(1.0, 40);
    for (Eigen::Index i = 0; i < r; ++i) {
        const double snapped = std::abs(v(i)) < 1e-12 ? 0.0 : v(i);
        out.coefficients[i] = Rational(mpz_class(std::to_string(std::llround(snapped * scale))),
                                       mpz_class("1099511627776"));
        out.coefficients[i].canonicalize();
    }
    Rational M = quadratic_form(A, out.coefficients, idx) / quadratic_form(G, out.coefficients, idx);
    M.canonicalize();

    Polynomial F(k);
    std::string name;
    if (M >= out.best_single) {
        out.M = M;
        for (std::size_t i = 0; i < idx.size(); ++i) F += basis[idx[i]].poly * out.coefficients[i];
        name = "span{";
        for (std::size_t i = 0; i < idx.size(); ++i) name += (i ? "," : "") + basis[idx[i]].name;
        name += "}";
    } else {
        out.single_element = true;
        out.M = out.best_single;
        F = basis[best_idx].poly;
        name = basis[best_idx].name;
        out.coefficients.assign(idx.size(), Rational(0));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] == best_idx) out.coefficients[i] = 1;
        }
    }
    out.F = SieveF(std::move(F), name);
    return out;
}

double maynard_lambda(std::span<const u64> d, const SieveF& F, double R, u64 W) {
    if (!(R > 1.0) || !std::isfinite(R)) throw input_error("R must be > 1");
    if (d.size() != F.k()) throw input_error("d vector length differs from k");
    const u64 Rf = static_cast<u64>(std::floor(R));
    const double log_R = std::log(R);
    std::vector<double> t(d.size());
    u128 prod = 1;
    int sign = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const u64 di = d[i];
        if (di == 0) throw input_error("d_i must be >= 1");
        if (di > Rf || gcd(di, W) != 1) return 0.0;
        const int mu = moebius_of(di);
        if (mu == 0) return 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            if (gcd(d[j], di) != 1) return 0.0;
        }
        prod *= di;
        if (prod > Rf) return 0.0;
        sign *= mu;
        t[i] = std::log(static_cast<double>(di)) / log_R;
    }
    return sign * F.raw(t);
}

OmegaEvaluator::OmegaEvaluator(const AdmissibleTuple& tuple, const SieveF& F, double R, u64 W,
                               const OmegaOptions& options)
    : shifts_(tuple.shifts), F_(F), W_(W) {
    if (!(R > 1.0) || !std::isfinite(R)) throw input_error("R must be > 1");
    if (W < 1) throw input_error("W must be >= 1");
    if (!F.is_zero() && F.k() != shifts_.size()) throw input_error("F has " + std::to_string(F.k()) +
                                                                  " variables but the tuple has " +
                                                                  std::to_string(shifts_.size()) + " shifts");
    const double floor_R = std::floor(R);
    if (floor_R > static_cast<double>(options.max_R)) {
        throw resource_error("R = " + std::to_string(R) + " exceeds the trial-division budget");
    }
    R_floor_ = static_cast<u64>(floor_R);
    log_R_ = std::log(R);
    for (u64 p : primes_up_to(R_floor_)) {
        if (W % p != 0) primes_.push_back(p);
    }
}

void OmegaEvaluator::divisors_of(u64 m, std::vector<Divisor>& out) const {
    std::vector<u64> factors;
    u64 rest = m;
    for (u64 p : primes_) {
        if (static_cast<u128>(p) * p > rest) break;
        if (rest % p != 0) continue;
        factors.push_back(p);
        while (rest % p == 0) rest /= p;
    }
    if (rest > 1 && rest <= R_floor_ && W_ % rest != 0) factors.push_back(rest);
    out.clear();
    out.push_back({1, 1, 0.0});
    for (u64 p : factors) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            const u128 d = static_cast<u128>(out[i].d) * p;
            if (d > R_floor_) continue;
            out.push_back({static_cast<u64>(d), -out[i].mu, 0.0});
        }
    }
    std::sort(out.begin(), out.end(), [](const Divisor& a, const Divisor& b) { return a.d < b.d; });
    for (auto& dv : out) dv.t = std::log(static_cast<double>(dv.d)) / log_R_;
}

double OmegaEvaluator::accumulate(const std::vector<std::vector<Divisor>>& lists, std::size_t i, u64 prod,
                                  std::vector<double>& t, int sign) const {
    if (i == lists.size()) return sign * F_.raw(t);
    double s = 0.0;
    for (const Divisor& dv : lists[i]) {
        if (static_cast<u128>(prod) * dv.d > R_floor_) break;
        if (gcd(dv.d, prod) != 1) continue;
        t[i] = dv.t;
        s += accumulate(lists, i + 1, prod * dv.d, t, sign * dv.mu);
    }
    return s;
}

double OmegaEvaluator::operator()(u64 n) const {
    if (F_.is_zero()) return 0.0;
    std::vector<std::vector<Divisor>> lists(shifts_.size());
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
        u64 m;
        if (__builtin_add_overflow(n, shifts_[i], &m)) throw input_error("n + h_i overflows");
        if (m == 0) throw input_error("n + h_i must be positive");
        divisors_of(m, lists[i]);
    }
    std::vector<double> t(shifts_.size(), 0.0);
    const double s = accumulate(lists, 0, 1, t, 1);
    return s * s;
}

double omega_weight(u64 n, const AdmissibleTuple& tuple, const SieveF& F, double R, u64 W) {
    return OmegaEvaluator(tuple, F, R, W)(n);
}

namespace {

struct Scan {
    u64 first = 0;
    u64 count = 0;
    u64 W = 1;
    PrimeWindow pw;
};

Scan prepare_scan(u64 X_lo, u64 X_hi, const WModulus& mod, u64 crt, const AdmissibleTuple& tuple) {
    if (tuple.shifts.empty()) throw input_error("tuple has no shifts");
    if (X_hi <= X_lo) throw degenerate_error("empty range (X_lo, X_hi]");
    Scan s;
    s.W = mod.W;
    s.first = first_in_progression(X_lo, X_hi, crt, s.W);
    if (s.first == 0) throw degenerate_error("no n = crt (mod W) in (X_lo, X_hi]");
    s.count = (X_hi - s.first) / s.W + 1;
    u64 H;
    if (__builtin_add_overflow(X_hi - X_lo, tuple.shifts.back(), &H)) throw input_error("range overflows");
    s.pw = sieve_window(X_lo, H);
    return s;
}

constexpr u64 kChunk = 1024;

} // namespace

SieveSums sieve_sums(u64 X_lo, u64 X_hi, const WModulus& mod, u64 crt, const AdmissibleTuple& tuple, const SieveF& F,
                     double R) {
    const Scan scan = prepare_scan(X_lo, X_hi, mod, crt, tuple);
    const OmegaEvaluator omega(tuple, F, R, mod.W);
    const u64 chunks = (scan.count + kChunk - 1) / kChunk;
    struct Part {
        CompensatedSum s1, s2, s2p;
        double max_theta = 0.0;
    };
    std::vector<Part> parts(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernel_threads()) if (chunks > 1)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        Part& part = parts[c];
        const u64 lo = static_cast<u64>(c) * kChunk;
        const u64 hi = std::min(scan.count, lo + kChunk);
        for (u64 j = lo; j < hi; ++j) {
            const u64 n = scan.first + j * scan.W;
            const double w = omega(n);
            if (w == 0.0) continue;
            CompensatedSum lam, th;
            for (u64 h : tuple.shifts) {
                const u64 off = n + h - X_lo;
                lam.add(scan.pw.lambda_at(off));
                if (scan.pw.is_prime_offset(off)) th.add(std::log(static_cast<double>(n + h)));
            }
            part.s1.add(w);
            part.s2.add(w * lam.value());
            part.s2p.add(w * th.value());
            part.max_theta = std::max(part.max_theta, th.value());
        }
    }
    SieveSums out;
    CompensatedSum s1, s2, s2p;
    for (const Part& p : parts) {
        s1.add(p.s1.value());
        s2.add(p.s2.value());
        s2p.add(p.s2p.value());
        out.max_theta_sum = std::max(out.max_theta_sum, p.max_theta);
    }
    out.S1 = s1.value();
    out.S2 = s2.value();
    out.S2prime = s2p.value();
    out.terms = scan.count;
    out.log_R = omega.log_R();
    out.ratio_defined = out.S1 > 0.0;
    out.ratio = out.ratio_defined ? out.S2prime / (out.S1 * out.log_R) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

ClusterResult cluster_search(u64 X_lo, u64 X_hi, const AdmissibleTuple& tuple, const WModulus& mod, u64 crt,
                             const SieveF& F, double R) {
    const Scan scan = prepare_scan(X_lo, X_hi, mod, crt, tuple);
    const OmegaEvaluator omega(tuple, F, R, mod.W);
    const std::size_t k = tuple.shifts.size();
    const u64 chunks = (scan.count + kChunk - 1) / kChunk;
    struct Part {
        u64 best_n = 0;
        unsigned best_hits = 0;
        std::vector<u64> histogram;
        CompensatedSum weight, weighted_hits;
    };
    std::vector<Part> parts(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernel_threads()) if (chunks > 1)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        Part& part = parts[c];
        part.histogram.assign(k + 1, 0);
        const u64 lo = static_cast<u64>(c) * kChunk;
        const u64 hi = std::min(scan.count, lo + kChunk);
        for (u64 j = lo; j < hi; ++j) {
            const u64 n = scan.first + j * scan.W;
            unsigned hits = 0;
            for (u64 h : tuple.shifts) hits += scan.pw.is_prime_offset(n + h - X_lo) ? 1 : 0;
            ++part.histogram[hits];
            if (part.best_n == 0 || hits > part.best_hits) {
                part.best_n = n;
                part.best_hits = hits;
            }
            const double w = omega(n);
            if (w != 0.0) {
                part.weight.add(w);
                part.weighted_hits.add(w * hits);
            }
        }
    }
    ClusterResult out;
    out.histogram.assign(k + 1, 0);
    out.scanned = scan.count;
    CompensatedSum weight, weighted;
    for (const Part& p : parts) {
        if (out.best_n == 0 || p.best_hits > out.best_hits) {
            out.best_n = p.best_n;
            out.best_hits = p.best_hits;
        }
        for (std::size_t h = 0; h <= k; ++h) out.histogram[h] += p.histogram[h];
        weight.add(p.weight.value());
        weighted.add(p.weighted_hits.value());
    }
    out.weighted_defined = weight.value() > 0.0;
    out.weighted_hits = out.weighted_defined ? weighted.value() / weight.value()
                                             : std::numeric_limits<double>::quiet_NaN();

    bool ok = true;
    for (u64 h : tuple.shifts) {
        const u64 m = out.best_n + h;
        if (!scan.pw.is_prime_offset(m - X_lo)) continue;
        out.best_primes.push_back(m);
        ok = ok && is_prime_trial(m) && m % tuple.q == tuple.a % tuple.q && h <= tuple.span_L;
    }
    ok = ok && out.best_primes.size() == out.best_hits;
    out.verified = ok;
    if (!ok) throw invariant_violation("cluster primes failed verification");
    return out;
}

} // namespace aplab
