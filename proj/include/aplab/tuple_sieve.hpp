#pragma once

#include "aplab/numeric.hpp"
#include "aplab/polynomial.hpp"
#include "aplab/wtrick.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace aplab {

struct GreedyResult {
    u64 span = 0;
    u64 y = 0;
    u64 q = 1;
    std::vector<u64> survivors;  // increasing, inside [1, span]
    std::map<u64, u64> residues; // p -> r_p, the deleted class
    u64 pi_y = 0;
    Rational lower_bound;        // span * prod (1 - 1/p) - pi(y)
    bool bound_holds = false;
};

/// Greedy residue pass: for each prime p <= y with p not dividing q, delete
/// the class mod p holding the fewest survivors (ties to the smallest class).
GreedyResult greedy_survivors(u64 span, u64 y, u64 q);

struct AdmissibleTuple {
    u64 q = 1;
    u64 a = 0;
    u64 span_L = 0;
    unsigned k = 0;
    u64 y = 0;
    std::vector<u64> shifts; // increasing
    std::map<u64, u64> greedy_residues;
    bool certified = false;  // the three-case argument went through
    bool admissible = false; // direct check over p <= k
};

/// Direct check: for every prime p <= shifts.size() some class mod p is missed.
bool is_admissible(std::span<const u64> shifts);

/// First k survivors b_i, shifts h_i = q b_i. Needs y >= k so the certificate
/// covers every prime up to k.
AdmissibleTuple build_tuple(const GreedyResult& greedy, unsigned k, u64 a);

/// Tuple from explicit shifts; admissibility is recorded, not enforced.
AdmissibleTuple tuple_from_shifts(std::vector<u64> shifts, u64 q = 1, u64 a = 0);

/// nu mod W with nu = a (mod q) and gcd(nu + h_i, W) = 1 for every shift.
u64 crt_residue(const AdmissibleTuple& tuple, const WModulus& mod);

/// Symmetric polynomial F on the simplex, zero outside it.
class SieveF {
public:
    SieveF() = default;
    SieveF(Polynomial poly, std::string basis = {});

    unsigned k() const noexcept { return poly_.vars(); }
    const Polynomial& polynomial() const noexcept { return poly_; }
    const std::string& basis() const noexcept { return basis_; }
    bool is_zero() const noexcept { return poly_.is_zero(); }

    /// F(t), 0 when some t_i < 0 or sum t_i > 1.
    double operator()(std::span<const double> t) const;

    /// Polynomial value with no support test.
    double raw(std::span<const double> t) const;

private:
    Polynomial poly_;
    std::string basis_;
    std::vector<std::pair<Exponents, double>> terms_;
};

/// min of F over the lattice {t_i = j_i / resolution, sum j_i <= resolution} >= 0.
bool nonnegative_on_simplex(const SieveF& F, unsigned resolution);

struct BasisElement {
    Polynomial poly;
    std::string name; // e.g. "e1^2*e2"
};

/// Products of elementary symmetric polynomials of total degree <= max_degree.
std::vector<BasisElement> symmetric_basis(unsigned k, unsigned max_degree);

struct SieveIntegrals {
    Rational I;
    std::vector<Rational> J; // J_{k,1..k}
    Rational M;
};

SieveIntegrals sieve_integrals(const Polynomial& F);

struct OptimizeResult {
    SieveF F;
    std::vector<BasisElement> basis; // after rank reduction
    std::vector<Rational> coefficients;
    Rational M;                      // exact M_k of the returned F
    double eigenvalue = 0.0;         // from shifted inverse iteration
    double crosscheck = 0.0;         // dense generalized eigensolver
    unsigned iterations = 0;
    std::size_t rank = 0;
    std::size_t dropped = 0;
    bool single_element = false;     // a lone basis element beat the eigenvector
    Rational best_single;
};

OptimizeResult optimize_F(unsigned k, unsigned max_degree);

OptimizeResult optimize_F(unsigned k, const std::vector<BasisElement>& basis);

/// mu(d_1)...mu(d_k) F(log d_i / log R) on the support, else 0.
double maynard_lambda(std::span<const u64> d, const SieveF& F, double R, u64 W);

struct OmegaOptions {
    u64 max_R = 10000000; // trial-division prime table limit
};

/// Precomputed state for evaluating omega(n) many times.
class OmegaEvaluator {
public:
    OmegaEvaluator(const AdmissibleTuple& tuple, const SieveF& F, double R, u64 W, const OmegaOptions& options = {});

    /// (sum over d_i | n + h_i of lambda_d)^2
    double operator()(u64 n) const;

    double log_R() const noexcept { return log_R_; }

private:
    struct Divisor {
        u64 d;
        int mu;
        double t; // log d / log R
    };
    void divisors_of(u64 m, std::vector<Divisor>& out) const;
    double accumulate(const std::vector<std::vector<Divisor>>& lists, std::size_t i, u64 prod,
                      std::vector<double>& t, int sign) const;

    std::vector<u64> shifts_;
    SieveF F_;
    u64 R_floor_ = 1;
    double log_R_ = 0.0;
    u64 W_ = 1;
    std::vector<u64> primes_; // primes <= R not dividing W
};

double omega_weight(u64 n, const AdmissibleTuple& tuple, const SieveF& F, double R, u64 W);

struct SieveSums {
    double S1 = 0.0;
    double S2 = 0.0;
    double S2prime = 0.0;
    double ratio = 0.0; // S2' / (S1 log R); NaN when undefined
    bool ratio_defined = false;
    u64 terms = 0;
    double log_R = 0.0;
    double max_theta_sum = 0.0; // max over n with omega > 0 of sum_i theta(n + h_i)
};

/// Sums over n in (X_lo, X_hi] with n = crt (mod W).
SieveSums sieve_sums(u64 X_lo, u64 X_hi, const WModulus& mod, u64 crt, const AdmissibleTuple& tuple, const SieveF& F,
                     double R);

struct ClusterResult {
    u64 best_n = 0;
    unsigned best_hits = 0;
    std::vector<u64> best_primes;
    std::vector<u64> histogram; // histogram[h] = #{n with h prime hits}
    double weighted_hits = 0.0; // sum omega * hits / sum omega
    bool weighted_defined = false;
    bool verified = false;
    u64 scanned = 0;
};

ClusterResult cluster_search(u64 X_lo, u64 X_hi, const AdmissibleTuple& tuple, const WModulus& mod, u64 crt,
                             const SieveF& F, double R);

} // namespace aplab
