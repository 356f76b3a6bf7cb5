#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace aplab {

using Rational = mpq_class;
using Exponents = std::vector<std::uint8_t>;

/// Multivariate polynomial with exact rational coefficients in a fixed
/// number of variables. Terms are kept in a std::map so iteration order (and
/// every derived floating value) is deterministic.
class Polynomial {
public:
    explicit Polynomial(unsigned vars = 0) : vars_(vars) {}

    static Polynomial constant(unsigned vars, const Rational& c);
    static Polynomial variable(unsigned vars, unsigned index);

    unsigned vars() const noexcept { return vars_; }
    const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    unsigned degree() const noexcept;

    void add_term(const Exponents& e, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

    Polynomial pow(unsigned e) const;

    double evaluate(std::span<const double> t) const;

    /// Invariant under every permutation of the variables.
    bool is_symmetric() const;

    /// Integral of the polynomial in variable `index` from 0 to 1 - (sum of the
    /// other variables). The result lives in vars() - 1 variables, with
    /// `index` removed.
    Polynomial integrate_to_simplex_face(unsigned index) const;

    std::string to_string() const;

private:
    unsigned vars_;
    std::map<Exponents, Rational> terms_;
};

/// Integral of prod t_i^a_i over {t >= 0, sum t <= 1} in a.size() variables:
/// prod a_i! / (k + sum a_i)!.
Rational simplex_moment(const Exponents& a);

/// Integral of P over the standard simplex.
Rational integrate_simplex(const Polynomial& p);

/// Integral of P * Q over the simplex without forming the product.
Rational integrate_product(const Polynomial& p, const Polynomial& q);

/// Same value, requiring P and Q symmetric: sums over one exponent vector per
/// permutation orbit of P, weighted by orbit size.
Rational integrate_product_symmetric(const Polynomial& p, const Polynomial& q);

/// Elementary symmetric polynomials e_0..e_k in k variables.
std::vector<Polynomial> elementary_symmetric(unsigned k);

double to_double(const Rational& r);

} // namespace aplab
