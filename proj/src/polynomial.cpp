#include "aplab/polynomial.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace aplab {

namespace {

const mpz_class& factorial(unsigned n) {
    static const std::vector<mpz_class> table = [] {
        std::vector<mpz_class> f(256);
        f[0] = 1;
        for (unsigned i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    if (n >= table.size()) throw input_error("polynomial degree too large for the moment table");
    return table[n];
}

unsigned total_degree(const Exponents& e) {
    unsigned s = 0;
    for (auto v : e) s += v;
    return s;
}

mpz_class factorial_product(const Exponents& e) {
    mpz_class p = 1;
    for (auto v : e) {
        if (v > 1) p *= factorial(v);
    }
    return p;
}

mpz_class orbit_size(const Exponents& e) {
    std::map<std::uint8_t, unsigned> mult;
    for (auto v : e) ++mult[v];
    mpz_class size = factorial(static_cast<unsigned>(e.size()));
    for (const auto& [v, m] : mult) size /= factorial(m);
    return size;
}

bool is_canonical(const Exponents& e) { return std::is_sorted(e.begin(), e.end(), std::greater<>()); }

// Sum over P's terms (restricted by `keep`, weighted by `weight`) of
// p_a * q_b * moment(a + b), grouped by total degree to share (k + D)!.
template <class Keep, class Weight>
Rational integrate_pairs(const Polynomial& p, const Polynomial& q, Keep keep, Weight weight) {
    if (p.vars() != q.vars()) throw input_error("polynomials live in different variable counts");
    const unsigned k = p.vars();
    std::map<unsigned, Rational> by_degree;
    Exponents sum(k);
    for (const auto& [a, pa] : p.terms()) {
        if (!keep(a)) continue;
        const Rational pw = pa * weight(a);
        for (const auto& [b, qb] : q.terms()) {
            unsigned D = 0;
            for (unsigned i = 0; i < k; ++i) {
                sum[i] = static_cast<std::uint8_t>(a[i] + b[i]);
                D += sum[i];
            }
            Rational term = pw * qb;
            term *= factorial_product(sum);
            by_degree[D] += term;
        }
    }
    Rational total = 0;
    for (auto& [D, s] : by_degree) {
        s /= factorial(k + D);
        total += s;
    }
    total.canonicalize();
    return total;
}

} // namespace

Polynomial Polynomial::constant(unsigned vars, const Rational& c) {
    Polynomial p(vars);
    p.add_term(Exponents(vars, 0), c);
    return p;
}

Polynomial Polynomial::variable(unsigned vars, unsigned index) {
    if (index >= vars) throw input_error("variable index out of range");
    Polynomial p(vars);
    Exponents e(vars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

unsigned Polynomial::degree() const noexcept {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (e.size() != vars_) throw input_error("exponent vector has the wrong length");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.vars_ != vars_) throw input_error("polynomials live in different variable counts");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.vars_ != vars_) throw input_error("polynomials live in different variable counts");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.vars_ != b.vars_) throw input_error("polynomials live in different variable counts");
    Polynomial out(a.vars_);
    Exponents e(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (unsigned i = 0; i < a.vars_; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial out = constant(vars_, 1);
    for (unsigned i = 0; i < e; ++i) out = out * *this;
    return out;
}

double Polynomial::evaluate(std::span<const double> t) const {
    if (t.size() != vars_) throw input_error("evaluation point has the wrong dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = to_double(c);
        for (unsigned i = 0; i < vars_; ++i) {
            for (unsigned j = 0; j < e[i]; ++j) m *= t[i];
        }
        acc += m;
    }
    return acc;
}

bool Polynomial::is_symmetric() const {
    for (const auto& [e, c] : terms_) {
        for (unsigned i = 0; i + 1 < vars_; ++i) {
            if (e[i] == e[i + 1]) continue;
            Exponents s = e;
            std::swap(s[i], s[i + 1]);
            auto it = terms_.find(s);
            if (it == terms_.end() || it->second != c) return false;
        }
    }
    return true;
}

Polynomial Polynomial::integrate_to_simplex_face(unsigned index) const {
    if (index >= vars_) throw input_error("variable index out of range");
    const unsigned rest = vars_ - 1;
    Polynomial one_minus_s = constant(rest, 1);
    for (unsigned j = 0; j < rest; ++j) one_minus_s -= variable(rest, j);

    std::vector<Polynomial> powers{constant(rest, 1)};
    Polynomial out(rest);
    Exponents shifted(rest);
    for (const auto& [e, c] : terms_) {
        const unsigned a = e[index];
        while (powers.size() <= a + 1) powers.push_back(powers.back() * one_minus_s);
        const Rational scale = c / Rational(a + 1);
        for (const auto& [pe, pc] : powers[a + 1].terms()) {
            for (unsigned j = 0, src = 0; j < rest; ++j, ++src) {
                if (src == index) ++src;
                shifted[j] = static_cast<std::uint8_t>(pe[j] + e[src]);
            }
            out.add_term(shifted, scale * pc);
        }
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        const Rational mag = abs(c);
        bool wrote = false;
        if (mag != 1 || total_degree(e) == 0) {
            os << mag.get_str();
            wrote = true;
        }
        for (unsigned i = 0; i < vars_; ++i) {
            if (e[i] == 0) continue;
            os << (wrote ? "*" : "") << "t" << (i + 1);
            if (e[i] > 1) os << "^" << static_cast<unsigned>(e[i]);
            wrote = true;
        }
    }
    return os.str();
}

Rational simplex_moment(const Exponents& a) {
    Rational m(factorial_product(a), factorial(static_cast<unsigned>(a.size()) + total_degree(a)));
    m.canonicalize();
    return m;
}

Rational integrate_simplex(const Polynomial& p) {
    Rational total = 0;
    for (const auto& [e, c] : p.terms()) total += c * simplex_moment(e);
    total.canonicalize();
    return total;
}

Rational integrate_product(const Polynomial& p, const Polynomial& q) {
    return integrate_pairs(
        p, q, [](const Exponents&) { return true; }, [](const Exponents&) { return Rational(1); });
}

Rational integrate_product_symmetric(const Polynomial& p, const Polynomial& q) {
    return integrate_pairs(
        p, q, [](const Exponents& e) { return is_canonical(e); },
        [](const Exponents& e) { return Rational(orbit_size(e)); });
}

std::vector<Polynomial> elementary_symmetric(unsigned k) {
    std::vector<Polynomial> e(k + 1, Polynomial(k));
    e[0] = Polynomial::constant(k, 1);
    for (unsigned m = 0; m < k; ++m) {
        const Polynomial t = Polynomial::variable(k, m);
        for (unsigned j = m + 1; j >= 1; --j) e[j] += t * e[j - 1];
    }
    return e;
}

double to_double(const Rational& r) { return r.get_d(); }

} // namespace aplab
