#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <vector>

#include "waver/rational.hpp"

namespace waver {

// Ordered list of named formal variables shared by all polynomials of a ring.
// Variable 0 is the formal rank r whenever a ring has one; equivariant
// parameters (t1, t2) follow.
struct PolyRing {
    std::vector<std::string> vars;

    explicit PolyRing(std::vector<std::string> v = {}) : vars(std::move(v)) {}

    int index_of(const std::string &name) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return (int)i;
        return -1;
    }
    size_t size() const { return vars.size(); }
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

inline PolyRingPtr make_ring(std::vector<std::string> vars) {
    return std::make_shared<const PolyRing>(std::move(vars));
}

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are keyed by exponent vectors (always of length ring->size());
// zero coefficients are never stored.
class Poly {
  public:
    using Exp = std::vector<int32_t>;
    using Terms = std::map<Exp, Rat>;

    Poly() : ring_(trivial_ring()) {}
    explicit Poly(PolyRingPtr ring) : ring_(std::move(ring)) {}
    Poly(PolyRingPtr ring, const Rat &c) : ring_(std::move(ring)) {
        if (c != 0) terms_[Exp(ring_->size(), 0)] = c;
    }

    static Poly constant(PolyRingPtr ring, const Rat &c) { return Poly(std::move(ring), c); }
    static Poly variable(PolyRingPtr ring, int idx, int exp = 1) {
        Poly p(ring);
        Exp e(ring->size(), 0);
        e.at(idx) = exp;
        p.terms_[e] = 1;
        return p;
    }
    static Poly variable(PolyRingPtr ring, const std::string &name) {
        int i = ring->index_of(name);
        if (i < 0) throw std::runtime_error("unknown variable " + name);
        return variable(ring, i);
    }

    const PolyRingPtr &ring() const { return ring_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        const Exp &e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](int32_t x) { return x == 0; });
    }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        if (!is_constant()) throw std::runtime_error("poly is not constant");
        return terms_.begin()->second;
    }

    friend bool operator==(const Poly &a, const Poly &b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

    Poly operator-() const {
        Poly p(ring_);
        for (auto &[e, c] : terms_) p.terms_[e] = -c;
        return p;
    }

    Poly &operator+=(const Poly &o) {
        for (auto &[e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly &operator-=(const Poly &o) {
        for (auto &[e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }

    friend Poly operator*(const Poly &a, const Poly &b) {
        Poly p(a.ring_);
        for (auto &[ea, ca] : a.terms_)
            for (auto &[eb, cb] : b.terms_) {
                Exp e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                p.add_term(e, ca * cb);
            }
        return p;
    }
    Poly &operator*=(const Poly &o) { return *this = *this * o; }

    Poly &operator*=(const Rat &c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[e, v] : terms_) v *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const Rat &c) { return a *= c; }
    friend Poly operator*(const Rat &c, Poly a) { return a *= c; }
    Poly &operator/=(const Rat &c) {
        for (auto &[e, v] : terms_) v /= c;
        return *this;
    }

    Poly pow(unsigned k) const {
        Poly r = constant(ring_, 1);
        for (unsigned i = 0; i < k; ++i) r *= *this;
        return r;
    }

    // Substitute variable idx by a polynomial (possibly of another ring).
    Poly substitute(int idx, const Poly &value) const {
        Poly out(value.ring());
        for (auto &[e, c] : terms_) {
            Poly t = Poly::constant(value.ring(), c);
            t *= value.pow((unsigned)std::max<int32_t>(e[idx], 0));
            if (e[idx] < 0) throw std::runtime_error("negative exponent in substitute");
            // remaining variables must exist in the target ring by name
            for (size_t i = 0; i < e.size(); ++i) {
                if ((int)i == idx || e[i] == 0) continue;
                int j = value.ring()->index_of(ring_->vars[i]);
                if (j < 0) throw std::runtime_error("substitute: lost variable");
                t *= Poly::variable(value.ring(), j).pow((unsigned)e[i]);
            }
            out += t;
        }
        return out;
    }
    Poly substitute(int idx, const Rat &value) const {
        Poly out(ring_);
        for (auto &[e, c] : terms_) {
            Rat coeff = c;
            for (int k = 0; k < e[idx]; ++k) coeff *= value;
            Exp e2(e);
            e2[idx] = 0;
            out.add_term(e2, coeff);
        }
        return out;
    }

    // Total degree weighted per variable (e.g. r has weight 0, t_i weight 2).
    // Returns the maximum over terms; -1 for the zero polynomial.
    int weighted_degree(const std::vector<int> &weights) const {
        int d = -1;
        for (auto &[e, c] : terms_) {
            int s = 0;
            for (size_t i = 0; i < e.size(); ++i) s += e[i] * weights[i];
            d = std::max(d, s);
        }
        return d;
    }
    bool is_weighted_homogeneous(const std::vector<int> &weights, int deg) const {
        for (auto &[e, c] : terms_) {
            int s = 0;
            for (size_t i = 0; i < e.size(); ++i) s += e[i] * weights[i];
            if (s != deg) return false;
        }
        return true;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Rat &c = it->second;
            if (!first) os << (c >= 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            Rat a = abs(c);
            bool has_var = std::any_of(it->first.begin(), it->first.end(),
                                       [](int32_t x) { return x != 0; });
            if (a != 1 || !has_var) os << a.get_str();
            bool star = (a != 1 || !has_var) ? has_var : false;
            if (star) os << "*";
            bool firstv = true;
            for (size_t i = 0; i < it->first.size(); ++i) {
                if (it->first[i] == 0) continue;
                if (!firstv) os << "*";
                firstv = false;
                os << ring_->vars[i];
                if (it->first[i] != 1) os << "^" << it->first[i];
            }
        }
        return os.str();
    }

    void add_term(const Exp &e, const Rat &c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

  private:
    static const PolyRingPtr &trivial_ring() {
        static PolyRingPtr r = make_ring({});
        return r;
    }

    PolyRingPtr ring_;
    Terms terms_;
};

// top*(top-1)*...*(top-k+1) / k!, expanded.  poly_binomial(x, 0) = 1.
inline Poly poly_binomial(const Poly &top, unsigned k) {
    Poly p = Poly::constant(top.ring(), 1);
    for (unsigned i = 0; i < k; ++i)
        p *= (top - Poly::constant(top.ring(), Rat((long)i)));
    p /= Rat(factorial(k));
    return p;
}

// Exact quotient num/den.  Throws NonExactDivision when the remainder is
// nonzero; a nonzero remainder always indicates a transcription bug upstream.
inline Poly poly_divide_exact(const Poly &num, const Poly &den) {
    if (den.is_zero()) throw NonExactDivision("division by zero polynomial");
    Poly rem = num;
    Poly quo(num.ring());
    // lex-leading term of den (largest exponent vector)
    const auto &dl = *den.terms().rbegin();
    while (!rem.is_zero()) {
        const auto &rl = *rem.terms().rbegin();
        Poly::Exp e(rl.first);
        bool ok = true;
        for (size_t i = 0; i < e.size(); ++i) {
            e[i] -= dl.first[i];
            if (e[i] < 0) { ok = false; break; }
        }
        if (!ok) throw NonExactDivision("polynomial division is not exact");
        Rat c = rl.second / dl.second;
        Poly mono(num.ring());
        mono.add_term(e, c);
        quo += mono;
        rem -= mono * den;
    }
    return quo;
}

} // namespace waver
