#pragma once

#include <map>
#include <mutex>
#include <sstream>

#include "waver/surface.hpp"

namespace waver {

// ---------------------------------------------------------------------------
// Symmetric functions in the power-sum basis.  Keys are partitions in weakly
// decreasing order; parts equal to 0 stand for the formal p_0 and are kept.
// ---------------------------------------------------------------------------

using Partition = std::vector<int>;

struct SymFn {
    std::map<Partition, Rat> terms;

    static SymFn one() {
        SymFn f;
        f.terms[{}] = 1;
        return f;
    }
    static SymFn p(int k) {
        SymFn f;
        f.terms[{k}] = 1;
        return f;
    }
    bool is_zero() const { return terms.empty(); }

    void add(const Partition &mu, const Rat &c) {
        if (c == 0) return;
        auto it = terms.find(mu);
        if (it == terms.end()) terms.emplace(mu, c);
        else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    SymFn &operator+=(const SymFn &o) {
        for (auto &[m, c] : o.terms) add(m, c);
        return *this;
    }
    SymFn &operator*=(const Rat &c) {
        if (c == 0) { terms.clear(); return *this; }
        for (auto &[m, v] : terms) v *= c;
        return *this;
    }
    friend SymFn operator*(const SymFn &a, const SymFn &b) {
        SymFn out;
        for (auto &[ma, ca] : a.terms)
            for (auto &[mb, cb] : b.terms) {
                Partition m = ma;
                m.insert(m.end(), mb.begin(), mb.end());
                std::sort(m.rbegin(), m.rend());
                out.add(m, ca * cb);
            }
        return out;
    }
    friend SymFn operator+(SymFn a, const SymFn &b) { return a += b; }
};

namespace detail {
inline const SymFn &e_h_impl(char kind, int l, std::map<std::pair<char, int>, SymFn> &cache) {
    auto key = std::make_pair(kind, l);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    SymFn out;
    if (l == 0) out = SymFn::one();
    else if (l > 0) {
        for (int i = 1; i <= l; ++i) {
            SymFn t = SymFn::p(i) * e_h_impl(kind, l - i, cache);
            Rat sgn = (kind == 'e' && i % 2 == 0) ? Rat(-1) : Rat(1);
            t *= sgn / Rat((long)l);
            out += t;
        }
    }
    return cache.emplace(key, std::move(out)).first->second;
}
} // namespace detail

// Newton's identities.  kind 'h': complete homogeneous, kind 'e': elementary;
// l < 0 gives 0.
inline SymFn e_h_from_p(char kind, int l) {
    static std::mutex mx;
    static std::map<std::pair<char, int>, SymFn> cache;
    std::scoped_lock lk(mx);
    if (l < 0) return SymFn{};
    return detail::e_h_impl(kind, l, cache);
}

// ---------------------------------------------------------------------------
// Lambda(S): colored symmetric functions.
// ---------------------------------------------------------------------------

// A generator p_n(color), packed for ordering by (weight, color).
inline uint32_t gen_key(int weight, int color) {
    return ((uint32_t)weight << 10) | (uint32_t)color;
}
inline int gen_weight(uint32_t k) { return (int)(k >> 10); }
inline int gen_color(uint32_t k) { return (int)(k & 1023); }

// Monomial: sorted (generator, exponent) runs, exponent 1 for odd generators.
using Mono = std::vector<std::pair<uint32_t, int32_t>>;

class Lambda {
  public:
    Lambda() = default;
    explicit Lambda(SurfacePtr sa) : sa_(std::move(sa)) {}

    static Lambda zero(SurfacePtr sa) { return Lambda(std::move(sa)); }
    static Lambda one(SurfacePtr sa) {
        Lambda x(sa);
        x.terms_[Mono{}] = Poly::constant(sa->ring, 1);
        return x;
    }
    static Lambda scalar(SurfacePtr sa, Poly c) {
        Lambda x(sa);
        if (!c.is_zero()) x.terms_[Mono{}] = std::move(c);
        return x;
    }

    // Is p_n(basis color i) a surviving generator of Lambda(S)?
    static bool gen_alive(const SurfaceAlgebra &sa, int n, int color) {
        if (n < 1) return false;
        int d = 2 * n + sa.basis[color].degree - 4;
        if (d < 0) return false;                        // quotient by ch_1 of low degree
        if (!sa.proper && color == sa.point_index) return false; // f([pt]) = 0, S open
        return true;
    }
    static int gen_degree(const SurfaceAlgebra &sa, uint32_t k) {
        return 2 * gen_weight(k) + sa.basis[gen_color(k)].degree - 4;
    }
    static bool gen_odd(const SurfaceAlgebra &sa, uint32_t k) {
        return sa.basis[gen_color(k)].odd();
    }

    static Lambda generator(SurfacePtr sa, int n, int color) {
        Lambda x(sa);
        if (!gen_alive(*sa, n, color)) return x;
        x.terms_[Mono{{gen_key(n, color), 1}}] = Poly::constant(sa->ring, 1);
        return x;
    }

    const SurfacePtr &surface() const { return sa_; }
    const std::map<Mono, Poly> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend bool operator==(const Lambda &a, const Lambda &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Lambda &a, const Lambda &b) { return !(a == b); }

    void add_term(const Mono &m, const Poly &c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) terms_.emplace(m, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Lambda operator-() const {
        Lambda x(sa_);
        for (auto &[m, c] : terms_) x.terms_[m] = -c;
        return x;
    }
    Lambda &operator+=(const Lambda &o) {
        for (auto &[m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Lambda &operator-=(const Lambda &o) {
        for (auto &[m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Lambda operator+(Lambda a, const Lambda &b) { return a += b; }
    friend Lambda operator-(Lambda a, const Lambda &b) { return a -= b; }
    Lambda &operator*=(const Poly &c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        Lambda out(sa_);
        for (auto &[m, v] : terms_) out.add_term(m, v * c);
        *this = std::move(out);
        return *this;
    }
    Lambda &operator*=(const Rat &c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto &[m, v] : terms_) v *= c;
        return *this;
    }
    friend Lambda operator*(Lambda a, const Rat &c) { return a *= c; }
    friend Lambda operator*(Lambda a, const Poly &c) { return a *= c; }

    // Koszul-signed merge of two canonical monomials; returns 0 on odd square.
    // The sign accumulates one factor (-1)^{|g|} for every generator of m1
    // that an odd generator of m2 moves past.
    static bool merge_mono(const SurfaceAlgebra &sa, const Mono &m1, const Mono &m2,
                           Mono &out, int &sign) {
        out.clear();
        sign = 1;
        // suffix parities of m1
        std::vector<int> suf(m1.size() + 1, 0);
        for (int i = (int)m1.size() - 1; i >= 0; --i)
            suf[i] = suf[i + 1] + (gen_odd(sa, m1[i].first) ? m1[i].second : 0);
        size_t i = 0, j = 0;
        while (i < m1.size() || j < m2.size()) {
            if (j == m2.size() || (i < m1.size() && m1[i].first < m2[j].first)) {
                out.push_back(m1[i++]);
            } else if (i < m1.size() && m1[i].first == m2[j].first) {
                bool odd = gen_odd(sa, m1[i].first);
                if (odd) return false; // odd generator squared
                out.emplace_back(m1[i].first, m1[i].second + m2[j].second);
                ++i;
                ++j;
            } else {
                // element of m2 crosses the remaining suffix of m1
                if (gen_odd(sa, m2[j].first) && (suf[i] % 2)) sign = -sign;
                out.push_back(m2[j++]);
            }
        }
        return true;
    }

    friend Lambda operator*(const Lambda &a, const Lambda &b) {
        Lambda out(a.sa_);
        Mono m;
        int sign;
        for (auto &[ma, ca] : a.terms_)
            for (auto &[mb, cb] : b.terms_) {
                if (!merge_mono(*a.sa_, ma, mb, m, sign)) continue;
                Poly c = ca * cb;
                if (sign < 0) c = -c;
                out.add_term(m, c);
            }
        return out;
    }

    // coefficient substitution r -> value
    Lambda substitute_r(const Rat &value) const {
        Lambda out(sa_);
        for (auto &[m, c] : terms_) out.add_term(m, c.substitute(0, value));
        return out;
    }

    int parity_of(const Mono &m) const {
        int p = 0;
        for (auto &[k, e] : m)
            if (gen_odd(*sa_, k)) p += e;
        return p % 2;
    }
    // cohomological degree of a monomial including base coefficients
    int degree_of(const Mono &m, const Poly &coeff) const {
        int d = coeff.weighted_degree(sa_->base_weights());
        for (auto &[k, e] : m) d += e * gen_degree(*sa_, k);
        return d;
    }
    // maximum total p-weight over terms
    int weight() const {
        int w = 0;
        for (auto &[m, c] : terms_) {
            int s = 0;
            for (auto &[k, e] : m) s += e * gen_weight(k);
            w = std::max(w, s);
        }
        return w;
    }
    // checked homogeneous cohomological degree; -1 for 0
    int degree() const {
        int d = -1;
        for (auto &[m, c] : terms_) {
            auto w = sa_->base_weights();
            for (auto &[e, cc] : c.terms()) {
                int s = 0;
                for (size_t i = 0; i < e.size(); ++i) s += e[i] * w[i];
                for (auto &[k, ex] : m) s += ex * gen_degree(*sa_, k);
                if (d == -1) d = s;
                else if (d != s) throw std::runtime_error("Lambda element not homogeneous");
            }
        }
        return d;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto &[m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            for (auto &[k, e] : m) {
                os << "*p_" << gen_weight(k) << "(" << sa_->basis[gen_color(k)].name << ")";
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

  private:
    SurfacePtr sa_;
    std::map<Mono, Poly> terms_;
};

// ---------------------------------------------------------------------------
// Evaluation of symmetric functions at cohomology classes, with the iterated
// coproduct memoized per surface.  Thread-safe: compute-once then read-only.
// ---------------------------------------------------------------------------

class LambdaOps {
  public:
    explicit LambdaOps(SurfacePtr sa) : sa_(std::move(sa)) {}

    const SurfacePtr &surface() const { return sa_; }
    SurfacePtr sa() const { return sa_; }

    // Iterated coproduct of a basis class: list of (coefficient, slots).
    struct TensorTerm {
        Poly coeff;
        std::vector<int> slots;
    };

    const std::vector<TensorTerm> &iterated_coproduct(int basis_idx, int len) const {
        std::scoped_lock lk(mx_);
        return iterated_coproduct_nolock(basis_idx, len);
    }

    // p_mu evaluated at a basis class (memoized); mu may contain parts = 0,
    // which evaluate through p_0(mu) = r * \int mu.
    const Lambda &eval_pmu_basis(const Partition &mu, int basis_idx) const {
        {
            std::scoped_lock lk(mx_);
            auto it = pmu_cache_.find({mu, basis_idx});
            if (it != pmu_cache_.end()) return it->second;
        }
        Lambda out = compute_pmu(mu, basis_idx);
        std::scoped_lock lk(mx_);
        return pmu_cache_.emplace(std::make_pair(mu, basis_idx), std::move(out)).first->second;
    }

    Lambda colored_eval(const SymFn &f, const ClassVec &lambda) const {
        Lambda out(sa_);
        for (auto &[mu, c] : f.terms)
            for (size_t i = 0; i < lambda.size(); ++i) {
                if (lambda[i].is_zero()) continue;
                Lambda t = eval_pmu_basis(mu, (int)i);
                t *= lambda[i] * c;
                out += t;
            }
        return out;
    }

    Lambda eval_h(int l, const ClassVec &lambda) const {
        if (l < 0) return Lambda::zero(sa_);
        return colored_eval(he('h', l), lambda);
    }
    Lambda eval_e(int l, const ClassVec &lambda) const {
        if (l < 0) return Lambda::zero(sa_);
        return colored_eval(he('e', l), lambda);
    }

    // widetilde{e}_l(mu) = sum_i binom(r-l+i, i) e_{l-i}(mu c1^i); zero for l<0.
    Lambda tilde_e(int l, const ClassVec &mu, const Poly &r_val) const {
        if (l < 0) return Lambda::zero(sa_);
        Lambda out(sa_);
        ClassVec cpow = mu;
        for (int i = 0; i <= l; ++i) {
            Poly b = poly_binomial(r_val - Poly::constant(r_val.ring(), Rat((long)(l - i))),
                                   (unsigned)i);
            Lambda t = eval_e(l - i, cpow);
            t *= b;
            out += t;
            if (i < l) cpow = sa_->class_mul(cpow, sa_->c1);
        }
        return out;
    }

    const SymFn &he(char kind, int l) const {
        std::scoped_lock lk(he_mx_);
        return detail::e_h_impl(kind, l, he_cache_);
    }

    // tau_c on a generator: tau_c(p_k(g)) = sum_i binom(k,i) p_i(c^{k-i} g).
    Lambda tau_gen(int k, int color, const ClassVec &c) const {
        Lambda out(sa_);
        for (int i = k; i >= 0; --i) {
            ClassVec arg = sa_->class_mul(sa_->class_pow(c, (unsigned)(k - i)),
                                          sa_->basis_class(color));
            Lambda t = atom_class(i, arg);
            t *= binomial(Rat((long)k), (unsigned)i);
            out += t;
        }
        return out;
    }

    // ring-homomorphism extension of tau_c
    Lambda tau_shift(const Lambda &x, const ClassVec &c) const {
        Lambda out(sa_);
        for (auto &[m, coeff] : x.terms()) {
            Lambda prod = Lambda::scalar(sa_, coeff);
            for (auto &[k, e] : m) {
                Lambda g = tau_gen(gen_weight(k), gen_color(k), c);
                for (int t = 0; t < e; ++t) prod = prod * g;
            }
            out += prod;
        }
        return out;
    }

    // upsilon: r -> -r and every generator negated; a ring map.
    Lambda involution_upsilon(const Lambda &x) const {
        Lambda out(sa_);
        for (auto &[m, coeff] : x.terms()) {
            int ngen = 0;
            for (auto &[k, e] : m) ngen += e;
            Poly c = coeff.substitute(0, Poly::variable(coeff.ring(), 0) * Rat(-1));
            if (ngen % 2) c = -c;
            out.add_term(m, c);
        }
        return out;
    }

    // p_i evaluated at a class: the atomic case of colored_eval.
    Lambda atom_class(int i, const ClassVec &arg) const {
        Lambda out(sa_);
        for (size_t j = 0; j < arg.size(); ++j) {
            if (arg[j].is_zero()) continue;
            Lambda t = atom(i, (int)j);
            t *= arg[j];
            out += t;
        }
        return out;
    }
    Lambda atom(int i, int color) const {
        if (i == 0) {
            // p_0(g) = r * \int g
            Poly tr = sa_->trace(sa_->basis_class(color));
            return Lambda::scalar(sa_, Poly::variable(sa_->ring, 0) * tr);
        }
        return Lambda::generator(sa_, i, color);
    }

    // kappa_n(g) = n! sum_{m>=1} p_m(Td^{(n+2-m)} g) / m!
    Lambda kappa_to_p(int n, const ClassVec &g) const {
        Lambda out(sa_);
        auto td = todd_graded(n + 2);
        for (int m = 1; m <= n + 2; ++m) {
            ClassVec arg = sa_->class_mul(td[n + 2 - m], g);
            Lambda t = atom_class(m, arg);
            t *= Rat(factorial(n)) / Rat(factorial(m));
            out += t;
        }
        return out;
    }

    // graded Todd classes, with the degree-vanishing extension beyond order 2
    // for non-equivariant presets
    std::vector<ClassVec> todd_graded(int k_max) const {
        std::vector<ClassVec> td;
        if (sa_->chern_roots) td = sa_->todd_coefficients(k_max);
        else {
            td = sa_->todd_coefficients(std::min(k_max, 2));
            while ((int)td.size() <= k_max) td.push_back(sa_->zero_class());
        }
        return td;
    }

    // phi_n(lambda) = n! sum_{k=0}^{n+1} p_{n+1-k}(Td^(k) lambda) / (n+1-k)!
    Lambda phi(int n, const ClassVec &lambda) const {
        Lambda out(sa_);
        auto td = todd_graded(n + 1);
        for (int k = 0; k <= n + 1; ++k) {
            ClassVec arg = sa_->class_mul(td[k], lambda);
            Lambda t = atom_class(n + 1 - k, arg);
            t *= Rat(factorial(n)) / Rat(factorial(n + 1 - k));
            out += t;
        }
        return out;
    }

    // c(lambda) = p_0(lambda) = r \int lambda (the x^{-1} coefficient of the
    // phi generating series)
    Poly c_coefficient(const ClassVec &lambda) const {
        return Poly::variable(sa_->ring, 0) * sa_->trace(lambda);
    }

    // --- kappa basis --------------------------------------------------------
    //
    // kappa_n(g), n >= 0, together with the weight-one generators p_1(g),
    // forms a triangular system of generators; KappaCoord (-1, c) stands for
    // p_1(basis c).

    using KappaCoord = std::pair<int, int>; // (n, color); n = -1 means p_1
    using KappaComb = std::map<KappaCoord, Poly>;

    // p_m(basis color) expressed in kappa coordinates.
    KappaComb p_in_kappa(int m, int color) const {
        KappaComb out;
        if (!Lambda::gen_alive(*sa_, m, color)) return out;
        // work list of p-terms to convert, highest weight first
        std::map<std::pair<int, int>, Poly> todo; // (weight, color) -> coeff
        todo[{m, color}] = Poly::constant(sa_->ring, 1);
        while (!todo.empty()) {
            auto it = std::prev(todo.end());
            auto [wc, coeff] = *it;
            todo.erase(it);
            auto [w, c] = wc;
            if (coeff.is_zero()) continue;
            if (w == 1) {
                auto &slot = out[{-1, c}];
                slot += coeff;
                if (slot.is_zero()) out.erase({-1, c});
                continue;
            }
            // p_w(c) = w!/(w-2)! kappa_{w-2}(c) - w! sum_{m'<w} p_{m'}(Td^{w-m'} c)/m'!
            Rat top = Rat(factorial(w)) / Rat(factorial(w - 2));
            auto &slot = out[{w - 2, c}];
            slot += coeff * top;
            if (slot.is_zero()) out.erase({w - 2, c});
            auto td = todd_graded(w);
            for (int mp = 1; mp < w; ++mp) {
                ClassVec arg = sa_->class_mul(td[w - mp], sa_->basis_class(c));
                for (size_t j = 0; j < arg.size(); ++j) {
                    if (arg[j].is_zero()) continue;
                    if (!Lambda::gen_alive(*sa_, mp, (int)j)) continue;
                    Poly add = coeff * arg[j] * (Rat(factorial(w)) / Rat(factorial(mp)));
                    auto &t = todo[{mp, (int)j}];
                    t -= add;
                    if (t.is_zero()) todo.erase({mp, (int)j});
                }
            }
        }
        return out;
    }

    // coefficients of d/d kappa_n(g) as a p-basis derivation:
    // returns (m, color) -> coefficient, for p-weights m <= cap.
    std::map<std::pair<int, int>, Poly> kappa_derivation(int n, int color, int cap) const {
        std::map<std::pair<int, int>, Poly> out;
        for (int m = 1; m <= cap; ++m)
            for (size_t c = 0; c < sa_->dim(); ++c) {
                if (!Lambda::gen_alive(*sa_, m, (int)c)) continue;
                auto comb = p_in_kappa(m, (int)c);
                auto it = comb.find({n, color});
                if (it != comb.end() && !it->second.is_zero()) out[{m, (int)c}] = it->second;
            }
        return out;
    }

    // contraction d/d p_m(c) with Koszul signs; a first-order derivation.
    Lambda p_derivative(const Lambda &x, int m, int color) const {
        Lambda out(sa_);
        uint32_t key = gen_key(m, color);
        bool oddD = sa_->basis[color].odd();
        for (auto &[mono, coeff] : x.terms()) {
            int prefix_par = 0;
            for (size_t i = 0; i < mono.size(); ++i) {
                auto [k, e] = mono[i];
                if (k == key) {
                    Mono nm;
                    nm.reserve(mono.size());
                    for (size_t j = 0; j < mono.size(); ++j) {
                        if (j == i) {
                            if (e > 1) nm.emplace_back(k, e - 1);
                        } else nm.push_back(mono[j]);
                    }
                    Poly c = coeff * Rat((long)e);
                    if (oddD && (prefix_par % 2)) c = -c;
                    out.add_term(nm, c);
                    break;
                }
                if (Lambda::gen_odd(*sa_, k)) prefix_par += e;
            }
        }
        return out;
    }

    // apply a derivation given by p-basis coefficients
    Lambda derivation_apply(const std::map<std::pair<int, int>, Poly> &coeffs,
                            const Lambda &x) const {
        Lambda out(sa_);
        for (auto &[mc, co] : coeffs) {
            Lambda t = p_derivative(x, mc.first, mc.second);
            t *= co;
            out += t;
        }
        return out;
    }

  private:
    const std::vector<TensorTerm> &iterated_coproduct_nolock(int basis_idx, int len) const {
        auto key = std::make_pair(basis_idx, len);
        auto it = cop_cache_.find(key);
        if (it != cop_cache_.end()) return it->second;
        std::vector<TensorTerm> out;
        if (len == 1) {
            out.push_back({Poly::constant(sa_->ring, 1), {basis_idx}});
        } else {
            const auto &prev = iterated_coproduct_nolock(basis_idx, len - 1);
            for (auto &t : prev) {
                for (auto &c : sa_->coproduct(t.slots[0])) {
                    TensorTerm nt;
                    nt.coeff = t.coeff * c.coeff;
                    nt.slots.push_back(c.left);
                    nt.slots.push_back(c.right);
                    nt.slots.insert(nt.slots.end(), t.slots.begin() + 1, t.slots.end());
                    out.push_back(std::move(nt));
                }
            }
        }
        return cop_cache_.emplace(key, std::move(out)).first->second;
    }

    Lambda compute_pmu(const Partition &mu, int basis_idx) const {
        size_t l = mu.size();
        if (l == 0) {
            // the symmetric function 1: 1(lambda) = \int lambda
            Poly tr = sa_->trace(sa_->basis_class(basis_idx));
            return Lambda::scalar(sa_, tr);
        }
        if (l == 1) return atom(mu[0], basis_idx);
        Lambda out(sa_);
        const auto &tensors = iterated_coproduct(basis_idx, (int)l);
        for (auto &t : tensors) {
            Lambda prod = Lambda::scalar(sa_, t.coeff);
            bool dead = false;
            for (size_t k = 0; k < l && !dead; ++k) {
                Lambda a = atom(mu[k], t.slots[k]);
                if (a.is_zero()) { dead = true; break; }
                prod = prod * a;
                if (prod.is_zero()) dead = true;
            }
            if (!dead) out += prod;
        }
        return out;
    }

    SurfacePtr sa_;
    mutable std::mutex mx_;
    mutable std::map<std::pair<int, int>, std::vector<TensorTerm>> cop_cache_;
    mutable std::map<std::pair<Partition, int>, Lambda> pmu_cache_;
    mutable std::mutex he_mx_;
    mutable std::map<std::pair<char, int>, SymFn> he_cache_;
};

using LambdaOpsPtr = std::shared_ptr<LambdaOps>;

} // namespace waver
