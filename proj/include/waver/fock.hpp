#pragma once

#include <shared_mutex>

#include "waver/lambda.hpp"

namespace waver {

// Rewrite a polynomial symmetric in the first two variables of `aux` as a
// class polynomial in c1 = a+b and c2 = ab of the surface.
inline ClassVec symmetric_roots_to_class(const SurfaceAlgebra &sa, Poly p,
                                         const PolyRingPtr &aux) {
    Poly a = Poly::variable(aux, "a"), b = Poly::variable(aux, "b");
    ClassVec out = sa.zero_class();
    while (!p.is_zero()) {
        auto lead = *p.terms().rbegin(); // lex leading, a > b
        int i = lead.first[0], j = lead.first[1];
        if (i < j) throw std::runtime_error("polynomial not symmetric");
        Poly sub = (a + b).pow(i - j) * (a * b).pow(j) * lead.second;
        p -= sub;
        ClassVec cls = sa.class_mul(sa.class_pow(sa.c1, (unsigned)(i - j)),
                                    sa.class_pow(sa.c2, (unsigned)j));
        out = sa.class_add(out, sa.class_scale(cls, lead.second));
    }
    return out;
}

// An element of Lambda(S) (x) H*(S)[u]: terms (u exponent, basis class) with
// Lambda coefficients.  u exponents may be any integer during intermediate
// steps; Q kills the negative ones.
struct UPoly {
    std::map<std::pair<int, int>, Lambda> terms;

    void add(int u, int b, const Lambda &x) {
        if (x.is_zero()) return;
        auto key = std::make_pair(u, b);
        auto it = terms.find(key);
        if (it == terms.end()) terms.emplace(key, x);
        else {
            it->second += x;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
};

// Operator calculus on Lambda(S): f_n(u), the homomorphisms R+-, the
// contractions Q+-, their composites L_n and the psi-multiplications.
class FockOps {
  public:
    explicit FockOps(LambdaOpsPtr ops) : ops_(std::move(ops)), sa_(ops_->sa()) {}

    const LambdaOpsPtr &lambda_ops() const { return ops_; }
    const SurfacePtr &surface() const { return sa_; }

    // f_n(u) = (u^n - (u-t1)^n - (u-t2)^n + (u-t1-t2)^n)/(t1 t2), computed in
    // auxiliary root variables, divided exactly, and rewritten in c1, c2.
    // Returned as classes indexed by the u exponent.
    const std::vector<ClassVec> &f_poly(int n) const {
        std::scoped_lock lk(mx_);
        auto it = fpoly_.find(n);
        if (it != fpoly_.end()) return it->second;
        return fpoly_.emplace(n, compute_f_poly(n)).first->second;
    }

    // R^+(p_n(g)) = p_n(g) x 1 - 1 x f_n(u) g ;  R^-(p_n(g)) = ... + ...
    UPoly R(int sign, const Lambda &x) const {
        UPoly out;
        for (auto &[mono, coeff] : x.terms()) {
            UPoly prod = upoly_scalar(Lambda::scalar(sa_, coeff));
            for (auto &[gk, e] : mono) {
                UPoly fac = R_generator(sign, gen_weight(gk), gen_color(gk), e);
                prod = upoly_mul(prod, fac);
            }
            for (auto &[k, v] : prod.terms) out.add(k.first, k.second, v);
        }
        return out;
    }

    // Q^+(x (x) g u^l) = x h_l(g);  Q^-(x (x) g u^l) = x (-1)^l tilde_e_l(g).
    Lambda Q(int sign, const UPoly &y) const {
        Lambda out(sa_);
        for (auto &[key, x] : y.terms) {
            auto [l, b] = key;
            if (l < 0) continue;
            Lambda ev = (sign > 0) ? h_basis(l, b) : tilde_e_basis(l, b);
            if (ev.is_zero()) continue;
            Lambda t = x * ev;
            if (sign < 0 && (l % 2)) t *= Rat(-1);
            out += t;
        }
        return out;
    }

    // L^pm_n(color): f -> Q^pm(color u^n R^pm(f))
    Lambda L_mode(int sign, int n, const ClassVec &color, const Lambda &f) const {
        UPoly r = R(sign, f);
        UPoly shifted = mult_class_left(color, n, r);
        return Q(sign, shifted);
    }

    // multiplication by phi_n(color)
    Lambda phi_mult(int n, const ClassVec &color, const Lambda &f) const {
        Lambda p = ops_->phi(n, color);
        return p * f;
    }

    // --- level-r generator actions (the Lambda part; T^pm also shift s) ----

    // T^+_n(color) = {}_rL^+_n(color) s with {}_rL^+_n = L_{n+1-r}
    Lambda T_plus(int n, const ClassVec &color, int level, const Lambda &f) const {
        return L_mode(+1, n + 1 - level, color, f).substitute_r(Rat((long)level));
    }
    // T^-_n(color) = (-1)^{r+1} {}_rL^-_n(color) s^{-1}, {}_rL^-_n = L^-_{n+1+r}
    Lambda T_minus(int n, const ClassVec &color, int level, const Lambda &f) const {
        Lambda v = L_mode(-1, n + 1 + level, color, f);
        if (level % 2 == 0) v *= Rat(-1); // (-1)^{r+1}
        return v.substitute_r(Rat((long)level));
    }
    Lambda Psi(int n, const ClassVec &color, int level, const Lambda &f) const {
        return phi_mult(n, color, f).substitute_r(Rat((long)level));
    }

    // raw level-shifted modes without the s-twist, as in the double relation
    Lambda rL(int sign, int n, const ClassVec &color, int level, const Lambda &f) const {
        int m = (sign > 0) ? n + 1 - level : n + 1 + level;
        return L_mode(sign, m, color, f);
    }

    // memoized evaluations at basis classes
    Lambda h_basis(int l, int b) const {
        {
            std::shared_lock lk(smx_);
            auto it = hb_.find({l, b});
            if (it != hb_.end()) return it->second;
        }
        Lambda v = ops_->eval_h(l, sa_->basis_class(b));
        std::unique_lock lk(smx_);
        return hb_.emplace(std::make_pair(l, b), std::move(v)).first->second;
    }
    Lambda tilde_e_basis(int l, int b) const {
        {
            std::shared_lock lk(smx_);
            auto it = te_.find({l, b});
            if (it != te_.end()) return it->second;
        }
        Lambda v = ops_->tilde_e(l, sa_->basis_class(b), Poly::variable(sa_->ring, 0));
        std::unique_lock lk(smx_);
        return te_.emplace(std::make_pair(l, b), std::move(v)).first->second;
    }

    // multiply a UPoly on the H-leg by (class . u^n) from the left
    UPoly mult_class_left(const ClassVec &color, int n, const UPoly &y) const {
        UPoly out;
        for (size_t ci = 0; ci < color.size(); ++ci) {
            if (color[ci].is_zero()) continue;
            bool odd_c = sa_->basis[ci].odd();
            for (auto &[key, x] : y.terms) {
                auto [l, b] = key;
                ClassVec prod = sa_->class_mul(sa_->basis_class((int)ci), sa_->basis_class(b));
                if (sa_->class_is_zero(prod)) continue;
                Lambda coeffd = x;
                coeffd *= color[ci];
                // sign: color crosses the Lambda part of x
                if (odd_c) {
                    // split x by monomial parity
                    Lambda even(sa_), odd(sa_);
                    for (auto &[m, c] : coeffd.terms()) {
                        if (coeffd.parity_of(m)) odd.add_term(m, c);
                        else even.add_term(m, c);
                    }
                    odd *= Rat(-1);
                    coeffd = even + odd;
                }
                for (size_t k = 0; k < prod.size(); ++k)
                    if (!prod[k].is_zero()) {
                        Lambda t = coeffd;
                        t *= prod[k];
                        out.add(l + n, (int)k, t);
                    }
            }
        }
        return out;
    }

    UPoly upoly_scalar(const Lambda &x) const {
        UPoly out;
        out.add(0, sa_->unit_index, x);
        return out;
    }

    // full product in Lambda (x) H[u]
    UPoly upoly_mul(const UPoly &a, const UPoly &b) const {
        UPoly out;
        for (auto &[ka, xa] : a.terms) {
            bool odd_a = sa_->basis[ka.second].odd();
            for (auto &[kb, xb] : b.terms) {
                ClassVec prod =
                    sa_->class_mul(sa_->basis_class(ka.second), sa_->basis_class(kb.second));
                if (sa_->class_is_zero(prod)) continue;
                // (x (x) a)(y (x) b) = (-1)^{|a||y|} xy (x) ab
                Lambda xy(sa_);
                if (odd_a) {
                    for (auto &[m, c] : xb.terms()) {
                        Lambda piece(sa_);
                        piece.add_term(m, c);
                        Lambda t = xa * piece;
                        if (xb.parity_of(m)) t *= Rat(-1);
                        xy += t;
                    }
                } else {
                    xy = xa * xb;
                }
                if (xy.is_zero()) continue;
                for (size_t k = 0; k < prod.size(); ++k)
                    if (!prod[k].is_zero()) {
                        Lambda t = xy;
                        t *= prod[k];
                        out.add(ka.first + kb.first, (int)k, t);
                    }
            }
        }
        return out;
    }

  private:
    UPoly R_generator(int sign, int m, int color, int e) const {
        // (p_m(c) (x) 1 + s 1 (x) f_m(u) c)^e, s = -1 for R^+, +1 for R^-
        UPoly base_f; // 1 (x) f_m(u) c
        const auto &f = f_poly(m);
        for (int u = 0; u < (int)f.size(); ++u) {
            ClassVec fc = sa_->class_mul(f[u], sa_->basis_class(color));
            for (size_t k = 0; k < fc.size(); ++k)
                if (!fc[k].is_zero())
                    base_f.add(u, (int)k, Lambda::scalar(sa_, fc[k]));
        }
        Rat s = (sign > 0) ? Rat(-1) : Rat(1);
        Lambda gen = Lambda::generator(sa_, m, color);
        // binomial expansion; for odd colors e = 1 so no commutation issue
        UPoly out;
        std::vector<UPoly> fpow(e + 1);
        fpow[0] = upoly_scalar(Lambda::one(sa_));
        for (int k = 1; k <= e; ++k) fpow[k] = upoly_mul(fpow[k - 1], base_f);
        for (int k = 0; k <= e; ++k) {
            // C(e,k) gen^{e-k} s^k (x) f^k
            Lambda gp = Lambda::one(sa_);
            for (int t = 0; t < e - k; ++t) gp = gp * gen;
            Rat c = binomial(Rat((long)e), (unsigned)k);
            for (int t = 0; t < k; ++t) c *= s;
            for (auto &[key, v] : fpow[k].terms) {
                Lambda t = gp * v;
                t *= c;
                out.add(key.first, key.second, t);
            }
        }
        return out;
    }

    std::vector<ClassVec> compute_f_poly(int n) const {
        auto aux = make_ring({"a", "b"});
        Poly a = Poly::variable(aux, "a"), b = Poly::variable(aux, "b");
        // numerator coefficients by u power: u^n - (u-a)^n - (u-b)^n + (u-a-b)^n
        std::vector<Poly> num(n + 1, Poly(aux));
        for (int k = 0; k <= n; ++k) {
            // coefficient of u^k in -(u-a)^n - (u-b)^n + (u-a-b)^n
            Rat c = binomial(Rat((long)n), (unsigned)(n - k));
            Poly term(aux);
            term -= a.pow(n - k);
            term -= b.pow(n - k);
            term += (a + b).pow(n - k);
            Rat sgn = ((n - k) % 2) ? -1 : 1;
            num[k] += term * (c * sgn);
        }
        num[n] += Poly::constant(aux, 1); // the leading u^n
        std::vector<ClassVec> out;
        Poly ab = a * b;
        for (int k = 0; k <= n; ++k) {
            if (num[k].is_zero()) {
                out.push_back(sa_->zero_class());
                continue;
            }
            Poly q = poly_divide_exact(num[k], ab);
            out.push_back(symmetric_roots_to_class(*sa_, q, aux));
        }
        while (!out.empty() && sa_->class_is_zero(out.back())) out.pop_back();
        return out;
    }

    LambdaOpsPtr ops_;
    SurfacePtr sa_;
    mutable std::mutex mx_;
    mutable std::map<int, std::vector<ClassVec>> fpoly_;
    mutable std::shared_mutex smx_;
    mutable std::map<std::pair<int, int>, Lambda> hb_;
    mutable std::map<std::pair<int, int>, Lambda> te_;
};

using FockOpsPtr = std::shared_ptr<FockOps>;

} // namespace waver
