#pragma once

#include "waver/fock.hpp"

namespace waver {

// Independent oracles for the operator calculus: the generating-series
// kernels Omega (same-sign products) and Omega-bar (mixed products), and the
// Fourier modes of the vertex operators.  Both recompute L-mode data along
// routes that never call L_mode itself.
class Oracles {
  public:
    explicit Oracles(FockOpsPtr fock)
        : fock_(std::move(fock)), ops_(fock_->lambda_ops()), sa_(ops_->sa()) {}

    // ---- Omega kernels -----------------------------------------------------

    // Omega(x,y) = y^2 / (1-y(1/x - t1))(1-y(1/x - t2)): coefficient of
    // x^{-p} y^q as a class, q >= 2; p runs over 0..q-2.
    std::map<std::pair<int, int>, ClassVec> omega_pp(int y_order) const {
        std::map<std::pair<int, int>, ClassVec> out;
        auto aux = make_ring({"a", "b", "v"}); // v = 1/x
        Poly a = Poly::variable(aux, "a"), b = Poly::variable(aux, "b"),
             v = Poly::variable(aux, "v");
        for (int m = 0; m + 2 <= y_order; ++m) {
            Poly s(aux);
            for (int i = 0; i <= m; ++i) s += (v - a).pow(i) * (v - b).pow(m - i);
            // split by v-degree
            for (int j = 0; j <= m; ++j) {
                Poly cj(aux);
                for (auto &[e, c] : s.terms())
                    if (e[2] == j) {
                        Poly::Exp e2 = e;
                        e2[2] = 0;
                        cj.add_term(e2, c);
                    }
                if (cj.is_zero()) continue;
                ClassVec cls = symmetric_roots_to_class(*sa_, cj, aux);
                if (!sa_->class_is_zero(cls)) out[{j, m + 2}] = cls;
            }
        }
        return out;
    }

    // Omega-bar(-y, -1/x) - 1 = Delta y^2/((1-y/x)(1-y(1/x+c1))): coefficient
    // of x^{-p} y^{m+2} is binom(m+1, m-p+1) c1^{m-p}.
    std::map<std::pair<int, int>, ClassVec> omega_pm(int y_order) const {
        std::map<std::pair<int, int>, ClassVec> out;
        for (int m = 0; m + 2 <= y_order; ++m)
            for (int p = 0; p <= m; ++p) {
                Rat c = binomial(Rat((long)m + 1), (unsigned)(m - p + 1));
                ClassVec cls = sa_->class_pow(sa_->c1, (unsigned)(m - p));
                cls = sa_->class_scale(cls, c);
                if (!sa_->class_is_zero(cls)) out[{p, m + 2}] = cls;
            }
        return out;
    }

    // coefficient of x^a y^b in L_l(x) L_m(y) (1) computed from the ++ kernel:
    // m(theta(x) (x) theta(y)) (1 - Delta Omega(x,y)) (lambda (x) mu)
    Lambda kernel_pp(const ClassVec &lambda, const ClassVec &mu, int a, int b) const {
        Lambda out = ops_->eval_h(a, lambda) * ops_->eval_h(b, mu);
        auto om = omega_pp(b + 2);
        const auto &d = sa_->diagonal();
        int pmu = class_parity(mu);
        for (auto &[pq, w] : om) {
            auto [p, q] = pq;
            if (b - q < 0) continue;
            for (auto &t : d.image_terms) {
                int sign = (pmu && sa_->basis[t.left].odd()) ? -1 : 1;
                ClassVec left = sa_->class_mul(lambda, sa_->class_mul(w, sa_->basis_class(t.left)));
                ClassVec right = sa_->class_mul(mu, sa_->basis_class(t.right));
                Lambda term = ops_->eval_h(a + p, left) * ops_->eval_h(b - q, right);
                term *= t.coeff * Rat(sign);
                out -= term;
            }
        }
        return out;
    }

    // coefficient of x^a y^b in L^+_l(x) L^-_m(y) (1) from the Omega-bar
    // kernel: m(theta(x) (x) tilde-theta(y)^{-1}) Omega-bar (lambda (x) mu)
    Lambda kernel_pm(const ClassVec &lambda, const ClassVec &mu, int a, int b) const {
        Poly rv = Poly::variable(sa_->ring, 0);
        Lambda out = ops_->eval_h(a, lambda) * tilde_sign(b, mu, rv);
        auto om = omega_pm(b + 2);
        const auto &d = sa_->diagonal();
        int pmu = class_parity(mu);
        for (auto &[pq, w] : om) {
            auto [p, q] = pq;
            if (b - q < 0) continue;
            for (auto &t : d.image_terms) {
                int sign = (pmu && sa_->basis[t.left].odd()) ? -1 : 1;
                ClassVec left = sa_->class_mul(lambda, sa_->class_mul(w, sa_->basis_class(t.left)));
                ClassVec right = sa_->class_mul(mu, sa_->basis_class(t.right));
                Lambda term = ops_->eval_h(a + p, left) * tilde_sign(b - q, right, rv);
                term *= t.coeff * Rat(sign);
                out += term;
            }
        }
        return out;
    }

    // [L_lambda(x), L_mu(y)](1) coefficient of x^a y^b via the contracted
    // kernel -theta(x)theta(y)(Omega(x,y)-Omega(y,x))(lambda mu)
    Lambda kernel_pp_commutator(const ClassVec &lambda, const ClassVec &mu, int a,
                                int b) const {
        auto om = omega_pp(a + b + 2);
        ClassVec lm = sa_->class_mul(lambda, mu);
        Lambda out(sa_);
        for (auto &[pq, w] : om) {
            auto [p, q] = pq;
            // Omega(x,y): x^{-p} y^{q}
            if (b - q >= 0) {
                SymFn f = ops_->he('h', a + p) * ops_->he('h', b - q);
                out -= ops_->colored_eval(f, sa_->class_mul(w, lm));
            }
            // Omega(y,x): y^{-p} x^{q}
            if (a - q >= 0 && b + p >= 0) {
                SymFn f = ops_->he('h', a - q) * ops_->he('h', b + p);
                out += ops_->colored_eval(f, sa_->class_mul(w, lm));
            }
        }
        return out;
    }

    // ---- vertex operator modes ---------------------------------------------

    // Extended class: ordinary part plus compact-module part.
    struct ExtClass {
        ClassVec ord;
        std::vector<Poly> cpt;
    };

    ExtClass ext_basis(int i) const {
        return {sa_->basis_class(i), std::vector<Poly>(sa_->compact.size(), Poly(sa_->ring))};
    }
    ExtClass ext_compact(int a) const {
        ExtClass e{sa_->zero_class(), std::vector<Poly>(sa_->compact.size(), Poly(sa_->ring))};
        e.cpt[a] = Poly::constant(sa_->ring, 1);
        return e;
    }

    int ext_parity(const ExtClass &e) const {
        int par = -1;
        auto upd = [&](int p) {
            if (par == -1) par = p;
            else if (par != p) throw std::runtime_error("mixed parity ext class");
        };
        for (size_t i = 0; i < e.ord.size(); ++i)
            if (!e.ord[i].is_zero()) upd(sa_->basis[i].degree % 2);
        for (size_t a = 0; a < e.cpt.size(); ++a)
            if (!e.cpt[a].is_zero()) upd(sa_->compact[a].degree % 2);
        return par < 0 ? 0 : par;
    }

    ExtClass ext_mul(const ExtClass &x, const ExtClass &y) const {
        ExtClass out{sa_->zero_class(), std::vector<Poly>(sa_->compact.size(), Poly(sa_->ring))};
        out.ord = sa_->class_mul(x.ord, y.ord);
        size_t m = sa_->compact.size();
        // cpt(x) . ord(y)
        for (size_t a = 0; a < m; ++a) {
            if (x.cpt[a].is_zero()) continue;
            const auto &tb = sa_->compact[a].mult_basis;
            if (tb.empty()) throw std::runtime_error("compact module table missing");
            for (size_t j = 0; j < sa_->dim(); ++j) {
                if (y.ord[j].is_zero()) continue;
                for (size_t c = 0; c < m; ++c)
                    if (!tb[j][c].is_zero()) out.cpt[c] += x.cpt[a] * y.ord[j] * tb[j][c];
            }
            // cpt(x) . cpt(y)
            const auto &tc = sa_->compact[a].mult_compact;
            for (size_t bidx = 0; bidx < m; ++bidx) {
                if (y.cpt[bidx].is_zero()) continue;
                for (size_t c = 0; c < m; ++c)
                    if (!tc[bidx][c].is_zero()) out.cpt[c] += x.cpt[a] * y.cpt[bidx] * tc[bidx][c];
            }
        }
        // ord(x) . cpt(y) via supercommutativity
        for (size_t bidx = 0; bidx < m; ++bidx) {
            if (y.cpt[bidx].is_zero()) continue;
            const auto &tb = sa_->compact[bidx].mult_basis;
            if (tb.empty()) throw std::runtime_error("compact module table missing");
            bool ob = sa_->compact[bidx].odd();
            for (size_t j = 0; j < sa_->dim(); ++j) {
                if (x.ord[j].is_zero()) continue;
                int sign = (ob && sa_->basis[j].odd()) ? -1 : 1;
                for (size_t c = 0; c < m; ++c)
                    if (!tb[j][c].is_zero())
                        out.cpt[c] += x.ord[j] * y.cpt[bidx] * tb[j][c] * Rat(sign);
            }
        }
        return out;
    }

    // <ext, basis g>: trace of the ordinary part against g plus the compact
    // pairing
    Poly ext_pair(const ExtClass &e, int g) const {
        Poly out = sa_->trace(sa_->class_mul(e.ord, sa_->basis_class(g)));
        for (size_t a = 0; a < e.cpt.size(); ++a)
            if (!e.cpt[a].is_zero()) out += e.cpt[a] * sa_->compact[a].pairing[g];
        return out;
    }

    // dual of basis class j: ordinary (proper) or compact (open) leg
    ExtClass dual_class(int j) const {
        const auto &d = sa_->diagonal();
        ExtClass out{sa_->zero_class(), std::vector<Poly>(sa_->compact.size(), Poly(sa_->ring))};
        for (auto &t : d.terms)
            if (t.left == j) {
                if (d.right_is_compact) out.cpt[t.right] += t.coeff;
                else out.ord[t.right] += t.coeff;
            }
        return out;
    }

    // The Fourier mode of Theta^{sign} matching {}_r L^{sign}(u^l color):
    // equals L_mode(sign, l+1-sign*r, color) on any input.  Exact and finite
    // on every finite element.
    Lambda vertex_mode(int sign, int l, int color, int level, const Lambda &f) const {
        int wf = f.weight();
        int starget = (sign > 0) ? (-l + level - 1) : (-l - level - 1);
        Lambda out(sa_);

        // annihilation multisets: pairs (n, basis color), each removing
        // p-weight >= n+2
        std::vector<std::pair<int, int>> ann_gens;
        for (int n = 0; n + 2 <= wf; ++n)
            for (size_t c = 0; c < sa_->dim(); ++c) ann_gens.emplace_back(n, (int)c);

        std::vector<std::pair<int, int>> ann;
        enumerate_annihilations(ann_gens, 0, wf, ann, [&](const std::vector<std::pair<int, int>> &A) {
            int sn = 0, wa = 0;
            for (auto &[n, c] : A) {
                sn += n;
                wa += n + 2;
            }
            (void)wa;
            int sk = sn - starget; // total creation weight
            if (sk < 0) return;
            // apply annihilations to f (rightmost first = last in A)
            Lambda g = f;
            Rat mult_fix = multiset_factor(A);
            for (auto it = A.rbegin(); it != A.rend() && !g.is_zero(); ++it)
                g = apply_kappa_derivation(it->first, it->second, g);
            if (g.is_zero()) return;
            // class legs of the annihilation part (plain basis classes)
            // creation multisets with total weight sk
            std::vector<std::pair<int, int>> cre;
            enumerate_creations(sk, 0, cre, [&](const std::vector<std::pair<int, int>> &C) {
                Lambda term = g;
                Rat factor = mult_fix * multiset_factor(C);
                // creation operators multiply, leftmost outermost
                for (auto it = C.rbegin(); it != C.rend(); ++it) {
                    Lambda gen = creation_element(sign, it->first, it->second);
                    if (gen.is_zero()) { term = Lambda::zero(sa_); break; }
                    term = gen * term;
                }
                if (term.is_zero()) return;
                // sign factors from the exponential prefactors
                if (sign > 0) {
                    if (A.size() % 2) factor = -factor; // (-d/dkappa)
                } else {
                    if (C.size() % 2) factor = -factor; // (-tau p_k/k)
                }
                // creation 1/k factors
                for (auto &[k, c] : C) factor /= Rat((long)k);
                // interleave sign and class contraction
                int koszul = 1;
                ExtClass cls = ext_unit();
                {
                    // sequence: creations then annihilations; operators are
                    // the Lambda-side, classes the H-side
                    std::vector<int> op_par, cls_par;
                    std::vector<ExtClass> legs;
                    for (auto &[k, c] : C) {
                        int pp = sa_->basis[c].odd() ? 1 : 0;
                        op_par.push_back(pp);
                        legs.push_back(dual_class(c));
                        cls_par.push_back(ext_parity(legs.back()));
                    }
                    for (auto &[n, c] : A) {
                        int pp = sa_->basis[c].odd() ? 1 : 0;
                        op_par.push_back(pp);
                        legs.push_back(ext_basis(c));
                        cls_par.push_back(pp);
                    }
                    // sign = prod_{i<j} (-1)^{|cls_i||op_j|}
                    int acc = 0;
                    int suffix = 0;
                    for (int i = (int)op_par.size() - 1; i >= 0; --i) {
                        acc += cls_par[i] * suffix;
                        suffix += op_par[i];
                    }
                    if (acc % 2) koszul = -koszul;
                    for (auto &lg : legs) cls = ext_mul(cls, lg);
                }
                Poly contraction = ext_pair(cls, color);
                if (contraction.is_zero()) return;
                term *= contraction * factor * Rat(koszul);
                out += term;
            });
        });
        return out.substitute_r(Rat((long)level));
    }

    ExtClass ext_unit() const {
        return {sa_->unit(), std::vector<Poly>(sa_->compact.size(), Poly(sa_->ring))};
    }

  private:
    Lambda tilde_sign(int l, const ClassVec &mu, const Poly &rv) const {
        if (l < 0) return Lambda::zero(sa_);
        Lambda v = ops_->tilde_e(l, mu, rv);
        if (l % 2) v *= Rat(-1);
        return v;
    }

    int class_parity(const ClassVec &v) const {
        int par = -1;
        for (size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) {
                int p = sa_->basis[i].degree % 2;
                if (par == -1) par = p;
                else if (par != p) throw std::runtime_error("mixed parity class");
            }
        return par < 0 ? 0 : par;
    }

    // creation element: p_k(c) for the plus series, tau_{c1} p_k(c) for minus
    Lambda creation_element(int sign, int k, int c) const {
        std::scoped_lock lk(cre_mx_);
        auto key = std::make_pair(k, c + (sign < 0 ? 10000 : 0));
        auto it = cre_cache_.find(key);
        if (it != cre_cache_.end()) return it->second;
        Lambda v = (sign < 0) ? ops_->tau_gen(k, c, sa_->c1)
                              : Lambda::generator(sa_, k, c);
        return cre_cache_.emplace(key, std::move(v)).first->second;
    }

    Lambda apply_kappa_derivation(int n, int c, const Lambda &x) const {
        int cap = x.weight();
        if (cap < n + 2) return Lambda::zero(sa_);
        std::map<std::pair<int, int>, Poly> co;
        {
            std::scoped_lock lk(kd_mx_);
            auto key = std::make_tuple(n, c, cap);
            auto it = kd_cache_.find(key);
            if (it == kd_cache_.end())
                it = kd_cache_.emplace(key, ops_->kappa_derivation(n, c, cap)).first;
            co = it->second;
        }
        return ops_->derivation_apply(co, x);
    }

    static Rat multiset_factor(const std::vector<std::pair<int, int>> &v) {
        // 1 / prod (multiplicities!)
        Rat f = 1;
        size_t i = 0;
        while (i < v.size()) {
            size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            f /= Rat(factorial((unsigned)(j - i)));
            i = j;
        }
        return f;
    }

    template <class F>
    void enumerate_annihilations(const std::vector<std::pair<int, int>> &gens, size_t from,
                                 int budget, std::vector<std::pair<int, int>> &cur,
                                 const F &emit) const {
        emit(cur);
        for (size_t i = from; i < gens.size(); ++i) {
            int cost = gens[i].first + 2;
            if (cost > budget) continue;
            cur.push_back(gens[i]);
            enumerate_annihilations(gens, i, budget - cost, cur, emit);
            cur.pop_back();
        }
    }

    template <class F>
    void enumerate_creations(int total, size_t from_color, std::vector<std::pair<int, int>> &cur,
                             const F &emit) const {
        if (total == 0) {
            emit(cur);
            return;
        }
        // choose pairs (k >= 1, color) in non-decreasing order
        size_t ncolors = sa_->dim();
        std::pair<int, int> lastp = cur.empty() ? std::make_pair(1, 0) : cur.back();
        for (int k = 1; k <= total; ++k)
            for (size_t c = 0; c < ncolors; ++c) {
                std::pair<int, int> p{k, (int)c};
                if (p < lastp) continue;
                cur.push_back(p);
                enumerate_creations(total - k, 0, cur, emit);
                cur.pop_back();
            }
    }

    FockOpsPtr fock_;
    LambdaOpsPtr ops_;
    SurfacePtr sa_;
    mutable std::mutex cre_mx_;
    mutable std::map<std::pair<int, int>, Lambda> cre_cache_;
    mutable std::mutex kd_mx_;
    mutable std::map<std::tuple<int, int, int>, std::map<std::pair<int, int>, Poly>> kd_cache_;
};

} // namespace waver
