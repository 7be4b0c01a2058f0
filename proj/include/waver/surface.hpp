#pragma once

#include <cassert>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "waver/poly.hpp"

namespace waver {

// A cohomology class, stored as coefficients over the surface basis.
using ClassVec = std::vector<Poly>;

struct BasisClass {
    std::string name;
    int degree = 0; // cohomological degree, 0..4
    bool odd() const { return degree % 2 != 0; }
};

// Generator of the compact-support ideal I_S of an open preset, living in a
// formal Thom-shifted module over H*(S).  `pairing[j]` is the integration
// pairing against basis class j, `image` its pushforward into the ambient
// model (zero when the geometric map kills it).
struct CompactGen {
    std::string name;
    int degree = 0;
    std::vector<Rat> pairing;
    ClassVec image;
    // module structure, when supplied: kappa_a . b_j and kappa_a . kappa_b
    // expanded over the compact generators
    std::vector<std::vector<Poly>> mult_basis;
    std::vector<std::vector<Poly>> mult_compact;
    bool odd() const { return degree % 2 != 0; }
};

struct DiagTerm {
    int left;   // basis index
    int right;  // basis index (or compact-generator index, see DiagonalTensor)
    Poly coeff;
};

// Diagonal class as a tensor.  For proper surfaces both legs are basis
// classes.  For open surfaces the right legs index compact-ideal generators;
// image_terms holds the pushforward tensor (basis x basis) that enters the
// coproduct and the c1*Delta term of the quartic relation.
struct DiagonalTensor {
    bool right_is_compact = false;
    std::vector<DiagTerm> terms;
    std::vector<DiagTerm> image_terms;
};

struct CopTerm {
    Poly coeff;
    int left;
    int right;
};

class SurfaceAlgebra {
  public:
    std::string name;
    PolyRingPtr ring;                 // var 0 is the formal rank r
    std::vector<BasisClass> basis;
    int unit_index = 0;
    int point_index = -1;
    bool proper = true;
    std::vector<std::vector<ClassVec>> mult; // mult[i][j] over basis
    ClassVec c1, c2;
    std::optional<std::pair<Poly, Poly>> chern_roots;
    std::vector<CompactGen> compact; // open presets only

    size_t dim() const { return basis.size(); }

    std::vector<int> base_weights() const {
        // r is degree 0, every other base variable (t1, t2) is degree 2
        std::vector<int> w(ring->size(), 2);
        if (!w.empty()) w[0] = 0;
        return w;
    }

    ClassVec zero_class() const { return ClassVec(dim(), Poly(ring)); }
    ClassVec basis_class(int i, Poly coeff) const {
        ClassVec v = zero_class();
        v[i] = std::move(coeff);
        return v;
    }
    ClassVec basis_class(int i) const { return basis_class(i, Poly::constant(ring, 1)); }
    ClassVec unit() const { return basis_class(unit_index); }
    ClassVec point() const { return basis_class(point_index); }
    ClassVec scalar_class(const Poly &p) const { return basis_class(unit_index, p); }

    int index_of(const std::string &nm) const {
        for (size_t i = 0; i < basis.size(); ++i)
            if (basis[i].name == nm) return (int)i;
        return -1;
    }

    bool class_is_zero(const ClassVec &v) const {
        for (auto &p : v)
            if (!p.is_zero()) return false;
        return true;
    }
    bool class_eq(const ClassVec &a, const ClassVec &b) const {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return false;
        return true;
    }
    ClassVec class_add(ClassVec a, const ClassVec &b) const {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    }
    ClassVec class_scale(ClassVec a, const Poly &c) const {
        for (auto &p : a) p *= c;
        return a;
    }
    ClassVec class_scale(ClassVec a, const Rat &c) const {
        for (auto &p : a) p *= c;
        return a;
    }

    ClassVec class_mul(const ClassVec &a, const ClassVec &b) const {
        ClassVec out = zero_class();
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < b.size(); ++j) {
                if (b[j].is_zero()) continue;
                const ClassVec &m = mult[i][j];
                Poly c = a[i] * b[j];
                for (size_t k = 0; k < m.size(); ++k)
                    if (!m[k].is_zero()) out[k] += c * m[k];
            }
        }
        return out;
    }

    ClassVec class_pow(const ClassVec &a, unsigned k) const {
        ClassVec out = unit();
        for (unsigned i = 0; i < k; ++i) out = class_mul(out, a);
        return out;
    }

    // \int_S of a class: the coefficient of [pt].  This is the evaluation
    // functional used throughout the operator calculus; it is linear over the
    // base ring.
    Poly trace(const ClassVec &v) const { return v[point_index]; }

    // Cohomological degree of a homogeneous class; -1 for zero.
    int class_degree(const ClassVec &v) const {
        auto w = base_weights();
        int d = -1;
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_zero()) continue;
            int dv = basis[i].degree + v[i].weighted_degree(w);
            if (d == -1) d = dv;
            else if (d != dv) throw std::runtime_error("class is not homogeneous");
        }
        return d;
    }

    // --- Chern data -------------------------------------------------------

    // s2 = c1^2 - c2 (equals t1^2 + t1 t2 + t2^2 when roots exist).
    ClassVec derive_s2() const {
        ClassVec s = class_mul(c1, c1);
        for (size_t i = 0; i < s.size(); ++i) s[i] -= c2[i];
        return s;
    }

    // Graded Todd classes Td^(0..k_max).  Universal polynomials in c1, c2 up
    // to order 2; beyond that the graded pieces are computed from the Chern
    // roots by exact series expansion, which requires an equivariant preset.
    std::vector<ClassVec> todd_coefficients(int k_max) const {
        std::vector<ClassVec> out;
        if (chern_roots) {
            auto series = todd_root_series(k_max);
            for (int k = 0; k <= k_max; ++k) out.push_back(poly_t_to_class(series[k]));
            return out;
        }
        if (k_max >= 3) throw MissingRoots("todd_coefficients: k>=3 needs chern_roots");
        out.push_back(unit());
        if (k_max >= 1) out.push_back(class_scale(c1, Rat(1, 2)));
        if (k_max >= 2) {
            ClassVec t2 = class_mul(c1, c1);
            t2 = class_add(t2, c2);
            out.push_back(class_scale(t2, Rat(1, 12)));
        }
        return out;
    }

    // x t/(1-e^{-tx}) expanded via Bernoulli numbers, one factor per root.
    std::vector<Poly> todd_root_series(int k_max) const {
        auto bern = bernoulli_plus(k_max);
        const Poly &t1 = chern_roots->first;
        const Poly &t2 = chern_roots->second;
        std::vector<Poly> f1(k_max + 1, Poly(ring)), f2(k_max + 1, Poly(ring));
        for (int n = 0; n <= k_max; ++n) {
            Rat c = bern[n] / Rat(factorial(n));
            f1[n] = t1.pow(n) * c;
            f2[n] = t2.pow(n) * c;
        }
        std::vector<Poly> prod(k_max + 1, Poly(ring));
        for (int n = 0; n <= k_max; ++n)
            for (int i = 0; i <= n; ++i) prod[n] += f1[i] * f2[n - i];
        return prod;
    }

    // Bernoulli numbers with B1 = +1/2 (the x/(1-e^{-x}) convention).
    static std::vector<Rat> bernoulli_plus(int n_max) {
        std::vector<Rat> b(n_max + 1);
        for (int m = 0; m <= n_max; ++m) {
            // recursion for B^-(m), then flip the sign of B1
            Rat s = 0;
            if (m == 0) { b[0] = 1; continue; }
            for (int k = 0; k < m; ++k)
                s += binomial(Rat((long)m + 1), (unsigned)k) * b[k] * ((k == 1) ? -1 : 1);
            b[m] = -s / Rat((long)m + 1);
            if (m == 1) b[1] = Rat(1, 2);
        }
        return b;
    }

    // A base polynomial viewed as a multiple of the unit class.
    ClassVec poly_t_to_class(const Poly &p) const { return basis_class(unit_index, p); }

    // --- Mukai pairing ----------------------------------------------------

    struct KClass {
        Poly rank;     // degree-0 part, a base scalar times the unit
        ClassVec d2;   // degree-2 part
        ClassVec d4;   // degree-4 part
    };

    // <a, b> = \int a^vee b Td_S, with a^vee negating the degree-2 part.
    Poly mukai_pairing(const KClass &a, const KClass &b) const {
        auto td = todd_coefficients(2);
        ClassVec total = zero_class();
        auto acc = [&](const ClassVec &x) { total = class_add(total, x); };
        // rank terms
        acc(class_scale(b.d4, a.rank));
        acc(class_scale(class_mul(b.d2, td[1]), a.rank));
        ClassVec td2r = class_scale(td[2], a.rank * b.rank);
        acc(td2r);
        // degree-2 terms (a^vee)
        ClassVec a2 = a.d2;
        for (auto &p : a2) p = -p;
        acc(class_mul(a2, b.d2));
        acc(class_scale(class_mul(a2, td[1]), b.rank));
        // degree-4 terms
        acc(class_scale(a.d4, b.rank));
        return trace(total);
    }

    KClass point_kclass() const { return KClass{Poly(ring), zero_class(), point()}; }

    // --- Diagonal ---------------------------------------------------------

    const DiagonalTensor &diagonal() const {
        std::scoped_lock lk(mx_);
        if (!diag_) diag_ = compute_diagonal();
        return *diag_;
    }

    // Modified coproduct on the ambient model (Sweedler terms on basis
    // classes).  Proper case: Delta(b) = sum (b g) x g*.  Open case: the
    // [pt]-extended coproduct of the compactly-supported pushforward tensor.
    const std::vector<CopTerm> &coproduct(int i) const {
        std::scoped_lock lk(mx_);
        if (cop_.empty()) {
            std::vector<std::vector<CopTerm>> all(dim());
            for (size_t k = 0; k < dim(); ++k) all[k] = compute_coproduct((int)k);
            cop_ = std::move(all);
        }
        return cop_[i];
    }

    std::vector<std::pair<ClassVec, ClassVec>> coproduct_class(const ClassVec &v) const {
        std::vector<std::pair<ClassVec, ClassVec>> out;
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_zero()) continue;
            for (auto &t : coproduct((int)i))
                out.emplace_back(basis_class(t.left, t.coeff * v[i]), basis_class(t.right));
        }
        return out;
    }

  private:
    DiagonalTensor compute_diagonal() const {
        DiagonalTensor d;
        if (proper) {
            // invert the Gram matrix of the trace pairing
            size_t n = dim();
            std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n, Rat(0)));
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    Poly p = trace(class_mul(basis_class((int)i), basis_class((int)j)));
                    if (!p.is_constant())
                        throw DegeneratePairing("non-scalar pairing entry in proper preset");
                    g[i][j] = p.constant_value();
                }
            auto ginv = invert_rat(g);
            // dual(b_i) = sum_j ginv[j][i] b_j  since <b_i, dual(b_i)> = 1
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (ginv[j][i] != 0)
                        d.terms.push_back({(int)i, (int)j, Poly::constant(ring, ginv[j][i])});
            d.image_terms = d.terms;
            d.right_is_compact = false;
            return d;
        }
        // open case: dual bases between H* (minus the formal point) and the
        // compact ideal generators
        size_t n = dim();
        size_t m = compact.size();
        std::vector<int> rows; // basis indices except [pt]
        for (size_t i = 0; i < n; ++i)
            if ((int)i != point_index) rows.push_back((int)i);
        if (rows.size() != m)
            throw DegeneratePairing("compact ideal size does not match basis");
        std::vector<std::vector<Rat>> g(m, std::vector<Rat>(m));
        for (size_t a = 0; a < m; ++a)
            for (size_t j = 0; j < m; ++j) g[a][j] = compact[a].pairing[rows[j]];
        auto ginv = invert_rat(g); // dual(b_j) = sum_a ginv[a][j] kappa_a
        d.right_is_compact = true;
        // dual(b_j) = sum_a ginv[j][a] kappa_a
        for (size_t j = 0; j < m; ++j)
            for (size_t a = 0; a < m; ++a)
                if (ginv[j][a] != 0) {
                    d.terms.push_back({rows[j], (int)a, Poly::constant(ring, ginv[j][a])});
                    for (size_t k = 0; k < n; ++k)
                        if (!compact[a].image[k].is_zero())
                            d.image_terms.push_back(
                                {rows[j], (int)k, compact[a].image[k] * ginv[j][a]});
                }
        return d;
    }

    std::vector<CopTerm> compute_coproduct(int i) const {
        const DiagonalTensor &d = diagonal();
        std::vector<CopTerm> out;
        auto push = [&](Poly c, int l, int r) {
            if (c.is_zero()) return;
            for (auto &t : out)
                if (t.left == l && t.right == r) {
                    t.coeff += c;
                    return;
                }
            out.push_back({std::move(c), l, r});
        };
        if (!proper) {
            if (i == point_index) {
                push(Poly::constant(ring, 1), point_index, point_index);
                return out;
            }
            push(Poly::constant(ring, 1), point_index, i);
            push(Poly::constant(ring, 1), i, point_index);
        }
        for (auto &t : d.image_terms) {
            ClassVec prod = class_mul(basis_class(i), basis_class(t.left));
            for (size_t k = 0; k < prod.size(); ++k)
                if (!prod[k].is_zero()) push(prod[k] * t.coeff, (int)k, t.right);
        }
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const CopTerm &t) { return t.coeff.is_zero(); }),
                  out.end());
        return out;
    }

    static std::vector<std::vector<Rat>> invert_rat(std::vector<std::vector<Rat>> a) {
        size_t n = a.size();
        std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
        for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (piv < n && a[piv][col] == 0) ++piv;
            if (piv == n) throw DegeneratePairing("singular pairing matrix");
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            Rat p = a[col][col];
            for (size_t j = 0; j < n; ++j) {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for (size_t r = 0; r < n; ++r) {
                if (r == col || a[r][col] == 0) continue;
                Rat f = a[r][col];
                for (size_t j = 0; j < n; ++j) {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
        return inv;
    }

    mutable std::recursive_mutex mx_;
    mutable std::optional<DiagonalTensor> diag_;
    mutable std::vector<std::vector<CopTerm>> cop_;
};

using SurfacePtr = std::shared_ptr<const SurfaceAlgebra>;

// ---------------------------------------------------------------------------
// Presets: the worked examples of the source material.
// ---------------------------------------------------------------------------

namespace presets {

inline SurfacePtr p2() {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "p2";
    s->ring = make_ring({"r"});
    s->basis = {{"1", 0}, {"h", 2}, {"pt", 4}};
    s->unit_index = 0;
    s->point_index = 2;
    s->proper = true;
    size_t n = 3;
    s->mult.assign(n, std::vector<ClassVec>(n, s->zero_class()));
    auto set = [&](int i, int j, int k, Rat c) {
        s->mult[i][j][k] = Poly::constant(s->ring, c);
    };
    for (size_t i = 0; i < n; ++i) {
        s->mult[0][i] = s->basis_class((int)i);
        s->mult[i][0] = s->basis_class((int)i);
    }
    set(1, 1, 2, 1); // h.h = pt
    s->c1 = s->basis_class(1, Poly::constant(s->ring, 3));
    s->c2 = s->basis_class(2, Poly::constant(s->ring, 3));
    return s;
}

inline SurfacePtr p1xp1() {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "p1xp1";
    s->ring = make_ring({"r"});
    s->basis = {{"1", 0}, {"a", 2}, {"b", 2}, {"pt", 4}};
    s->unit_index = 0;
    s->point_index = 3;
    s->proper = true;
    size_t n = 4;
    s->mult.assign(n, std::vector<ClassVec>(n, s->zero_class()));
    for (size_t i = 0; i < n; ++i) {
        s->mult[0][i] = s->basis_class((int)i);
        s->mult[i][0] = s->basis_class((int)i);
    }
    s->mult[1][2][3] = Poly::constant(s->ring, 1);
    s->mult[2][1][3] = Poly::constant(s->ring, 1);
    ClassVec c1 = s->zero_class();
    c1[1] = Poly::constant(s->ring, 2);
    c1[2] = Poly::constant(s->ring, 2);
    s->c1 = c1;
    s->c2 = s->basis_class(3, Poly::constant(s->ring, 4));
    return s;
}

// Gram matrix of the K3 lattice: E8(-1) + E8(-1) + U + U + U.
inline std::vector<std::vector<int>> k3_gram() {
    // E8 Cartan matrix, chain 0-1-2-3-4-5-6 with node 7 attached to node 4
    int e8[8][8] = {};
    for (int i = 0; i < 8; ++i) e8[i][i] = 2;
    auto link = [&](int i, int j) { e8[i][j] = e8[j][i] = -1; };
    link(0, 1); link(1, 2); link(2, 3); link(3, 4); link(4, 5); link(5, 6);
    link(4, 7);
    std::vector<std::vector<int>> g(22, std::vector<int>(22, 0));
    for (int blk = 0; blk < 2; ++blk)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) g[blk * 8 + i][blk * 8 + j] = -e8[i][j];
    for (int u = 0; u < 3; ++u) {
        int o = 16 + 2 * u;
        g[o][o + 1] = g[o + 1][o] = 1;
    }
    return g;
}

inline SurfacePtr k3() {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "k3";
    s->ring = make_ring({"r"});
    s->basis.push_back({"1", 0});
    for (int i = 1; i <= 22; ++i)
        s->basis.push_back({"beta" + std::to_string(i), 2});
    s->basis.push_back({"pt", 4});
    s->unit_index = 0;
    s->point_index = 23;
    s->proper = true;
    size_t n = 24;
    s->mult.assign(n, std::vector<ClassVec>(n, s->zero_class()));
    for (size_t i = 0; i < n; ++i) {
        s->mult[0][i] = s->basis_class((int)i);
        s->mult[i][0] = s->basis_class((int)i);
    }
    auto g = k3_gram();
    for (int i = 0; i < 22; ++i)
        for (int j = 0; j < 22; ++j)
            if (g[i][j] != 0)
                s->mult[i + 1][j + 1][23] = Poly::constant(s->ring, Rat(g[i][j]));
    s->c1 = s->zero_class();
    s->c2 = s->basis_class(23, Poly::constant(s->ring, 24));
    return s;
}

// T*C for a genus-g curve: the ambient model is H*(C) with a formal point
// class; the compact ideal is the Thom-shifted copy of H*(C) in degrees
// 2..4.  gamma_i gamma_{g+i} = omega.
inline SurfacePtr tstar_curve(int g) {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "tstar-curve:g=" + std::to_string(g);
    s->ring = make_ring({"r"});
    s->basis.push_back({"1", 0});
    for (int i = 1; i <= 2 * g; ++i) s->basis.push_back({"gamma" + std::to_string(i), 1});
    int om = 2 * g + 1, pt = 2 * g + 2;
    s->basis.push_back({"omega", 2});
    s->basis.push_back({"pt", 4});
    s->unit_index = 0;
    s->point_index = pt;
    s->proper = false;
    size_t n = s->basis.size();
    s->mult.assign(n, std::vector<ClassVec>(n, s->zero_class()));
    for (size_t i = 0; i < n; ++i) {
        s->mult[0][i] = s->basis_class((int)i);
        s->mult[i][0] = s->basis_class((int)i);
    }
    for (int i = 1; i <= g; ++i) {
        s->mult[i][g + i][om] = Poly::constant(s->ring, 1);
        s->mult[g + i][i][om] = Poly::constant(s->ring, -1);
    }
    s->c1 = s->zero_class();
    s->c2 = s->zero_class();
    // compact ideal: tau*1 (deg 2), tau*gamma_i (deg 3), tau*omega (deg 4),
    // paired against H*(C) by \int_C; only tau*1 has a nonzero pushforward,
    // namely e(Omega_C) = (2g-2) omega.
    {
        CompactGen t;
        t.name = "tau";
        t.degree = 2;
        t.pairing.assign(n, Rat(0));
        t.pairing[om] = 1;
        t.image = s->basis_class(om, Poly::constant(s->ring, 2 * g - 2));
        s->compact.push_back(t);
    }
    for (int i = 1; i <= 2 * g; ++i) {
        CompactGen t;
        t.name = "tau*gamma" + std::to_string(i);
        t.degree = 3;
        t.pairing.assign(n, Rat(0));
        // <tau gamma_i, gamma_j> = \int_C gamma_i gamma_j
        if (i <= g) t.pairing[g + i] = 1;
        else t.pairing[i - g] = -1;
        t.image = s->zero_class();
        s->compact.push_back(t);
    }
    {
        CompactGen t;
        t.name = "tau*omega";
        t.degree = 4;
        t.pairing.assign(n, Rat(0));
        t.pairing[0] = 1;
        t.image = s->zero_class();
        s->compact.push_back(t);
    }
    // module tables: tau lambda . mu = tau(lambda mu), tau la . tau mu =
    // (2g-2) tau(omega la mu)
    {
        size_t m = s->compact.size();
        auto zc = [&]() { return std::vector<Poly>(m, Poly(s->ring)); };
        auto J = [&](int i, int j) -> int {
            if (j == i + g) return 1;
            if (i == j + g) return -1;
            return 0;
        };
        for (size_t a = 0; a < m; ++a) {
            s->compact[a].mult_basis.assign(n, zc());
            s->compact[a].mult_compact.assign(m, zc());
        }
        auto one = Poly::constant(s->ring, 1);
        // tau (index 0): tau.1 = tau, tau.gamma_i = taugamma_i, tau.omega = tauomega
        s->compact[0].mult_basis[0][0] = one;
        for (int i = 1; i <= 2 * g; ++i) s->compact[0].mult_basis[i][i] = one;
        s->compact[0].mult_basis[om][2 * g + 1] = one;
        // taugamma_i (index i): .1 = self; .gamma_j = J(i,j) tauomega
        for (int i = 1; i <= 2 * g; ++i) {
            s->compact[i].mult_basis[0][i] = one;
            for (int j = 1; j <= 2 * g; ++j)
                if (int c = J(i, j); c != 0)
                    s->compact[i].mult_basis[j][2 * g + 1] = Poly::constant(s->ring, Rat(c));
        }
        // tauomega: .1 = self
        s->compact[2 * g + 1].mult_basis[0][2 * g + 1] = one;
        // tau.tau = (2g-2) tauomega; all other compact products vanish
        s->compact[0].mult_compact[0][2 * g + 1] = Poly::constant(s->ring, Rat(2 * g - 2));
    }
    return s;
}

// A^2 with the 2-torus action; rank one over Q[t1,t2], compact ideal
// generated by t1 t2.
inline SurfacePtr a2_equivariant() {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "a2-equivariant";
    s->ring = make_ring({"r", "t1", "t2"});
    s->basis = {{"1", 0}, {"pt", 4}};
    s->unit_index = 0;
    s->point_index = 1;
    s->proper = false;
    s->mult.assign(2, std::vector<ClassVec>(2, s->zero_class()));
    s->mult[0][0] = s->basis_class(0);
    s->mult[0][1] = s->basis_class(1);
    s->mult[1][0] = s->basis_class(1);
    Poly t1 = Poly::variable(s->ring, "t1"), t2 = Poly::variable(s->ring, "t2");
    s->c1 = s->basis_class(0, t1 + t2);
    s->c2 = s->basis_class(0, t1 * t2);
    s->chern_roots = std::make_pair(t1, t2);
    CompactGen t;
    t.name = "tau";
    t.degree = 4;
    t.pairing = {Rat(1), Rat(0)};
    t.image = s->basis_class(0, t1 * t2);
    s->compact.push_back(t);
    return s;
}

// Smooth compactification of T*C (a ruled surface over C).  Used to compute
// inside W(Sbar) when the compactly-supported half of an open surface is
// needed; tau generates the pushforward of the compact ideal.
inline SurfacePtr ruled(int g) {
    auto s = std::make_shared<SurfaceAlgebra>();
    s->name = "ruled:g=" + std::to_string(g);
    s->ring = make_ring({"r"});
    s->basis.push_back({"1", 0});
    for (int i = 1; i <= 2 * g; ++i) s->basis.push_back({"gamma" + std::to_string(i), 1});
    int om = 2 * g + 1, tau = 2 * g + 2;
    s->basis.push_back({"omega", 2});
    s->basis.push_back({"tau", 2});
    for (int i = 1; i <= 2 * g; ++i) s->basis.push_back({"tau*gamma" + std::to_string(i), 3});
    int tg0 = 2 * g + 3;
    int pt = 4 * g + 3;
    s->basis.push_back({"pt", 4});
    s->unit_index = 0;
    s->point_index = pt;
    s->proper = true;
    size_t n = s->basis.size();
    s->mult.assign(n, std::vector<ClassVec>(n, s->zero_class()));
    for (size_t i = 0; i < n; ++i) {
        s->mult[0][i] = s->basis_class((int)i);
        s->mult[i][0] = s->basis_class((int)i);
    }
    auto one = Poly::constant(s->ring, 1);
    auto J = [&](int i, int j) -> int { // \int_C gamma_i gamma_j
        if (j == i + g) return 1;
        if (i == j + g) return -1;
        return 0;
    };
    for (int i = 1; i <= 2 * g; ++i)
        for (int j = 1; j <= 2 * g; ++j)
            if (int c = J(i, j); c != 0) {
                s->mult[i][j][om] = Poly::constant(s->ring, Rat(c));
                // (tau gamma_i).gamma_j = tau(gamma_i gamma_j)
                s->mult[tg0 + i - 1][j][pt] = Poly::constant(s->ring, Rat(c));
                s->mult[j][tg0 + i - 1][pt] = Poly::constant(s->ring, Rat(-c));
            }
    // gamma_i . tau = tau*gamma_i ; omega.tau = pt ; tau.tau = (2g-2) pt
    for (int i = 1; i <= 2 * g; ++i) {
        s->mult[i][tau][tg0 + i - 1] = one;
        s->mult[tau][i][tg0 + i - 1] = one;
    }
    s->mult[om][tau][pt] = one;
    s->mult[tau][om][pt] = one;
    s->mult[tau][tau][pt] = Poly::constant(s->ring, Rat(2 * g - 2));
    // c1 = 2 tau - (4g-4) omega; c2 = (4-4g) pt
    ClassVec c1 = s->zero_class();
    c1[tau] = Poly::constant(s->ring, 2);
    c1[om] = Poly::constant(s->ring, Rat(-(4 * g - 4)));
    s->c1 = c1;
    s->c2 = s->basis_class(pt, Poly::constant(s->ring, Rat(4 - 4 * g)));
    return s;
}

// Basis indices spanning the pushforward of H*_c inside the ruled model.
inline std::vector<int> ruled_compact_ideal(const SurfaceAlgebra &s, int g) {
    std::vector<int> out;
    out.push_back(2 * g + 2); // tau
    for (int i = 0; i < 2 * g; ++i) out.push_back(2 * g + 3 + i);
    out.push_back(4 * g + 3); // pt
    return out;
}

} // namespace presets

inline SurfacePtr preset_by_name(const std::string &name) {
    if (name == "p2") return presets::p2();
    if (name == "p1xp1") return presets::p1xp1();
    if (name == "k3") return presets::k3();
    if (name == "a2-equivariant") return presets::a2_equivariant();
    if (name.rfind("tstar-curve:g=", 0) == 0)
        return presets::tstar_curve(std::stoi(name.substr(14)));
    if (name.rfind("ruled:g=", 0) == 0)
        return presets::ruled(std::stoi(name.substr(8)));
    throw std::runtime_error("unknown surface preset: " + name);
}

} // namespace waver
