#include <catch2/catch_amalgamated.hpp>

#include "waver/surface.hpp"

using namespace waver;

namespace {

std::vector<SurfacePtr> all_presets() {
    return {presets::p2(),          presets::p1xp1(), presets::k3(),
            presets::tstar_curve(2), presets::a2_equivariant(), presets::ruled(2)};
}

// power-series long division oracle for x t/(1-e^{-tx}), coefficients in t
std::vector<Poly> todd_factor_series(const Poly &t, int order) {
    auto ring = t.ring();
    // denominator/x = sum_{k>=1} (-1)^{k+1} t^k x^{k-1} / k!
    std::vector<Poly> den(order + 1, Poly(ring));
    for (int k = 1; k <= order + 1; ++k) {
        Rat c = Rat((k % 2) ? 1 : -1) / Rat(factorial(k));
        den[k - 1] = t.pow(k) * c;
    }
    // invert den (den[0] = t, a unit only if t is... use: series q with q*den = t)
    // we want f = t / (den), i.e. f*den = t as series in x
    std::vector<Poly> f(order + 1, Poly(ring));
    // den[0] = t; dividing exactly at every step keeps everything polynomial
    f[0] = Poly::constant(ring, 1);
    for (int n = 1; n <= order; ++n) {
        Poly s(ring);
        for (int k = 1; k <= n; ++k) s += f[n - k] * den[k];
        f[n] = poly_divide_exact(-s, den[0]);
    }
    return f;
}

} // namespace

TEST_CASE("preset ring axioms") {
    for (auto &sa : all_presets()) {
        INFO(sa->name);
        size_t n = sa->dim();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                ClassVec bi = sa->basis_class((int)i), bj = sa->basis_class((int)j);
                ClassVec ij = sa->class_mul(bi, bj);
                // degree additivity
                for (size_t k = 0; k < n; ++k)
                    if (!ij[k].is_zero()) {
                        int dk = sa->basis[k].degree +
                                 ij[k].weighted_degree(sa->base_weights());
                        CHECK(dk == sa->basis[i].degree + sa->basis[j].degree);
                    }
                // super-commutativity
                ClassVec ji = sa->class_mul(bj, bi);
                int sgn = (sa->basis[i].odd() && sa->basis[j].odd()) ? -1 : 1;
                CHECK(sa->class_eq(ij, sa->class_scale(ji, Rat(sgn))));
                // associativity
                for (size_t k = 0; k < n; ++k) {
                    ClassVec bk = sa->basis_class((int)k);
                    CHECK(sa->class_eq(sa->class_mul(ij, bk),
                                       sa->class_mul(bi, sa->class_mul(bj, bk))));
                }
            }
        // odd squares vanish
        for (size_t i = 0; i < n; ++i)
            if (sa->basis[i].odd()) {
                ClassVec sq = sa->class_mul(sa->basis_class((int)i), sa->basis_class((int)i));
                CHECK(sa->class_is_zero(sq));
            }
    }
}

TEST_CASE("derive_s2") {
    auto k3 = presets::k3();
    ClassVec s2 = k3->derive_s2();
    CHECK(k3->class_eq(s2, k3->basis_class(k3->point_index,
                                           Poly::constant(k3->ring, -24))));

    auto tc = presets::tstar_curve(2);
    CHECK(tc->class_is_zero(tc->derive_s2()));

    auto a2 = presets::a2_equivariant();
    Poly t1 = Poly::variable(a2->ring, "t1"), t2 = Poly::variable(a2->ring, "t2");
    ClassVec expect = a2->basis_class(0, t1 * t1 + t1 * t2 + t2 * t2);
    CHECK(a2->class_eq(a2->derive_s2(), expect));
}

TEST_CASE("todd coefficients") {
    for (auto &sa : all_presets()) {
        auto td = sa->todd_coefficients(1);
        CHECK(sa->class_eq(td[0], sa->unit()));
        CHECK(sa->class_eq(td[1], sa->class_scale(sa->c1, Rat(1, 2))));
    }
    auto k3 = presets::k3();
    auto td = k3->todd_coefficients(2);
    CHECK(k3->class_is_zero(td[1]));
    CHECK(k3->class_eq(td[2], k3->basis_class(k3->point_index,
                                              Poly::constant(k3->ring, 2))));

    auto a2 = presets::a2_equivariant();
    Poly t1 = Poly::variable(a2->ring, "t1"), t2 = Poly::variable(a2->ring, "t2");
    auto td3 = a2->todd_coefficients(3);
    CHECK(td3[3] == a2->basis_class(0, t1 * t2 * (t1 + t2) * Rat(1, 24)));

    // series-division oracle for the two-factor product
    auto f1 = todd_factor_series(t1, 5), f2 = todd_factor_series(t2, 5);
    auto td5 = a2->todd_coefficients(5);
    for (int k = 0; k <= 5; ++k) {
        Poly prod(a2->ring);
        for (int i = 0; i <= k; ++i) prod += f1[i] * f2[k - i];
        CHECK(td5[k][0] == prod);
        CHECK(td5[k][1].is_zero());
    }
}

TEST_CASE("diagonal tensors") {
    auto p2 = presets::p2();
    auto &d = p2->diagonal();
    // 1 x pt + h x h + pt x 1
    REQUIRE(d.terms.size() == 3);
    for (auto &t : d.terms) {
        CHECK(t.coeff == Poly::constant(p2->ring, 1));
        if (t.left == 0) CHECK(t.right == 2);
        if (t.left == 1) CHECK(t.right == 1);
        if (t.left == 2) CHECK(t.right == 0);
    }

    auto a2 = presets::a2_equivariant();
    auto &da = a2->diagonal();
    REQUIRE(da.image_terms.size() == 1);
    Poly t1 = Poly::variable(a2->ring, "t1"), t2 = Poly::variable(a2->ring, "t2");
    CHECK(da.image_terms[0].left == 0);
    CHECK(da.image_terms[0].right == 0);
    CHECK(da.image_terms[0].coeff == t1 * t2);
}

TEST_CASE("diagonal pairing round trip") {
    // contracting the diagonal against a basis class reproduces the class
    for (auto &sa : {presets::p2(), presets::p1xp1(), presets::k3(), presets::ruled(2)}) {
        auto &d = sa->diagonal();
        for (size_t m = 0; m < sa->dim(); ++m) {
            ClassVec mu = sa->basis_class((int)m);
            ClassVec acc = sa->zero_class();
            for (auto &t : d.terms) {
                Poly w = sa->trace(sa->class_mul(mu, sa->basis_class(t.right))) * t.coeff;
                acc = sa->class_add(acc, sa->class_scale(sa->basis_class(t.left), w));
            }
            CHECK(sa->class_eq(acc, mu));
        }
    }
    // open presets: contraction through the compact pairing
    for (auto &sa : {presets::tstar_curve(2), presets::a2_equivariant()}) {
        auto &d = sa->diagonal();
        REQUIRE(d.right_is_compact);
        for (size_t m = 0; m < sa->dim(); ++m) {
            if ((int)m == sa->point_index) continue;
            ClassVec mu = sa->basis_class((int)m);
            ClassVec acc = sa->zero_class();
            for (auto &t : d.terms) {
                Rat pr = sa->compact[t.right].pairing[m];
                acc = sa->class_add(acc, sa->class_scale(sa->basis_class(t.left),
                                                         t.coeff * pr));
            }
            CHECK(sa->class_eq(acc, mu));
        }
    }
}

TEST_CASE("mukai pairing") {
    auto p2 = presets::p2();
    auto delta = p2->point_kclass();
    CHECK(p2->mukai_pairing(delta, delta).is_zero());

    // <alpha, delta> = <delta, alpha> = rk(alpha)
    SurfaceAlgebra::KClass alpha{Poly::constant(p2->ring, 5),
                                 p2->basis_class(1, Poly::constant(p2->ring, 7)),
                                 p2->basis_class(2, Poly::constant(p2->ring, 3))};
    CHECK(p2->mukai_pairing(alpha, delta) == Poly::constant(p2->ring, 5));
    CHECK(p2->mukai_pairing(delta, alpha) == Poly::constant(p2->ring, 5));

    // chi(O_P2) = \int Td = (c1^2 + c2)/12 = 1
    SurfaceAlgebra::KClass structure{Poly::constant(p2->ring, 1), p2->zero_class(),
                                     p2->zero_class()};
    CHECK(p2->mukai_pairing(structure, structure) == Poly::constant(p2->ring, 1));

    // same identities on the open equivariant preset
    auto a2 = presets::a2_equivariant();
    auto da = a2->point_kclass();
    SurfaceAlgebra::KClass beta{Poly::constant(a2->ring, 2), a2->zero_class(),
                                a2->zero_class()};
    CHECK(a2->mukai_pairing(beta, da) == Poly::constant(a2->ring, 2));
    CHECK(a2->mukai_pairing(da, da).is_zero());
}
