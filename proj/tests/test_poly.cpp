#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "waver/poly.hpp"

using namespace waver;

namespace {

Poly random_poly(PolyRingPtr ring, std::mt19937_64 &rng, int max_terms = 4,
                 int max_exp = 3) {
    std::uniform_int_distribution<int> nt(0, max_terms);
    std::uniform_int_distribution<int> ex(0, max_exp);
    std::uniform_int_distribution<long> co(-6, 6);
    Poly p(ring);
    int n = nt(rng);
    for (int i = 0; i < n; ++i) {
        Poly::Exp e(ring->size());
        for (auto &x : e) x = ex(rng);
        p.add_term(e, Rat(co(rng)));
    }
    return p;
}

} // namespace

TEST_CASE("poly_binomial basics") {
    auto ring = make_ring({"r"});
    Poly r = Poly::variable(ring, "r");

    CHECK(poly_binomial(r, 0) == Poly::constant(ring, 1));

    Poly b2 = poly_binomial(r, 2); // (r^2 - r)/2
    Poly expect = (r * r - r) * Rat(1, 2);
    CHECK(b2 == expect);

    // (r-1 choose 2) = (r^2 - 3r + 2)/2, expanded by hand
    Poly rm1 = r - Poly::constant(ring, 1);
    Poly b = poly_binomial(rm1, 2);
    Poly expect2 = (r * r - r * Rat(3) + Poly::constant(ring, 2)) * Rat(1, 2);
    CHECK(b == expect2);
}

TEST_CASE("poly_binomial matches integer binomial at integer points") {
    auto ring = make_ring({"r"});
    Poly r = Poly::variable(ring, "r");
    for (int n = 0; n <= 8; ++n)
        for (unsigned k = 0; k <= 8; ++k) {
            Poly b = poly_binomial(r, k).substitute(0, Rat((long)n));
            // brute-force factorial oracle
            Rat expect = (k <= (unsigned)n)
                             ? Rat(factorial(n)) / (Rat(factorial(k)) * Rat(factorial(n - k)))
                             : Rat(0);
            CHECK(b.constant_value() == expect);
        }
}

TEST_CASE("exact division") {
    auto ring = make_ring({"r", "t1", "t2", "u"});
    Poly t1 = Poly::variable(ring, "t1");
    Poly t2 = Poly::variable(ring, "t2");
    Poly u = Poly::variable(ring, "u");

    CHECK(poly_divide_exact(t1 * t2, t1 * t2) == Poly::constant(ring, 1));
    CHECK(poly_divide_exact(t1 * t2 * Rat(2), t1 * t2) == Poly::constant(ring, 2));

    // f_3 numerator: 6 t1 t2 u - 3 t1 t2 (t1 + t2)
    Poly num = t1 * t2 * u * Rat(6) - t1 * t2 * (t1 + t2) * Rat(3);
    Poly q = poly_divide_exact(num, t1 * t2);
    CHECK(q == u * Rat(6) - (t1 + t2) * Rat(3));

    CHECK_THROWS_AS(poly_divide_exact(t1 + t2, t1 * t2), NonExactDivision);
}

TEST_CASE("ring axioms on random triples") {
    auto ring = make_ring({"r", "t1", "t2"});
    std::mt19937_64 rng(20240815);
    for (int it = 0; it < 200; ++it) {
        Poly a = random_poly(ring, rng), b = random_poly(ring, rng),
             c = random_poly(ring, rng);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
        CHECK(a - a == Poly(ring));
    }
}

TEST_CASE("substitution") {
    auto ring = make_ring({"r", "t1"});
    Poly r = Poly::variable(ring, "r");
    Poly t = Poly::variable(ring, "t1");
    Poly p = r * r * t + t * Rat(2);
    CHECK(p.substitute(0, Rat(3)) == t * Rat(11));
    CHECK(p.weighted_degree({0, 2}) == 2);
}
