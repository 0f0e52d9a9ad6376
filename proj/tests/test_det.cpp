#include "doctest.h"

#include "acirc/det.hpp"
#include "acirc/perm.hpp"
#include "testgen.hpp"

using namespace acirc;

namespace {

Poly pvar(const char* v) { return Poly::variable(v, 0); }

AtomMatrix random_atom_matrix(Rng& rng, std::size_t n, const Field& f, int nvars) {
    AtomMatrix m = atom_matrix_zero(n, f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            switch (rng.below(3)) {
                case 0: m[i][j] = Atom::of_const(f.element(static_cast<long>(rng.below(7)) - 3)); break;
                case 1: m[i][j] = Atom::of_var("v" + std::to_string(rng.below(nvars))); break;
                default: break; // keep zero
            }
        }
    return m;
}

} // namespace

TEST_CASE("2x2 symbolic determinant") {
    Field q = Field::rationals();
    AtomMatrix m = atom_matrix_zero(2, q);
    m[0][0] = Atom::of_var("a");
    m[0][1] = Atom::of_var("b");
    m[1][0] = Atom::of_var("c");
    m[1][1] = Atom::of_var("d");
    CHECK(symbolic_det(m, q) == pvar("a") * pvar("d") - pvar("b") * pvar("c"));
}

TEST_CASE("generic 3x3 determinant has six signed terms of degree 3") {
    Field q = Field::rationals();
    AtomMatrix m = atom_matrix_zero(3, q);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = Atom::of_var("x" + std::to_string(i + 1) + std::to_string(j + 1));
    Poly d = symbolic_det_leibniz(m, q);
    CHECK(d.term_count() == 6);
    CHECK(d.degree() == 3);
    CHECK(d == symbolic_det_cycle_covers(m, q));
}

TEST_CASE("leibniz and cycle covers agree on random mixed matrices") {
    Field q = Field::rationals();
    Rng rng(301);
    for (int i = 0; i < 100; ++i) {
        AtomMatrix m = random_atom_matrix(rng, 4, q, 3);
        CHECK(symbolic_det_leibniz(m, q) == symbolic_det_cycle_covers(m, q));
    }
}

TEST_CASE("per2 sign trick: det[[a,-b],[c,d]] = per[[a,b],[c,d]]") {
    Field q = Field::rationals();
    AtomMatrix t = per2_sign_trick();
    AtomMatrix p = atom_matrix_zero(2, q);
    p[0][0] = Atom::of_var("a");
    p[0][1] = Atom::of_var("b");
    p[1][0] = Atom::of_var("c");
    p[1][1] = Atom::of_var("d");
    CHECK(symbolic_det(t, q) == brute_per(p, q));
}

TEST_CASE("abp_to_det_projection on xy + z") {
    Circuit c = parse_circuit("field Q\nvar x y z\nix = input x\niy = input y\niz = input z\n"
                              "m = mul ix iy\ns = add m iz\noutput s\n");
    Abp a = weakly_skew_to_abp(c);
    ProjectionMatrix proj = abp_to_det_projection(a);
    CHECK(symbolic_det(proj.matrix, proj.field) == expand(c));
    CHECK(proj.diagonal_zero_one());
    CHECK(proj.side() == 3); // m+1 after the z edge is subdivided
}

TEST_CASE("single-edge abp gives the 1x1 matrix [x]") {
    Abp a(Field::rationals(), {"s", "t"}, 0, 1);
    a.add_edge(0, 1, Weight::of_var("x"));
    ProjectionMatrix proj = abp_to_det_projection(a);
    CHECK(proj.side() == 1);
    CHECK(symbolic_det(proj.matrix, proj.field) == pvar("x"));
    CHECK(!proj.matrix[0][0].neg);
}

TEST_CASE("textbook intermediate: fully negated matrix has det = -f") {
    Rng rng(307);
    for (int i = 0; i < 100; ++i) {
        Circuit c = testgen::random_weakly_skew(rng, 1 + rng.below(6), 3, Field::rationals());
        Abp a = weakly_skew_to_abp(c);
        AtomMatrix m0 = abp_to_det_negated(a);
        if (m0.size() > 8) continue;
        CHECK(symbolic_det(m0, c.field()) == Poly(c.field().zero()) - expand(c));
    }
}

TEST_CASE("determinant universality on random weakly-skew circuits") {
    for (auto field : {Field::rationals(), Field::prime(101)}) {
        Rng rng(311);
        for (int i = 0; i < 100; ++i) {
            Circuit c = testgen::random_weakly_skew(rng, 1 + rng.below(8), 4, field);
            Abp a = weakly_skew_to_abp(c);
            ProjectionMatrix proj = abp_to_det_projection(a);
            if (proj.side() <= 8) {
                CHECK(symbolic_det(proj.matrix, field) == expand(c));
            } else {
                for (int t = 0; t < 5; ++t) {
                    auto pt = testgen::random_point(rng, c);
                    CHECK(eval_atom_matrix_det(proj.matrix, field, pt) == evaluate(c, pt)[0]);
                }
            }
            // side 1 is the trivial projection; its entry is the weight itself
            CHECK((proj.side() == 1 || proj.diagonal_zero_one()));
            CHECK(proj.offdiag_nonzeros() <= proj.abp_edges);
        }
    }
}

TEST_CASE("dc certificate: affine matrix of side <= size+1 with det = f") {
    Rng rng(313);
    for (int i = 0; i < 100; ++i) {
        Circuit c = testgen::random_formula(rng, 1 + rng.below(7), 3);
        DcCertificate cert = formula_dc_certificate(c);
        CHECK(cert.side() <= c.size() + 1);
        CHECK(symbolic_det_affine(cert) == expand(c));
    }
}

TEST_CASE("det by elimination matches leibniz on constant matrices") {
    for (auto field : {Field::rationals(), Field::prime(7)}) {
        Rng rng(317);
        for (int i = 0; i < 50; ++i) {
            std::size_t n = 1 + rng.below(5);
            AtomMatrix m = atom_matrix_zero(n, field);
            std::vector<std::vector<Fe>> num(n, std::vector<Fe>(n, field.zero()));
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t col = 0; col < n; ++col) {
                    num[r][col] = field.element(static_cast<long>(rng.below(11)) - 5);
                    m[r][col] = Atom::of_const(num[r][col]);
                }
            Poly d = symbolic_det_leibniz(m, field);
            Fe want = d.is_zero() ? field.zero() : d.terms().begin()->second;
            CHECK(det_by_elimination(num, field) == want);
        }
    }
}

TEST_CASE("csanky on diag(2,3)") {
    Field q = Field::rationals();
    auto c = csanky_charpoly({{q.element(2), q.zero()}, {q.zero(), q.element(3)}}, q);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == q.element(5));
    CHECK(c[1] == q.element(-6));
}

TEST_CASE("csanky on the zero matrix") {
    Field q = Field::rationals();
    std::vector<std::vector<Fe>> z(4, std::vector<Fe>(4, q.zero()));
    for (const Fe& ci : csanky_charpoly(z, q)) CHECK(ci.is_zero());
}

TEST_CASE("csanky cross-checked against det(tI - A)") {
    Field q = Field::rationals();
    Rng rng(331);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 1 + rng.below(5);
        std::vector<std::vector<Fe>> a(n, std::vector<Fe>(n, q.zero()));
        for (auto& row : a)
            for (auto& x : row) x = q.element(static_cast<long>(rng.below(9)) - 4);
        auto c = csanky_charpoly(a, q);
        Fe t = q.element(7);
        // t^n - c1 t^(n-1) - ... - cn
        Fe viaC = t.pow(n);
        for (std::size_t i = 0; i < n; ++i) viaC = viaC - c[i] * t.pow(n - 1 - i);
        std::vector<std::vector<Fe>> m(n, std::vector<Fe>(n, q.zero()));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? t : q.zero()) - a[i][j];
        CHECK(viaC == det_by_elimination(m, q));
    }
}

TEST_CASE("csanky requires characteristic 0 or p > n") {
    Field f5 = Field::prime(5);
    std::vector<std::vector<Fe>> a(6, std::vector<Fe>(6, f5.one()));
    CHECK_THROWS_WITH_AS(csanky_charpoly(a, f5), doctest::Contains("CharacteristicTooSmall"), Error);
    // p = 7 > n = 6 is fine
    Field f7 = Field::prime(7);
    std::vector<std::vector<Fe>> b(6, std::vector<Fe>(6, f7.one()));
    CHECK(csanky_charpoly(b, f7).size() == 6);
}

TEST_CASE("berkowitz circuit: n = 1") {
    Circuit c = berkowitz_det_circuit(1, Field::rationals());
    CHECK(expand(c) == pvar("x1_1"));
}

TEST_CASE("berkowitz circuit equals the generic determinant for n <= 4") {
    Field q = Field::rationals();
    for (std::size_t n = 1; n <= 4; ++n) {
        Circuit c = berkowitz_det_circuit(n, q);
        AtomMatrix g = atom_matrix_zero(n, q);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g[i][j] = Atom::of_var("x" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
        CHECK(expand(c) == symbolic_det_leibniz(g, q));
        auto fl = classify(c);
        CHECK(fl.is_weakly_skew);
        CHECK(fl.is_constant_free);
    }
}

TEST_CASE("berkowitz at random points over F2 and F101, n up to 8") {
    for (std::uint64_t p : {2ull, 101ull}) {
        Field f = Field::prime(p);
        Rng rng(337 + p);
        for (std::size_t n : {5, 6, 8}) {
            Circuit c = berkowitz_det_circuit(n, f);
            for (int t = 0; t < 5; ++t) {
                std::map<std::string, Fe> pt;
                std::vector<std::vector<Fe>> num(n, std::vector<Fe>(n, f.zero()));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        Fe v = f.element(static_cast<long>(rng.below(p)));
                        num[i][j] = v;
                        pt["x" + std::to_string(i + 1) + "_" + std::to_string(j + 1)] = v;
                    }
                CHECK(evaluate(c, pt)[0] == det_by_elimination(num, f));
            }
        }
    }
}

TEST_CASE("berkowitz size is O(n^4)") {
    double worst = 0;
    for (std::size_t n = 2; n <= 8; ++n) {
        Circuit c = berkowitz_det_circuit(n, Field::rationals());
        worst = std::max(worst, double(c.size()) / (double(n) * n * n * n));
    }
    CHECK(worst <= 3.0);
    MESSAGE("berkowitz size constant C = ", worst);
}

TEST_CASE("projection matrix files round-trip") {
    Circuit c = parse_circuit("field Q\nvar x y z\nix = input x\niy = input y\niz = input z\n"
                              "m = mul ix iy\ns = add m iz\noutput s\n");
    ProjectionMatrix proj = abp_to_det_projection(weakly_skew_to_abp(c));
    proj.target = expand(c);
    proj.target_hash = poly_hash(*proj.target);
    std::string text = serialize_projection(proj);
    ProjectionMatrix back = parse_projection(text);
    CHECK(back.side() == proj.side());
    CHECK(back.target.has_value());
    CHECK(*back.target == *proj.target);
    CHECK(serialize_projection(back) == text);
    CHECK(symbolic_det(back.matrix, back.field) == *back.target);
}

TEST_CASE("weakly-skew -> abp -> det pipeline, exact, 200 circuits") {
    Rng rng(347);
    for (int i = 0; i < 200; ++i) {
        Field f = i % 2 ? Field::rationals() : Field::prime(101);
        Circuit c = testgen::random_weakly_skew(rng, 1 + rng.below(8), 4, f);
        ProjectionMatrix proj = abp_to_det_projection(weakly_skew_to_abp(c));
        if (proj.side() > 8) continue;
        CHECK(symbolic_det(proj.matrix, f) == expand(c));
    }
}

namespace {

// independent oracle for small integer determinants
long long cofactor_det_i64(std::vector<std::vector<long long>> m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    long long acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0) continue;
        std::vector<std::vector<long long>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<long long> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(row);
        }
        long long term = m[0][j] * cofactor_det_i64(minor);
        acc += (j % 2) ? -term : term;
    }
    return acc;
}

} // namespace

TEST_CASE("berkowitz at integer matrices matches cofactor expansion, n <= 5") {
    Field q = Field::rationals();
    Rng rng(353);
    for (std::size_t n = 1; n <= 5; ++n) {
        Circuit c = berkowitz_det_circuit(n, q);
        for (int rep = 0; rep < 5; ++rep) {
            std::map<std::string, Fe> pt;
            std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    long v = static_cast<long>(rng.below(9)) - 4;
                    m[i][j] = v;
                    pt["x" + std::to_string(i + 1) + "_" + std::to_string(j + 1)] = q.element(v);
                }
            CHECK(evaluate(c, pt)[0] == q.element(cofactor_det_i64(m)));
        }
    }
}
