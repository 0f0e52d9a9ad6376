#include "doctest.h"

#include "acirc/abp.hpp"
#include "testgen.hpp"

using namespace acirc;

namespace {

Poly pvar(const char* v) { return Poly::variable(v, 0); }

} // namespace

TEST_CASE("single input becomes a two-node one-edge program") {
    Circuit c = parse_circuit("field Q\nvar x\ng = input x\noutput g\n");
    Abp a = weakly_skew_to_abp(c);
    CHECK(a.num_nodes() == 2);
    CHECK(a.edges().size() == 1);
    CHECK(abp_expand(a) == pvar("x"));
}

TEST_CASE("xy + z within the formula bounds") {
    Circuit c = parse_circuit("field Q\nvar x y z\nix = input x\niy = input y\niz = input z\n"
                              "m = mul ix iy\ns = add m iz\noutput s\n");
    Abp a = weakly_skew_to_abp(c);
    CHECK(a.num_nodes() <= c.size() + 2);
    CHECK(a.edges().size() <= c.size() + 1);
    CHECK(abp_expand(a) == expand(c));
    CHECK(abp_expand_by_paths(a) == expand(c));
}

TEST_CASE("2 + 3 gives parallel edges summing to 5") {
    Circuit c = parse_circuit("field Q\na = const 2\nb = const 3\ns = add a b\noutput s\n");
    Abp a = weakly_skew_to_abp(c);
    CHECK(a.num_nodes() <= 3);
    CHECK(a.edges().size() <= 2);
    Poly five(Field::rationals().element(5));
    CHECK(abp_expand(a) == five);
    // the two constants stay on separate parallel edges
    CHECK(a.edges().size() == 2);
}

TEST_CASE("formula bounds: nodes <= m+2, edges <= m+1, on random formulas") {
    Rng rng(101);
    for (int i = 0; i < 300; ++i) {
        Circuit c = testgen::random_formula(rng, 1 + rng.below(10), 3);
        Abp a = weakly_skew_to_abp(c);
        CHECK(a.num_nodes() <= c.size() + 2);
        CHECK(a.edges().size() <= c.size() + 1);
        CHECK(abp_expand(a) == expand(c));
    }
}

TEST_CASE("general weakly-skew conversion: bounds measured, correctness exact") {
    // The m+2 / m+1 accounting is proved for formulas only; for shared DAGs
    // the suite measures how far the construction lands from it. Node count
    // stays within the formula bound; edge overshoot is reported and capped.
    Rng rng(103);
    std::size_t node_viol = 0, edge_viol = 0, worst_edges = 0, worst_m = 0;
    for (int i = 0; i < 300; ++i) {
        Circuit c = testgen::random_weakly_skew(rng, 2 + rng.below(8), 3, Field::rationals());
        REQUIRE(classify(c).is_weakly_skew);
        Abp a = weakly_skew_to_abp(c);
        CHECK(abp_expand(a) == expand(c));
        if (a.num_nodes() > c.size() + 2) ++node_viol;
        if (a.edges().size() > c.size() + 1) {
            ++edge_viol;
            if (a.edges().size() - c.size() > worst_edges - worst_m) {
                worst_edges = a.edges().size();
                worst_m = c.size();
            }
        }
        // never worse than one edge per input use plus one per shared read
        CHECK(a.edges().size() <= 2 * c.size() + 2);
    }
    CHECK(node_viol == 0);
    MESSAGE("edge bound m+1 exceeded on ", edge_viol,
            "/300 shared DAGs (formulas: never); worst ", worst_edges, " edges at m = ", worst_m);
}

TEST_CASE("conversion rejects non-weakly-skew circuits") {
    Circuit sq = parse_circuit("field Q\nvar x y\na = input x\nb = input y\n"
                               "g = mul a b\nh = mul g g\noutput h\n");
    CHECK_THROWS_WITH_AS(weakly_skew_to_abp(sq), doctest::Contains("NotWeaklySkew"), Error);
}

TEST_CASE("dp equals path enumeration on every small program") {
    Rng rng(107);
    for (int i = 0; i < 200; ++i) {
        Circuit c = testgen::random_formula(rng, 1 + rng.below(6), 3);
        Abp a = weakly_skew_to_abp(c);
        if (a.num_nodes() > 10) continue;
        CHECK(abp_expand(a) == abp_expand_by_paths(a));
    }
}

TEST_CASE("layered grid program: dp equals enumeration") {
    // s -> {a,b} -> {c,d} -> t with variable weights
    Abp a(Field::rationals(), {"s", "a", "b", "c", "d", "t"}, 0, 5);
    a.add_edge(0, 1, Weight::of_var("w1"));
    a.add_edge(0, 2, Weight::of_var("w2"));
    a.add_edge(1, 3, Weight::of_var("w3"));
    a.add_edge(1, 4, Weight::of_var("w4"));
    a.add_edge(2, 3, Weight::of_var("w5"));
    a.add_edge(2, 4, Weight::of_var("w6"));
    a.add_edge(3, 5, Weight::of_var("w7"));
    a.add_edge(4, 5, Weight::of_var("w8"));
    CHECK(abp_expand(a) == abp_expand_by_paths(a));
    CHECK(abp_expand(a).term_count() == 4);
}

TEST_CASE("two parallel edges and a two-edge path") {
    Abp par(Field::rationals(), {"s", "t"}, 0, 1);
    par.add_edge(0, 1, Weight::of_var("x"));
    par.add_edge(0, 1, Weight::of_var("y"));
    CHECK(abp_expand(par) == pvar("x") + pvar("y"));

    Abp path(Field::rationals(), {"s", "m", "t"}, 0, 2);
    path.add_edge(0, 1, Weight::of_var("x"));
    path.add_edge(1, 2, Weight::of_var("y"));
    CHECK(abp_expand(path) == pvar("x") * pvar("y"));
}

TEST_CASE("series multiplies, parallel adds") {
    Rng rng(109);
    for (int i = 0; i < 50; ++i) {
        Circuit c1 = testgen::random_formula(rng, 1 + rng.below(4), 2);
        Circuit c2 = testgen::random_formula(rng, 1 + rng.below(4), 2);
        Abp a1 = weakly_skew_to_abp(c1);
        Abp a2 = weakly_skew_to_abp(c2);
        CHECK(abp_expand(abp_series(a1, a2)) == expand(c1) * expand(c2));
        CHECK(abp_expand(abp_parallel(a1, a2)) == expand(c1) + expand(c2));
    }
}

TEST_CASE("abp to skew circuit") {
    SUBCASE("single edge") {
        Abp a(Field::rationals(), {"s", "t"}, 0, 1);
        a.add_edge(0, 1, Weight::of_var("x"));
        Circuit c = abp_to_skew_circuit(a);
        CHECK(c.size() <= 1);
        CHECK(expand(c) == pvar("x"));
        CHECK(classify(c).is_skew);
    }
    SUBCASE("round trip over random weakly-skew circuits") {
        Rng rng(113);
        for (int i = 0; i < 200; ++i) {
            Circuit c = testgen::random_weakly_skew(rng, 1 + rng.below(6), 3, Field::rationals());
            Abp a = weakly_skew_to_abp(c);
            Circuit skew = abp_to_skew_circuit(a);
            auto fl = classify(skew);
            CHECK(fl.is_skew);
            CHECK(fl.is_weakly_skew); // weight inputs are freshly copied
            CHECK(expand(skew) == expand(c));
            // one mul per non-source edge plus the fan-in adds
            std::size_t V = a.num_nodes(), E = a.edges().size();
            CHECK(skew.size() + V <= 2 * E + 1);
            // the remark's accounting applies when edges <= nodes - 1
            if (E + 1 <= V) CHECK(skew.size() <= V - 2);
        }
    }
}

TEST_CASE("abp eval against expansion") {
    Rng rng(127);
    for (int i = 0; i < 100; ++i) {
        Circuit c = testgen::random_formula(rng, 1 + rng.below(8), 3, 0, Field::prime(101));
        Abp a = weakly_skew_to_abp(c);
        auto pt = testgen::random_point(rng, c);
        CHECK(abp_eval(a, pt) == abp_expand(a).evaluate(pt, c.field()));
        CHECK(abp_eval(a, pt) == evaluate(c, pt)[0]);
    }
}

TEST_CASE("abp file format round-trips") {
    Rng rng(131);
    Circuit c = testgen::random_formula(rng, 6, 3);
    Abp a = weakly_skew_to_abp(c);
    std::string text = serialize_abp(a);
    Abp b = parse_abp(text);
    CHECK(serialize_abp(b) == text);
    CHECK(abp_expand(b) == abp_expand(a));
    CHECK_THROWS_AS(parse_abp("abp\nnode s\nsource s\nsink t\n"), Error);
}
