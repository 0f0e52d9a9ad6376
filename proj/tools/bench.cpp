// Serial-vs-parallel micro-benchmark for the OpenMP kernels: Ryser's
// subset walk, polynomial products, and randomized PIT trials. The parallel
// paths must produce bit-identical values; this binary checks that while
// timing both.

#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "acirc/perm.hpp"
#include "acirc/pit.hpp"
#include "acirc/rng.hpp"

using namespace acirc;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

void bench_ryser(std::size_t n) {
    Field f = Field::prime(2147483647);
    Rng rng(1);
    std::vector<std::vector<Fe>> m(n, std::vector<Fe>(n, f.zero()));
    for (auto& row : m)
        for (auto& x : row) x = f.element(static_cast<long>(rng.below(1 << 20)));

    auto t0 = Clock::now();
    Fe serial = ryser_reference(m, f);
    auto t1 = Clock::now();
    Fe parallel = ryser(m, f);
    auto t2 = Clock::now();
    std::cout << "ryser n=" << n << ": reference " << seconds(t0, t1) << "s, gray-code";
#ifdef _OPENMP
    std::cout << "+omp(" << omp_get_max_threads() << ")";
#endif
    std::cout << " " << seconds(t1, t2) << "s, equal=" << (serial == parallel ? "yes" : "NO")
              << ", value=" << parallel.str() << "\n";
    if (!(serial == parallel)) std::exit(1);
}

void bench_poly_mul(std::size_t terms) {
    Field f = Field::prime(101);
    Rng rng(2);
    Poly a, b;
    for (std::size_t i = 0; i < terms; ++i) {
        Monomial m1{{"x", static_cast<std::uint32_t>(rng.below(40))},
                    {"y", static_cast<std::uint32_t>(rng.below(40))}};
        Monomial m2{{"y", static_cast<std::uint32_t>(rng.below(40))},
                    {"z", static_cast<std::uint32_t>(rng.below(40))}};
        a.add_term(m1, f.element(static_cast<long>(1 + rng.below(100))));
        b.add_term(m2, f.element(static_cast<long>(1 + rng.below(100))));
    }
#ifdef _OPENMP
    int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    auto t0 = Clock::now();
    Poly serial = a * b;
    auto t1 = Clock::now();
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    Poly parallel = a * b;
    auto t2 = Clock::now();
    std::cout << "poly-mul " << a.term_count() << "x" << b.term_count() << " -> "
              << parallel.term_count() << " terms: 1-thread " << seconds(t0, t1) << "s, parallel "
              << seconds(t1, t2) << "s, equal=" << (serial == parallel ? "yes" : "NO") << "\n";
    if (!(serial == parallel)) std::exit(1);
}

void bench_pit(int trials) {
    // two presentations of (x+y+z)^8 over F_p
    std::string lhs = "field Fp 1000003\nvar x y z\nix = input x\niy = input y\niz = input z\n"
                      "s1 = add ix iy\ns = add s1 iz\np1 = mul s s\np2 = mul p1 p1\np3 = mul p2 p2\noutput p3\n";
    std::string rhs = "field Fp 1000003\nvar x y z\nix = input x\niy = input y\niz = input z\n"
                      "s1 = add iy ix\ns = add iz s1\np1 = mul s s\np2 = mul p1 p1\np3 = mul p2 p2\noutput p3\n";
    Circuit c1 = parse_circuit(lhs), c2 = parse_circuit(rhs);
    auto t0 = Clock::now();
    auto v = pit_random(c1, c2, trials, 42);
    auto t1 = Clock::now();
    std::cout << "pit " << trials << " trials: " << seconds(t0, t1)
              << "s, verdict=" << (v.zero ? "zero" : "nonzero") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? std::stoul(argv[1]) : 18;
    bench_ryser(n);
    bench_poly_mul(600);
    bench_pit(200);
    return 0;
}
