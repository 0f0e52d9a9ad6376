#pragma once

#include <cstdint>
#include <optional>

#include "acirc/circuit.hpp"
#include "acirc/poly.hpp"

namespace acirc {

struct PitVerdict {
    bool zero = false;
    mpq_class error_bound = 0; // exact upper bound on P(verdict Zero is wrong)
    std::optional<std::map<std::string, Fe>> witness; // point where values differ
};

/// Schwartz-Zippel equality test of two circuits over the same field:
/// k seeded random evaluations; Zero iff all agree. Exact arithmetic means
/// NonZero verdicts are never wrong; the error bound (d/|S|)^k applies to
/// Zero verdicts. Over F_p the sample set is the whole field (p > d
/// required); over Q the integers 0..2d.
PitVerdict pit_random(const Circuit& c1, const Circuit& c2, int trials, std::uint64_t seed);

/// Symbolic determinant identity testing instance: does
/// det(x_1 A_1 + ... + x_m A_m) vanish identically?
struct SditInstance {
    Field field = Field::rationals();
    std::size_t side = 0;
    std::vector<std::string> vars;                  // x_1..x_m, plus the padding variable
    std::vector<std::vector<std::vector<Fe>>> mats; // one matrix per variable
    std::string relation; // how det of the pencil relates to the source polynomial
};

/// Weakly-skew circuit -> pencil via the determinant projection; constant
/// entries are re-homogenized onto an auxiliary variable t, so
/// det(pencil)(t=1, x) equals the circuit's polynomial and the pencil
/// vanishes identically iff the polynomial is zero.
SditInstance sdit_build(const Circuit& c);

PitVerdict sdit_decide(const SditInstance& inst, int trials, std::uint64_t seed);

/// Deterministic grid test over {0..D}^k for k <= 4 variables; sound for
/// circuits of formal degree <= D.
PitVerdict grid_zero_test(const Circuit& c, std::uint64_t degree_bound);

enum class SlpVerdict { Zero, NonZero };

/// Deterministic zero test for variable-free constant-free mult-disjoint
/// circuits: evaluate modulo enough 31-bit primes that their product
/// exceeds 2^(size + degree + 1), the weight bound on the value.
SlpVerdict equ_slp(const Circuit& c);

} // namespace acirc
