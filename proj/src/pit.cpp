#include "acirc/pit.hpp"

#include <algorithm>
#include <cmath>

#include "acirc/abp.hpp"
#include "acirc/det.hpp"
#include "acirc/rng.hpp"

namespace acirc {

namespace {

struct SampleSpace {
    std::uint64_t size; // |S|
    long offset;        // over Q: sample offset + [0, size)
};

SampleSpace sample_space(const Field& f, std::uint64_t degree) {
    if (f.is_prime_field()) {
        if (f.characteristic() <= degree)
            fail(Errc::FieldTooSmall, "p = " + std::to_string(f.characteristic()) +
                                          " but degree bound is " + std::to_string(degree));
        return {f.characteristic(), 0};
    }
    return {2 * degree + 1, 0};
}

Fe draw(const Field& f, const SampleSpace& s, Rng& rng) {
    return f.element(static_cast<long>(rng.below(s.size)) + s.offset);
}

} // namespace

PitVerdict pit_random(const Circuit& c1, const Circuit& c2, int trials, std::uint64_t seed) {
    if (!(c1.field() == c2.field())) fail(Errc::FieldMismatch, "pit_random");
    if (trials < 1) fail(Errc::ParamOutOfRange, "trials >= 1");
    const Field& f = c1.field();
    std::uint64_t d = std::max<std::uint64_t>(
        {1, metrics(c1).formal_degree, metrics(c2).formal_degree});
    SampleSpace s = sample_space(f, d);

    std::set<std::string> vars(c1.vars().begin(), c1.vars().end());
    vars.insert(c2.vars().begin(), c2.vars().end());

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::map<std::string, Fe> pt;
        for (const auto& v : vars) pt[v] = draw(f, s, rng);
        Fe a = evaluate(c1, pt)[0];
        Fe b = evaluate(c2, pt)[0];
        if (!(a == b)) {
            // exact arithmetic: a differing point is a proof of inequality
            if (evaluate(c1, pt)[0] == evaluate(c2, pt)[0])
                fail(Errc::BadMatrix, "internal: witness failed re-evaluation");
            PitVerdict v;
            v.zero = false;
            v.error_bound = 0;
            v.witness = pt;
            return v;
        }
    }
    PitVerdict v;
    v.zero = true;
    mpq_class per_trial(mpz_class(d), mpz_class(s.size));
    v.error_bound = 1;
    for (int t = 0; t < trials; ++t) v.error_bound *= per_trial;
    return v;
}

SditInstance sdit_build(const Circuit& c) {
    ProjectionMatrix proj = abp_to_det_projection(weakly_skew_to_abp(c));
    const Field& f = c.field();
    std::size_t n = proj.side();

    SditInstance inst;
    inst.field = f;
    inst.side = n;
    // pad-variable first; every constant entry c becomes c*t, which is the
    // degree-1 restriction of the t*A(x/t) homogenization
    inst.vars.push_back("t");
    std::map<std::string, std::size_t> var_index{{"t", 0}};
    auto zero_mat = [&] {
        return std::vector<std::vector<Fe>>(n, std::vector<Fe>(n, f.zero()));
    };
    inst.mats.push_back(zero_mat());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Atom& a = proj.matrix[i][j];
            if (a.is_zero()) continue;
            if (a.is_var()) {
                auto [it, fresh] = var_index.emplace(*a.var, inst.vars.size());
                if (fresh) {
                    inst.vars.push_back(*a.var);
                    inst.mats.push_back(zero_mat());
                }
                inst.mats[it->second][i][j] =
                    inst.mats[it->second][i][j] + (a.neg ? f.minus_one() : f.one());
            } else {
                inst.mats[0][i][j] = inst.mats[0][i][j] + a.constant;
            }
        }
    inst.relation = "det(sum x_i A_i) at t=1 equals the input polynomial";
    return inst;
}

PitVerdict sdit_decide(const SditInstance& inst, int trials, std::uint64_t seed) {
    if (trials < 1) fail(Errc::ParamOutOfRange, "trials >= 1");
    const Field& f = inst.field;
    SampleSpace s = sample_space(f, inst.side); // det of the pencil has degree <= side
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<Fe> assign;
        for (std::size_t i = 0; i < inst.vars.size(); ++i) assign.push_back(draw(f, s, rng));
        std::vector<std::vector<Fe>> m(inst.side, std::vector<Fe>(inst.side, f.zero()));
        for (std::size_t v = 0; v < inst.vars.size(); ++v)
            for (std::size_t i = 0; i < inst.side; ++i)
                for (std::size_t j = 0; j < inst.side; ++j)
                    m[i][j] = m[i][j] + assign[v] * inst.mats[v][i][j];
        if (!det_by_elimination(std::move(m), f).is_zero()) {
            PitVerdict v;
            v.zero = false;
            v.error_bound = 0;
            std::map<std::string, Fe> w;
            for (std::size_t i = 0; i < inst.vars.size(); ++i) w[inst.vars[i]] = assign[i];
            v.witness = w;
            return v;
        }
    }
    PitVerdict v;
    v.zero = true;
    mpq_class per_trial(mpz_class(inst.side), mpz_class(s.size));
    v.error_bound = 1;
    for (int t = 0; t < trials; ++t) v.error_bound *= per_trial;
    return v;
}

PitVerdict grid_zero_test(const Circuit& c, std::uint64_t degree_bound) {
    std::size_t k = c.vars().size();
    if (k > 4) fail(Errc::TooManyVariables, std::to_string(k) + " variables, grid test takes 4");
    auto m = metrics(c);
    if (m.formal_degree > degree_bound)
        fail(Errc::DegreeBoundTooSmall, "formal degree " + std::to_string(m.formal_degree) +
                                            " exceeds the grid bound " + std::to_string(degree_bound));
    const Field& f = c.field();
    if (f.is_prime_field() && f.characteristic() <= degree_bound)
        fail(Errc::FieldTooSmall, "grid points 0..D need p > D");
    double points = std::pow(double(degree_bound + 1), double(k));
    if (points > 4e6) fail(Errc::BudgetExceeded, "grid too large");

    std::vector<std::uint64_t> idx(k, 0);
    while (true) {
        std::map<std::string, Fe> pt;
        for (std::size_t i = 0; i < k; ++i) pt[c.vars()[i]] = f.element(static_cast<long>(idx[i]));
        if (!evaluate(c, pt)[0].is_zero()) {
            PitVerdict v;
            v.zero = false;
            v.error_bound = 0;
            v.witness = pt;
            return v;
        }
        std::size_t i = 0;
        while (i < k && ++idx[i] > degree_bound) idx[i++] = 0;
        if (i == k) break;
        if (k == 0) break;
    }
    PitVerdict v;
    v.zero = true;
    v.error_bound = 0; // deterministic
    return v;
}

SlpVerdict equ_slp(const Circuit& c) {
    auto flags = classify(c);
    for (const Gate& g : c.gates())
        if (g.kind == GateKind::InputVar)
            fail(Errc::NotConstantFree, "EquSLP takes variable-free circuits");
    if (!flags.is_constant_free) fail(Errc::NotConstantFree, "constants outside {-1,0,1}");
    if (!flags.is_mult_disjoint) fail(Errc::NotMultDisjoint, "weight bound needs mult-disjointness");
    if (c.field().is_prime_field()) fail(Errc::ParamOutOfRange, "EquSLP is about integers, use Q");

    auto m = metrics(c);
    // |value| <= wt <= 2^(size + deg); enough primes to exceed 2^(size+deg+1)
    std::uint64_t need_bits = static_cast<std::uint64_t>(m.size) + m.formal_degree + 2;
    std::vector<std::uint64_t> primes;
    std::uint64_t bits = 0;
    for (std::uint64_t p = (1ull << 31) - 1; bits < need_bits; --p) {
        if (!is_prime_u64(p)) continue;
        primes.push_back(p);
        bits += 30;
    }
    GateId out = c.output();
    for (std::uint64_t p : primes) {
        std::vector<std::uint64_t> val(c.num_gates(), 0);
        for (std::size_t i = 0; i < c.num_gates(); ++i) {
            const Gate& g = c.gate(static_cast<GateId>(i));
            switch (g.kind) {
                case GateKind::InputConst: {
                    const mpq_class& q = g.constant.rational();
                    long v = q.get_num().get_si(); // constants are -1, 0, 1
                    val[i] = v < 0 ? p + static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
                    break;
                }
                case GateKind::Add: {
                    std::uint64_t s = val[g.a] + val[g.b];
                    val[i] = s >= p ? s - p : s;
                    break;
                }
                case GateKind::Mul: val[i] = mulmod_u64(val[g.a], val[g.b], p); break;
                default: break;
            }
        }
        if (val[out] != 0) return SlpVerdict::NonZero;
    }
    return SlpVerdict::Zero;
}

} // namespace acirc
