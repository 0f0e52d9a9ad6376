#include "acirc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acirc/rng.hpp"

namespace acirc {

std::string TransformReport::str() const {
    std::ostringstream out;
    out << "transform " << name << "\n";
    out << "input-size " << input.size << "\ninput-depth " << input.depth << "\ninput-degree "
        << input.formal_degree << "\n";
    out << "output-size " << output.size << "\noutput-depth " << output.depth << "\noutput-degree "
        << output.formal_degree << "\n";
    out << "size-ratio " << size_ratio << "\ndepth-ratio " << depth_ratio << "\n";
    out << "verified "
        << (verified == Verification::OracleExact ? "oracle-exact"
            : verified == Verification::SeededPit ? "seeded-pit"
                                                  : "skipped")
        << "\n";
    for (const auto& [k, v] : extra) out << k << ' ' << v << "\n";
    return out.str();
}

namespace {

void fill_ratios(TransformReport& r) {
    r.size_ratio = r.input.size ? double(r.output.size) / double(r.input.size) : 0;
    r.depth_ratio = r.input.depth ? double(r.output.depth) / double(r.input.depth) : 0;
}

/// Exact-equality check of two single-output circuits: expansion when the
/// budget allows, otherwise seeded random evaluation with total error below
/// 2^-40. Returns how the check ran; throws on an actual mismatch.
Verification verify_equal(const Circuit& a, const Circuit& b, const ExpandOptions& opts,
                          const char* what) {
    try {
        if (!(expand(a, std::nullopt, opts) == expand(b, std::nullopt, opts)))
            fail(Errc::BadMatrix, std::string(what) + ": transform changed the polynomial");
        return Verification::OracleExact;
    } catch (const Error& e) {
        if (e.code() != Errc::BudgetExceeded) throw;
    }
    std::uint64_t d = std::max<std::uint64_t>(
        {1, metrics(a).formal_degree, metrics(b).formal_degree});
    const Field& f = a.field();
    // per-trial failure probability at most d/|S|
    double per_trial;
    std::uint64_t span;
    if (f.is_prime_field()) {
        if (f.characteristic() <= d) fail(Errc::FieldTooSmall, "cannot verify by evaluation");
        span = f.characteristic();
        per_trial = double(d) / double(span);
    } else {
        span = 2 * d + 1;
        per_trial = double(d) / double(span);
    }
    int trials = 1;
    double err = per_trial;
    while (err > std::ldexp(1.0, -40) && trials < 200) {
        err *= per_trial;
        ++trials;
    }
    Rng rng(0x5eedf00dull);
    for (int t = 0; t < trials; ++t) {
        std::map<std::string, Fe> pt;
        for (const auto& v : a.vars())
            pt[v] = f.is_prime_field()
                        ? f.element(static_cast<long>(rng.below(span)))
                        : f.element(static_cast<long>(rng.below(span)) - static_cast<long>(d));
        for (const auto& v : b.vars())
            if (!pt.count(v))
                pt[v] = f.is_prime_field()
                            ? f.element(static_cast<long>(rng.below(span)))
                            : f.element(static_cast<long>(rng.below(span)) - static_cast<long>(d));
        if (!(evaluate(a, pt)[0] == evaluate(b, pt)[0]))
            fail(Errc::BadMatrix, std::string(what) + ": transform changed the polynomial");
    }
    return Verification::SeededPit;
}

} // namespace

std::optional<bool> semantically_homogeneous(const Circuit& c, const ExpandOptions& opts) {
    try {
        for (const auto& p : expand_all_gates(c, opts))
            if (!p.is_homogeneous()) return false;
        return true;
    } catch (const Error& e) {
        if (e.code() == Errc::BudgetExceeded) return std::nullopt;
        throw;
    }
}

// --- homogenization ----------------------------------------------------------

HomogenizeResult homogenize(const Circuit& c, std::uint64_t d, const ExpandOptions& opts) {
    GateId out_gate = c.output();
    const Field& field = c.field();
    Circuit h(field, c.vars());

    // comp[v][i] computes the degree-i part of gate v; absent = zero
    std::vector<std::vector<std::optional<GateId>>> comp(c.num_gates());
    for (std::size_t v = 0; v < c.num_gates(); ++v) {
        const Gate& g = c.gate(static_cast<GateId>(v));
        auto& cv = comp[v];
        cv.assign(d + 1, std::nullopt);
        switch (g.kind) {
            case GateKind::InputVar:
                if (d >= 1) cv[1] = h.add_input_var(c.vars()[g.var]);
                break;
            case GateKind::InputConst:
                if (!g.constant.is_zero()) cv[0] = h.add_input_const(g.constant);
                break;
            case GateKind::Add:
                for (std::uint64_t i = 0; i <= d; ++i) {
                    auto a = comp[g.a][i], b = comp[g.b][i];
                    if (a && b) cv[i] = h.add_gate(GateKind::Add, *a, *b);
                    else if (a) cv[i] = a;
                    else if (b) cv[i] = b;
                }
                break;
            case GateKind::Mul:
                for (std::uint64_t i = 0; i <= d; ++i) {
                    std::optional<GateId> acc;
                    for (std::uint64_t j = 0; j <= i; ++j) {
                        auto a = comp[g.a][j], b = comp[g.b][i - j];
                        if (!a || !b) continue;
                        GateId t = h.add_gate(GateKind::Mul, *a, *b);
                        acc = acc ? h.add_gate(GateKind::Add, *acc, t) : t;
                    }
                    cv[i] = acc;
                }
                break;
        }
    }
    std::vector<GateId> outs;
    for (std::uint64_t i = 0; i <= d; ++i)
        outs.push_back(comp[out_gate][i] ? *comp[out_gate][i]
                                         : h.add_input_const(field.zero()));
    h.set_outputs(outs);

    HomogenizeResult res{std::move(h), {}};
    res.report.name = "homogenize";
    res.report.input = metrics(c);
    res.report.output = metrics(res.circuit);
    fill_ratios(res.report);
    double denom = double(std::max<std::size_t>(1, c.size())) * double(std::max<std::uint64_t>(1, d * d));
    res.report.extra["C"] = std::to_string(double(res.circuit.size()) / denom);

    // verification: the components must sum to the input polynomial
    try {
        Poly want = expand(c, out_gate, opts);
        if (want.degree() > d)
            fail(Errc::DegreeBoundTooSmall,
                 "output degree " + std::to_string(want.degree()) + " exceeds d = " + std::to_string(d));
        Poly sum;
        for (std::uint64_t i = 0; i <= d; ++i) {
            Poly pi = expand(res.circuit, res.circuit.outputs()[i], opts);
            if (!pi.is_zero() && !(pi.is_homogeneous() && pi.degree() == i))
                fail(Errc::BadMatrix, "component " + std::to_string(i) + " not homogeneous");
            sum += pi;
        }
        if (!(sum == want)) fail(Errc::BadMatrix, "homogenize: components do not sum to the input");
        res.report.verified = Verification::OracleExact;
    } catch (const Error& e) {
        if (e.code() != Errc::BudgetExceeded) throw;
        res.report.verified = Verification::Skipped;
    }
    return res;
}

// --- multiplicative disjointness ----------------------------------------------

TransformResult make_mult_disjoint(const Circuit& c, const ExpandOptions& opts) {
    TransformResult res{Circuit(c.field(), c.vars()), {}};
    res.report.name = "make-mult-disjoint";
    res.report.input = metrics(c);

    if (classify(c).is_mult_disjoint) {
        res.circuit = c; // identity fast path
        res.report.output = res.report.input;
        fill_ratios(res.report);
        res.report.verified = Verification::Skipped;
        res.report.extra["fast-path"] = "already-mult-disjoint";
        return res;
    }

    Circuit folded = fold_constants(c);
    auto m = metrics(folded);
    // interval width per gate: variables take 1 slot, constants none
    std::vector<std::uint64_t> span(folded.num_gates(), 0);
    for (std::size_t v = 0; v < folded.num_gates(); ++v) {
        const Gate& g = folded.gate(static_cast<GateId>(v));
        switch (g.kind) {
            case GateKind::InputVar: span[v] = 1; break;
            case GateKind::InputConst: span[v] = 0; break;
            case GateKind::Add: span[v] = std::max(span[g.a], span[g.b]); break;
            case GateKind::Mul: span[v] = span[g.a] + span[g.b]; break;
        }
    }

    Circuit md(c.field(), c.vars());
    std::map<std::pair<GateId, std::uint64_t>, GateId> memo;
    auto copy = [&](auto&& self, GateId v, std::uint64_t j) -> GateId {
        const Gate& g = folded.gate(v);
        if (g.kind == GateKind::InputConst) return md.add_input_const(g.constant); // fresh per use
        auto key = std::make_pair(v, j);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        GateId r;
        switch (g.kind) {
            case GateKind::InputVar: r = md.add_input_var(folded.vars()[g.var]); break;
            case GateKind::Add:
                r = md.add_gate(GateKind::Add, self(self, g.a, j), self(self, g.b, j));
                break;
            case GateKind::Mul:
                r = md.add_gate(GateKind::Mul, self(self, g.a, j), self(self, g.b, j + span[g.a]));
                break;
            default: r = 0; break;
        }
        memo[key] = r;
        return r;
    };
    md.set_outputs({copy(copy, folded.output(), 0)});
    res.circuit = std::move(md);

    if (!classify(res.circuit).is_mult_disjoint)
        fail(Errc::NotMultDisjoint, "internal: conversion failed to reach mult-disjointness");
    res.report.output = metrics(res.circuit);
    fill_ratios(res.report);
    double denom = double(std::max<std::size_t>(1, res.report.input.size)) *
                   double(std::max<std::uint64_t>(1, m.formal_degree));
    res.report.extra["C"] = std::to_string(double(res.circuit.size()) / denom);
    res.report.verified = verify_equal(c, res.circuit, opts, "make_mult_disjoint");
    return res;
}

// --- Brent balancing -----------------------------------------------------------

namespace {

struct TNode {
    GateKind kind;
    std::uint32_t var = 0;
    Fe constant;
    int a = -1, b = -1;
    std::size_t n = 1; // node count of the subtree
};

struct Balancer {
    const Circuit& in;
    Circuit out;
    std::vector<TNode> t;

    explicit Balancer(const Circuit& c) : in(c), out(c.field(), c.vars()) {}

    int build_tree(GateId g) {
        const Gate& gate = in.gate(g);
        TNode node;
        node.kind = gate.kind;
        if (gate.kind == GateKind::InputVar) node.var = gate.var;
        if (gate.kind == GateKind::InputConst) node.constant = gate.constant;
        if (gate.is_op()) {
            node.a = build_tree(gate.a);
            node.b = build_tree(gate.b);
            node.n = 1 + t[node.a].n + t[node.b].n;
        }
        t.push_back(node);
        return static_cast<int>(t.size() - 1);
    }

    GateId emit_leaf(const TNode& node) {
        return node.kind == GateKind::InputVar ? out.add_input_var(in.vars()[node.var])
                                               : out.add_input_const(node.constant);
    }

    GateId emit_direct(int v) {
        const TNode& node = t[v];
        if (node.a < 0) return emit_leaf(node);
        return out.add_gate(node.kind, emit_direct(node.a), emit_direct(node.b));
    }

    // affine handles with 0/1 markers so reconstruction gates stay tight
    struct H {
        enum { Zero, One, Gate } tag;
        GateId g = 0;
    };
    GateId materialize(const H& h) {
        if (h.tag == H::Zero) return out.add_input_const(in.field().zero());
        if (h.tag == H::One) return out.add_input_const(in.field().one());
        return h.g;
    }
    H mul_h(const H& x, const H& y) {
        if (x.tag == H::Zero || y.tag == H::Zero) return {H::Zero, 0};
        if (x.tag == H::One) return y;
        if (y.tag == H::One) return x;
        return {H::Gate, out.add_gate(GateKind::Mul, x.g, y.g)};
    }
    H add_h(const H& x, const H& y) {
        if (x.tag == H::Zero) return y;
        if (y.tag == H::Zero) return x;
        return {H::Gate, out.add_gate(GateKind::Add, materialize(x), materialize(y))};
    }

    GateId eval(int v) {
        const TNode& node = t[v];
        if (node.n <= 7) return emit_direct(v);
        // separator: walk into the heavier child until the subtree fits 2/3
        int z = v;
        while (t[z].n > 2 * node.n / 3) {
            const TNode& zn = t[z];
            if (zn.a < 0) break;
            z = t[zn.a].n >= t[zn.b].n ? zn.a : zn.b;
        }
        if (z == v) z = t[t[v].a].n >= t[t[v].b].n ? t[v].a : t[v].b;
        H prod = mul_h(affine_a(v, z), H{H::Gate, eval(z)});
        return materialize(add_h(prod, affine_b(v, z)));
    }

    // val(subtree v) = A * val(subtree z) + B with z inside v; A and B are
    // built by separate calls so every emitted gate feeds exactly one parent
    int split_spine(int v, int z) {
        std::vector<int> spine;
        for (int u = v; u != z;) {
            spine.push_back(u);
            u = contains(t[u].a, z) ? t[u].a : t[u].b;
        }
        spine.push_back(z);
        if (spine.size() == 2) return -1; // base case marker
        std::size_t m = t[v].n - t[z].n;
        int best = spine[1];
        std::size_t best_cost = m + 1;
        for (std::size_t i = 1; i + 1 < spine.size(); ++i) {
            std::size_t inner = t[spine[i]].n - t[z].n;
            std::size_t cost = std::max(inner, m - inner);
            if (cost < best_cost) {
                best_cost = cost;
                best = spine[i];
            }
        }
        return best;
    }

    H affine_a(int v, int z) {
        if (v == z) return {H::One, 0};
        int mid = split_spine(v, z);
        if (mid < 0) {
            const TNode& vn = t[v];
            if (vn.kind != GateKind::Mul) return {H::One, 0};
            return {H::Gate, eval(vn.a == z ? vn.b : vn.a)};
        }
        return mul_h(affine_a(v, mid), affine_a(mid, z));
    }

    H affine_b(int v, int z) {
        if (v == z) return {H::Zero, 0};
        int mid = split_spine(v, z);
        if (mid < 0) {
            const TNode& vn = t[v];
            if (vn.kind != GateKind::Add) return {H::Zero, 0};
            return {H::Gate, eval(vn.a == z ? vn.b : vn.a)};
        }
        return add_h(mul_h(affine_a(v, mid), affine_b(mid, z)), affine_b(v, mid));
    }

    bool contains(int root, int target) {
        if (root < 0) return false;
        if (root == target) return true;
        // node indices are post-order: a subtree is a contiguous index range
        return target < root && root - static_cast<int>(t[root].n) < target;
    }
};

} // namespace

TransformResult balance_formula(const Circuit& c, const ExpandOptions& opts) {
    if (!classify(c).is_formula) fail(Errc::NotAFormula, "balance_formula");
    Balancer bal(c);
    int root = bal.build_tree(c.output());
    bal.out.set_outputs({bal.eval(root)});

    TransformResult res{std::move(bal.out), {}};
    res.report.name = "balance-formula";
    res.report.input = metrics(c);
    res.report.output = metrics(res.circuit);
    fill_ratios(res.report);
    if (!classify(res.circuit).is_formula)
        fail(Errc::NotAFormula, "internal: balancing lost the formula property");
    double kappa = double(res.report.output.depth) /
                   std::log2(double(res.report.input.size) + 2.0);
    res.report.extra["kappa"] = std::to_string(kappa);
    res.report.verified = verify_equal(c, res.circuit, opts, "balance_formula");
    return res;
}

} // namespace acirc
