#include "acirc/poly.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acirc {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (const auto& [v, e] : b) r[v] += e;
    return r;
}

std::uint64_t mono_degree(const Monomial& m) {
    std::uint64_t d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
}

Poly::Poly(const Fe& c) {
    if (!c.is_zero()) terms_[Monomial{}] = c;
}

Poly Poly::variable(const std::string& name, std::uint64_t modulus) {
    Poly p;
    Fe one = modulus ? Fe::make_residue(modulus, 1) : Fe::make_rational(1);
    p.terms_[Monomial{{name, 1}}] = one;
    return p;
}

std::uint64_t Poly::degree() const {
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
    return d;
}

void Poly::add_term(const Monomial& m, const Fe& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    // Term-block parallelism; exact arithmetic makes the merge order
    // irrelevant, so the result is identical for any thread count.
    const auto& big = terms_.size() >= o.terms_.size() ? terms_ : o.terms_;
    const auto& small = terms_.size() >= o.terms_.size() ? o.terms_ : terms_;
    std::vector<const std::pair<const Monomial, Fe>*> bt;
    bt.reserve(big.size());
    for (const auto& t : big) bt.push_back(&t);

#ifdef _OPENMP
    if (bt.size() >= 64 && small.size() >= 8) {
        int nt = omp_get_max_threads();
        std::vector<Poly> partial(nt);
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < bt.size(); ++i) {
            Poly& acc = partial[omp_get_thread_num()];
            for (const auto& [m2, c2] : small)
                acc.add_term(mono_mul(bt[i]->first, m2), bt[i]->second * c2);
        }
        for (auto& p : partial) r += p;
        return r;
    }
#endif
    for (const auto* t : bt)
        for (const auto& [m2, c2] : small)
            r.add_term(mono_mul(t->first, m2), t->second * c2);
    return r;
}

Fe Poly::coefficient(const Monomial& m, const Field& field) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field.zero() : it->second;
}

Fe Poly::evaluate(const std::map<std::string, Fe>& point, const Field& field) const {
    Fe acc = field.zero();
    for (const auto& [m, c] : terms_) {
        Fe t = c;
        for (const auto& [v, e] : m) {
            auto it = point.find(v);
            if (it == point.end()) fail(Errc::MissingAssignment, v);
            t = t * it->second.pow(e);
        }
        acc = acc + t;
    }
    return acc;
}

std::set<std::string> Poly::variables() const {
    std::set<std::string> vs;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m) vs.insert(v);
    return vs;
}

bool Poly::is_multilinear() const {
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m)
            if (e > 1) return false;
    return true;
}

bool Poly::is_homogeneous() const {
    if (terms_.empty()) return true;
    std::uint64_t d = mono_degree(terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (mono_degree(m) != d) return false;
    return true;
}

Poly Poly::component(std::uint64_t d) const {
    Poly r;
    for (const auto& [m, c] : terms_)
        if (mono_degree(m) == d) r.add_term(m, c);
    return r;
}

mpz_class Poly::weight() const {
    mpz_class w = 0;
    for (const auto& [m, c] : terms_) {
        if (!c.is_rational() || !c.is_integer())
            fail(Errc::NonIntegerCoefficients, "weight needs integer coefficients over Q");
        w += abs(c.rational().get_num());
    }
    return w;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0\n";
    std::ostringstream out;
    for (const auto& [m, c] : terms_) {
        out << c.str();
        for (const auto& [v, e] : m) {
            out << " * " << v;
            if (e != 1) out << '^' << e;
        }
        out << "\n";
    }
    return out.str();
}

Poly parse_poly(const std::string& text, const Field& field) {
    Poly p;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string coeff;
        if (!(ls >> coeff) || coeff[0] == '#') continue;
        if (coeff == "0") continue;
        Fe c = field.parse_literal(coeff);
        Monomial m;
        std::string star, factor;
        while (ls >> star) {
            if (star != "*" || !(ls >> factor)) fail(Errc::SyntaxError, "bad polynomial line: " + line);
            auto caret = factor.find('^');
            std::string v = factor.substr(0, caret);
            std::uint32_t e = 1;
            if (caret != std::string::npos) e = static_cast<std::uint32_t>(std::stoul(factor.substr(caret + 1)));
            m[v] += e;
        }
        p.add_term(m, c);
    }
    return p;
}

namespace {

// Saturating per-gate term-count estimate: structural product/sum capped by
// the count of monomials of the gate's formal degree in its variable count.
std::uint64_t binom_cap(std::uint64_t deg, std::uint64_t nvars, std::uint64_t cap) {
    // C(deg + nvars, nvars), saturating at cap
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= nvars; ++i) {
        acc = acc * (deg + i) / i;
        if (acc > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint64_t> estimate_terms(const Circuit& c, std::uint64_t cap) {
    auto m = metrics(c);
    std::uint64_t nvars = c.vars().size();
    std::vector<std::uint64_t> est(c.num_gates(), 1);
    for (std::size_t i = 0; i < c.num_gates(); ++i) {
        const Gate& g = c.gate(static_cast<GateId>(i));
        std::uint64_t structural = 1;
        switch (g.kind) {
            case GateKind::InputVar:
            case GateKind::InputConst: structural = 1; break;
            case GateKind::Add: {
                unsigned __int128 s = static_cast<unsigned __int128>(est[g.a]) + est[g.b];
                structural = s > cap ? cap + 1 : static_cast<std::uint64_t>(s);
                break;
            }
            case GateKind::Mul: {
                unsigned __int128 s = static_cast<unsigned __int128>(est[g.a]) * est[g.b];
                structural = s > cap ? cap + 1 : static_cast<std::uint64_t>(s);
                break;
            }
        }
        est[i] = std::min(structural, binom_cap(m.gate_degree[i], nvars, cap));
    }
    return est;
}

} // namespace

std::vector<Poly> expand_all_gates(const Circuit& c, const ExpandOptions& opts) {
    auto est = estimate_terms(c, opts.term_budget);
    for (std::size_t i = 0; i < c.num_gates(); ++i)
        if (est[i] > opts.term_budget)
            fail(Errc::BudgetExceeded,
                 "estimated " + std::to_string(est[i]) + " terms at gate " +
                     c.gate_name(static_cast<GateId>(i)) + " exceeds budget " +
                     std::to_string(opts.term_budget));
    std::vector<Poly> val(c.num_gates());
    std::uint64_t mod = c.field().characteristic();
    for (std::size_t i = 0; i < c.num_gates(); ++i) {
        const Gate& g = c.gate(static_cast<GateId>(i));
        switch (g.kind) {
            case GateKind::InputVar: val[i] = Poly::variable(c.vars()[g.var], mod); break;
            case GateKind::InputConst: val[i] = Poly(g.constant); break;
            case GateKind::Add: val[i] = val[g.a] + val[g.b]; break;
            case GateKind::Mul: val[i] = val[g.a] * val[g.b]; break;
        }
        if (val[i].term_count() > opts.term_budget)
            fail(Errc::BudgetExceeded, "gate " + c.gate_name(static_cast<GateId>(i)) +
                                           " expanded past the term budget");
    }
    return val;
}

Poly expand(const Circuit& c, std::optional<GateId> gate, const ExpandOptions& opts) {
    GateId target = gate.value_or(c.outputs().front());
    // expand only the subcircuit, so dead gates cannot blow the budget
    std::vector<bool> need(c.num_gates(), false);
    std::vector<GateId> stack{target};
    while (!stack.empty()) {
        GateId g = stack.back();
        stack.pop_back();
        if (need[g]) continue;
        need[g] = true;
        if (c.gate(g).is_op()) {
            stack.push_back(c.gate(g).a);
            stack.push_back(c.gate(g).b);
        }
    }
    auto est = estimate_terms(c, opts.term_budget);
    for (std::size_t i = 0; i <= target; ++i)
        if (need[i] && est[i] > opts.term_budget)
            fail(Errc::BudgetExceeded,
                 "estimated " + std::to_string(est[i]) + " terms at gate " +
                     c.gate_name(static_cast<GateId>(i)) + " exceeds budget " +
                     std::to_string(opts.term_budget));
    std::vector<Poly> val(target + 1);
    std::uint64_t mod = c.field().characteristic();
    for (std::size_t i = 0; i <= target; ++i) {
        if (!need[i]) continue;
        const Gate& g = c.gate(static_cast<GateId>(i));
        switch (g.kind) {
            case GateKind::InputVar: val[i] = Poly::variable(c.vars()[g.var], mod); break;
            case GateKind::InputConst: val[i] = Poly(g.constant); break;
            case GateKind::Add: val[i] = val[g.a] + val[g.b]; break;
            case GateKind::Mul: val[i] = val[g.a] * val[g.b]; break;
        }
        if (val[i].term_count() > opts.term_budget)
            fail(Errc::BudgetExceeded, "gate " + c.gate_name(static_cast<GateId>(i)) +
                                           " expanded past the term budget");
    }
    return val[target];
}

std::vector<Fe> evaluate(const Circuit& c, const std::map<std::string, Fe>& point) {
    std::vector<Fe> val(c.num_gates());
    for (std::size_t i = 0; i < c.num_gates(); ++i) {
        const Gate& g = c.gate(static_cast<GateId>(i));
        switch (g.kind) {
            case GateKind::InputVar: {
                auto it = point.find(c.vars()[g.var]);
                if (it == point.end()) fail(Errc::MissingAssignment, c.vars()[g.var]);
                val[i] = it->second;
                break;
            }
            case GateKind::InputConst: val[i] = g.constant; break;
            case GateKind::Add: val[i] = val[g.a] + val[g.b]; break;
            case GateKind::Mul: val[i] = val[g.a] * val[g.b]; break;
        }
    }
    std::vector<Fe> out;
    for (GateId g : c.outputs()) out.push_back(val[g]);
    return out;
}

Fe evaluate_gate(const Circuit& c, GateId g, const std::map<std::string, Fe>& point) {
    std::vector<Fe> val(c.num_gates());
    for (std::size_t i = 0; i <= g; ++i) {
        const Gate& gg = c.gate(static_cast<GateId>(i));
        switch (gg.kind) {
            case GateKind::InputVar: {
                auto it = point.find(c.vars()[gg.var]);
                if (it == point.end()) fail(Errc::MissingAssignment, c.vars()[gg.var]);
                val[i] = it->second;
                break;
            }
            case GateKind::InputConst: val[i] = gg.constant; break;
            case GateKind::Add: val[i] = val[gg.a] + val[gg.b]; break;
            case GateKind::Mul: val[i] = val[gg.a] * val[gg.b]; break;
        }
    }
    return val[g];
}

std::size_t matrix_rank(std::vector<std::vector<Fe>> m, const Field& field) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        Fe inv = m[rank][col].inv();
        for (std::size_t j = col; j < cols; ++j) m[rank][j] = m[rank][j] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Fe factor = m[r][col];
            for (std::size_t j = col; j < cols; ++j)
                m[r][j] = m[r][j] - factor * m[rank][j];
        }
        ++rank;
    }
    (void)field;
    return rank;
}

namespace {

std::vector<Monomial> multilinear_monomials(const std::set<std::string>& vars) {
    std::vector<std::string> vs(vars.begin(), vars.end());
    std::vector<Monomial> out;
    std::size_t n = vs.size();
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        Monomial m;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) m[vs[i]] = 1;
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

PDMatrix pd_matrix_rank(const Poly& p, const std::set<std::string>& y_block,
                        const std::set<std::string>& z_block, const Field& field,
                        std::size_t entry_budget) {
    if (!p.is_multilinear()) fail(Errc::NotMultilinear, "pd_matrix_rank input");
    auto pv = p.variables();
    for (const auto& v : pv)
        if (!y_block.count(v) && !z_block.count(v))
            fail(Errc::BlocksNotPartition, "variable " + v + " in neither block");
    for (const auto& v : y_block)
        if (z_block.count(v)) fail(Errc::BlocksNotPartition, "variable " + v + " in both blocks");
    if (y_block.size() >= 63 || z_block.size() >= 63 ||
        (1ull << y_block.size()) * (1ull << z_block.size()) > entry_budget)
        fail(Errc::BudgetExceeded, "pd matrix too large");

    PDMatrix out;
    out.rows = multilinear_monomials(y_block);
    out.cols = multilinear_monomials(z_block);
    out.entries.assign(out.rows.size(), std::vector<Fe>(out.cols.size(), field.zero()));
    for (std::size_t r = 0; r < out.rows.size(); ++r)
        for (std::size_t c = 0; c < out.cols.size(); ++c)
            out.entries[r][c] = p.coefficient(mono_mul(out.rows[r], out.cols[c]), field);
    out.rank = matrix_rank(out.entries, field);
    return out;
}

} // namespace acirc
