#include "acirc/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "acirc/det.hpp"
#include "acirc/perm.hpp"

namespace acirc {

namespace {

std::string xvar(std::size_t i, std::size_t j) {
    return "x" + std::to_string(i) + "_" + std::to_string(j);
}

std::string edge_var(std::size_t i, std::size_t j) {
    // undirected edge {i,j} of K_n, canonical order i < j
    if (i > j) std::swap(i, j);
    return xvar(i, j);
}

std::vector<std::string> square_vars(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) v.push_back(xvar(i, j));
    return v;
}

AtomMatrix generic_matrix(std::size_t n, const Field& f) {
    AtomMatrix m = atom_matrix_zero(n, f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Atom::of_var(xvar(i + 1, j + 1));
    return m;
}

// --- constructions -----------------------------------------------------------

Circuit ryser_formula(std::size_t n, const Field& f) {
    if (n < 1 || n > 5) fail(Errc::ParamOutOfRange, "per formula for 1 <= n <= 5");
    Circuit c(f, square_vars(n));
    std::optional<GateId> total;
    for (std::uint64_t excl = 0; excl + 1 < (1ull << n); ++excl) {
        std::optional<GateId> prod;
        for (std::size_t i = 1; i <= n; ++i) {
            std::optional<GateId> row;
            for (std::size_t j = 1; j <= n; ++j) {
                if (excl & (1ull << (j - 1))) continue;
                GateId x = c.add_input_var(xvar(i, j));
                row = row ? c.add_gate(GateKind::Add, *row, x) : x;
            }
            prod = prod ? c.add_gate(GateKind::Mul, *prod, *row) : *row;
        }
        if (__builtin_popcountll(excl) & 1)
            prod = c.add_gate(GateKind::Mul, c.add_input_const(f.minus_one()), *prod);
        total = total ? c.add_gate(GateKind::Add, *total, *prod) : *prod;
    }
    c.set_outputs({*total});
    return c;
}

Circuit hc_formula(std::size_t n, const Field& f) {
    if (n < 2 || n > 8) fail(Errc::ParamOutOfRange, "hc formula for 2 <= n <= 8");
    Circuit c(f, square_vars(n));
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 2);
    std::optional<GateId> total;
    do {
        // the directed Hamilton cycle 1 -> rest[0] -> ... -> rest[n-2] -> 1
        GateId prod = c.add_input_var(xvar(1, rest[0]));
        for (std::size_t i = 0; i + 1 < rest.size(); ++i)
            prod = c.add_gate(GateKind::Mul, prod, c.add_input_var(xvar(rest[i], rest[i + 1])));
        prod = c.add_gate(GateKind::Mul, prod, c.add_input_var(xvar(rest.back(), 1)));
        total = total ? c.add_gate(GateKind::Add, *total, prod) : prod;
    } while (std::next_permutation(rest.begin(), rest.end()));
    c.set_outputs({*total});
    return c;
}

std::string imm_var(std::size_t k, std::size_t i, std::size_t j) {
    return "a" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

Circuit imm_circuit(std::size_t n, std::size_t d, const Field& f) {
    if (n < 1 || d < 1) fail(Errc::ParamOutOfRange, "imm needs n, d >= 1");
    std::vector<std::string> vars;
    for (std::size_t k = 1; k <= d; ++k)
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j) vars.push_back(imm_var(k, i, j));
    Circuit c(f, vars);
    // M := A_1, then M := M * A_k; products multiply by fresh input gates,
    // keeping the circuit skew
    std::vector<std::vector<GateId>> m(n, std::vector<GateId>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = c.add_input_var(imm_var(1, i + 1, j + 1));
    for (std::size_t k = 2; k <= d; ++k) {
        std::vector<std::vector<GateId>> nx(n, std::vector<GateId>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::optional<GateId> acc;
                for (std::size_t l = 0; l < n; ++l) {
                    GateId t = c.add_gate(GateKind::Mul, m[i][l],
                                          c.add_input_var(imm_var(k, l + 1, j + 1)));
                    acc = acc ? c.add_gate(GateKind::Add, *acc, t) : t;
                }
                nx[i][j] = *acc;
            }
        m = std::move(nx);
    }
    std::optional<GateId> tr;
    for (std::size_t i = 0; i < n; ++i) tr = tr ? c.add_gate(GateKind::Add, *tr, m[i][i]) : m[i][i];
    c.set_outputs({*tr});
    return c;
}

Circuit esym_circuit(std::size_t n, std::size_t d, const Field& f) {
    if (n < 1 || d < 1 || d > n) fail(Errc::ParamOutOfRange, "esym needs 1 <= d <= n");
    if (f.is_prime_field() && f.characteristic() < n + 1)
        fail(Errc::FieldTooSmall, "esym interpolation needs n+1 distinct points");
    // interpolation nodes 0..n; esym_d is the coefficient of t^(n-d) in
    // prod_i (t + x_i), recovered by one row of the inverse Vandermonde
    std::size_t m = n + 1;
    std::vector<Fe> nodes;
    for (std::size_t k = 0; k < m; ++k) nodes.push_back(f.element(static_cast<long>(k)));
    std::vector<std::vector<Fe>> v(m, std::vector<Fe>(m, f.zero()));
    for (std::size_t k = 0; k < m; ++k) {
        Fe p = f.one();
        for (std::size_t j = 0; j < m; ++j) {
            v[k][j] = p;
            p = p * nodes[k];
        }
    }
    // invert V by elimination against the identity
    std::vector<std::vector<Fe>> inv(m, std::vector<Fe>(m, f.zero()));
    for (std::size_t i = 0; i < m; ++i) inv[i][i] = f.one();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (v[piv][col].is_zero()) ++piv;
        std::swap(v[piv], v[col]);
        std::swap(inv[piv], inv[col]);
        Fe s = v[col][col].inv();
        for (std::size_t j = 0; j < m; ++j) {
            v[col][j] = v[col][j] * s;
            inv[col][j] = inv[col][j] * s;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || v[r][col].is_zero()) continue;
            Fe fac = v[r][col];
            for (std::size_t j = 0; j < m; ++j) {
                v[r][j] = v[r][j] - fac * v[col][j];
                inv[r][j] = inv[r][j] - fac * inv[col][j];
            }
        }
    }
    const std::vector<Fe>& w = inv[n - d]; // coefficient row for t^(n-d)

    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    Circuit c(f, vars);
    std::optional<GateId> total;
    for (std::size_t k = 0; k < m; ++k) {
        if (w[k].is_zero()) continue;
        std::optional<GateId> prod;
        for (std::size_t i = 1; i <= n; ++i) {
            GateId term = c.add_gate(GateKind::Add, c.add_input_const(nodes[k]),
                                     c.add_input_var("x" + std::to_string(i)));
            prod = prod ? c.add_gate(GateKind::Mul, *prod, term) : term;
        }
        GateId scaled = c.add_gate(GateKind::Mul, c.add_input_const(w[k]), *prod);
        total = total ? c.add_gate(GateKind::Add, *total, scaled) : scaled;
    }
    c.set_outputs({*total});
    return c;
}

Circuit cut_circuit(std::size_t n, const Field& f) {
    if (!f.is_prime_field()) fail(Errc::FieldTooSmall, "cut enumerator lives over F_q");
    if (n < 2 || n > 6) fail(Errc::ParamOutOfRange, "cut for 2 <= n <= 6");
    std::size_t q = f.characteristic();
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) vars.push_back(edge_var(i, j));
    Circuit c(f, vars);
    std::optional<GateId> total;
    // cuts {A,B}, both nonempty; canonically 1 in A
    for (std::uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        std::vector<bool> inA(n + 1, false);
        inA[1] = true;
        for (std::size_t v = 2; v <= n; ++v) inA[v] = mask & (1ull << (v - 2));
        bool hasB = false;
        for (std::size_t v = 2; v <= n; ++v) hasB |= !inA[v];
        if (!hasB) continue;
        std::optional<GateId> prod;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j) {
                if (inA[i] == inA[j]) continue;
                for (std::size_t e = 0; e + 1 < q; ++e) { // exponent q-1
                    GateId x = c.add_input_var(edge_var(i, j));
                    prod = prod ? c.add_gate(GateKind::Mul, *prod, x) : x;
                }
            }
        total = total ? c.add_gate(GateKind::Add, *total, *prod) : *prod;
    }
    c.set_outputs({*total});
    return c;
}

Circuit trees_circuit(std::size_t n, const Field& f) {
    if (n < 2 || n > 7) fail(Errc::ParamOutOfRange, "trees for 2 <= n <= 7");
    // Berkowitz determinant circuit of the (n-1)x(n-1) Laplacian minor:
    // entry (i,i) = sum_{l != i} X_il, entry (i,j) = -X_ij. Every input
    // gate of the determinant circuit is replaced by a fresh copy of the
    // entry subcircuit, which preserves weak skewness.
    Circuit det = berkowitz_det_circuit(n - 1, f);
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) vars.push_back(edge_var(i, j));
    Circuit c(f, vars);
    std::vector<GateId> mapped(det.num_gates());
    auto entry = [&](std::size_t i, std::size_t j) -> GateId {
        if (i == j) {
            std::optional<GateId> acc;
            for (std::size_t l = 1; l <= n; ++l) {
                if (l == i) continue;
                GateId x = c.add_input_var(edge_var(i, l));
                acc = acc ? c.add_gate(GateKind::Add, *acc, x) : x;
            }
            return *acc;
        }
        return c.add_gate(GateKind::Mul, c.add_input_const(f.minus_one()),
                          c.add_input_var(edge_var(i, j)));
    };
    for (std::size_t g = 0; g < det.num_gates(); ++g) {
        const Gate& gate = det.gate(static_cast<GateId>(g));
        switch (gate.kind) {
            case GateKind::InputVar: {
                // variable names are x{i}_{j} with 1-based indices
                const std::string& v = det.vars()[gate.var];
                auto us = v.find('_');
                std::size_t i = std::stoul(v.substr(1, us - 1));
                std::size_t j = std::stoul(v.substr(us + 1));
                mapped[g] = entry(i, j);
                break;
            }
            case GateKind::InputConst: mapped[g] = c.add_input_const(gate.constant); break;
            default: mapped[g] = c.add_gate(gate.kind, mapped[gate.a], mapped[gate.b]); break;
        }
    }
    c.set_outputs({mapped[det.output()]});
    return c;
}

// --- oracles -------------------------------------------------------------------

Poly det_oracle(std::size_t n, const Field& f) {
    return symbolic_det_leibniz(generic_matrix(n, f), f);
}

Poly per_oracle(std::size_t n, const Field& f) { return brute_per(generic_matrix(n, f), f); }

Poly hc_oracle(std::size_t n, const Field& f) {
    if (n < 2 || n > 8) fail(Errc::BudgetExceeded, "hc oracle for 2 <= n <= 8");
    Poly total;
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 2);
    do {
        Monomial m;
        m[xvar(1, rest[0])] += 1;
        for (std::size_t i = 0; i + 1 < rest.size(); ++i) m[xvar(rest[i], rest[i + 1])] += 1;
        m[xvar(rest.back(), 1)] += 1;
        total.add_term(m, f.one());
    } while (std::next_permutation(rest.begin(), rest.end()));
    return total;
}

Poly imm_oracle(std::size_t n, std::size_t d, const Field& f) {
    if (std::pow(double(n), double(d)) > 1e6) fail(Errc::BudgetExceeded, "imm oracle");
    Poly total;
    std::vector<std::size_t> idx(d, 0);
    // trace: sum over closed index walks i_0 -> i_1 -> ... -> i_0
    while (true) {
        Monomial m;
        for (std::size_t k = 0; k < d; ++k)
            m[imm_var(k + 1, idx[k] + 1, idx[(k + 1) % d] + 1)] += 1;
        total.add_term(m, f.one());
        std::size_t k = 0;
        while (k < d && ++idx[k] == n) idx[k++] = 0;
        if (k == d) break;
    }
    return total;
}

Poly esym_oracle(std::size_t n, std::size_t d, const Field& f) {
    Poly total;
    std::vector<std::size_t> comb(d);
    std::iota(comb.begin(), comb.end(), 1);
    while (true) {
        Monomial m;
        for (std::size_t i : comb) m["x" + std::to_string(i)] = 1;
        total.add_term(m, f.one());
        // next d-combination of {1..n}
        std::size_t i = d;
        while (i > 0 && comb[i - 1] == n - d + i) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < d; ++j) comb[j] = comb[j - 1] + 1;
    }
    return total;
}

Poly cut_oracle(std::size_t n, const Field& f) {
    std::size_t q = f.characteristic();
    if (q < 2) fail(Errc::FieldTooSmall, "cut oracle needs F_q");
    Poly total;
    for (std::uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        std::vector<bool> inA(n + 1, false);
        inA[1] = true;
        for (std::size_t v = 2; v <= n; ++v) inA[v] = mask & (1ull << (v - 2));
        bool hasB = false;
        for (std::size_t v = 2; v <= n; ++v) hasB |= !inA[v];
        if (!hasB) continue;
        Monomial m;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (inA[i] != inA[j]) m[edge_var(i, j)] = static_cast<std::uint32_t>(q - 1);
        total.add_term(m, f.one());
    }
    return total;
}

} // namespace

Poly spanning_tree_gf(std::size_t n, const Field& f) {
    if (n < 1 || n > 7) fail(Errc::BudgetExceeded, "spanning trees for n <= 7");
    if (n == 1) return Poly(f.one());
    if (n == 2) {
        Poly p;
        p.add_term(Monomial{{edge_var(1, 2), 1}}, f.one());
        return p;
    }
    // enumerate Pruefer sequences; each decodes to a labeled tree on 1..n
    Poly total;
    std::vector<std::size_t> seq(n - 2, 1);
    while (true) {
        std::vector<std::size_t> degree(n + 1, 1);
        for (std::size_t v : seq) ++degree[v];
        Monomial m;
        for (std::size_t v : seq) {
            std::size_t leaf = 0;
            for (std::size_t u = 1; u <= n; ++u)
                if (degree[u] == 1) { leaf = u; break; }
            m[edge_var(leaf, v)] += 1;
            --degree[leaf]; // drops to 0, never picked again
            --degree[v];
        }
        std::size_t a = 0, b = 0;
        for (std::size_t u = 1; u <= n; ++u)
            if (degree[u] == 1) { (a ? b : a) = u; }
        m[edge_var(a, b)] += 1;
        total.add_term(m, f.one());
        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] > n) seq[k++] = 1;
        if (k == seq.size()) break;
    }
    return total;
}

Poly bipartite_matching_gf(std::size_t n, const Field& f) {
    if (n > 7) fail(Errc::BudgetExceeded, "matching enumeration for n <= 7");
    // perfect matchings of K_{n,n}: left vertex i matched to right vertex
    // match[i]; weight of edge (i,j) is x{i}_{j}
    Poly total;
    std::vector<std::size_t> match(n);
    std::iota(match.begin(), match.end(), 1);
    do {
        Monomial m;
        for (std::size_t i = 0; i < n; ++i) m[xvar(i + 1, match[i])] = 1;
        total.add_term(m, f.one());
    } while (std::next_permutation(match.begin(), match.end()));
    return total;
}

Poly family_oracle(const std::string& name, const FamilyParams& p, const Field& field) {
    if (name == "det") {
        if (p.n > 7) fail(Errc::BudgetExceeded, "det oracle for n <= 7");
        return det_oracle(p.n, field);
    }
    if (name == "per") {
        if (p.n > 7) fail(Errc::BudgetExceeded, "per oracle for n <= 7");
        return per_oracle(p.n, field);
    }
    if (name == "hc") return hc_oracle(p.n, field);
    if (name == "imm") return imm_oracle(p.n, p.d, field);
    if (name == "esym") return esym_oracle(p.n, p.d, field);
    if (name == "cut") return cut_oracle(p.n, field);
    if (name == "trees") return spanning_tree_gf(p.n, field);
    fail(Errc::ParamOutOfRange, "unknown family " + name);
}

FamilyDescriptor gen_family(const std::string& name, const FamilyParams& p, const Field& field) {
    FamilyDescriptor fd{name, {}, Circuit(field, {}), "", false, {}, {}};
    fd.params["n"] = p.n;
    if (name == "det") {
        fd.construction = berkowitz_det_circuit(p.n, field);
        fd.declared_class = "weakly-skew";
    } else if (name == "per") {
        fd.construction = ryser_formula(p.n, field);
        fd.declared_class = "formula";
    } else if (name == "hc") {
        fd.construction = hc_formula(p.n, field);
        fd.declared_class = "formula";
    } else if (name == "imm") {
        fd.params["d"] = p.d;
        fd.construction = imm_circuit(p.n, p.d, field);
        fd.declared_class = "skew";
    } else if (name == "esym") {
        fd.params["d"] = p.d;
        fd.construction = esym_circuit(p.n, p.d, field);
        fd.declared_class = "formula";
        fd.extra["layered-depth"] = "3"; // sum of products of sums
    } else if (name == "cut") {
        fd.params["q"] = field.characteristic();
        fd.construction = cut_circuit(p.n, field);
        fd.declared_class = "formula";
    } else if (name == "trees") {
        fd.construction = trees_circuit(p.n, field);
        fd.declared_class = "weakly-skew";
    } else {
        fail(Errc::ParamOutOfRange, "unknown family " + name);
    }
    fd.metadata = metrics(fd.construction);
    // verify against the definitional oracle when the instance is small
    try {
        fd.oracle_verified = expand(fd.construction) == family_oracle(name, p, field);
        if (!fd.oracle_verified)
            fail(Errc::BadMatrix, "family construction disagrees with its oracle");
    } catch (const Error& e) {
        if (e.code() != Errc::BudgetExceeded) throw;
    }
    return fd;
}

Poly exponential_sum(const Circuit& g, const std::vector<std::string>& summed_vars,
                     const ExpandOptions& opts) {
    if (summed_vars.size() > 20) fail(Errc::BudgetExceeded, "more than 20 summed variables");
    for (const auto& v : summed_vars) g.var_index(v); // UnknownVariable check
    std::set<std::string> summed(summed_vars.begin(), summed_vars.end());
    Poly p = expand(g, std::nullopt, opts);
    const Field& f = g.field();
    // sum_e m(e): each summed variable present in the monomial contributes a
    // factor 1 (e=1 branch), each absent one a factor 2
    Poly out;
    for (const auto& [m, coeff] : p.terms()) {
        Monomial rest;
        std::size_t present = 0;
        for (const auto& [v, e] : m) {
            if (summed.count(v)) ++present;
            else rest[v] = e;
        }
        Fe scale = f.element(mpz_class(1) << (summed.size() - present));
        out.add_term(rest, coeff * scale);
    }
    return out;
}

std::string serialize_family_meta(const FamilyDescriptor& f) {
    std::ostringstream out;
    out << "family " << f.name << "\n";
    for (const auto& [k, v] : f.params) out << k << ' ' << v << "\n";
    out << "class " << f.declared_class << "\n";
    out << "oracle-verified " << (f.oracle_verified ? "yes" : "not-checked") << "\n";
    out << "size " << f.metadata.size << "\ndepth " << f.metadata.depth << "\ndegree "
        << f.metadata.formal_degree << "\n";
    for (const auto& [k, v] : f.extra) out << k << ' ' << v << "\n";
    return out.str();
}

} // namespace acirc
