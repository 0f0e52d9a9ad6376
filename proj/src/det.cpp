#include "acirc/det.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace acirc {

AtomMatrix atom_matrix_zero(std::size_t n, const Field& f) {
    return AtomMatrix(n, std::vector<Atom>(n, Atom::of_const(f.zero())));
}

Poly symbolic_det_leibniz(const AtomMatrix& m, const Field& f) {
    std::size_t n = m.size();
    if (n > 10) fail(Errc::BudgetExceeded, "Leibniz determinant beyond side 10");
    Poly total;
    std::vector<bool> used(n, false);
    // row-by-row expansion; skips zero entries early
    auto rec = [&](auto&& self, std::size_t row, int sign, const Poly& prefix) -> void {
        if (row == n) {
            Poly t = prefix;
            if (sign < 0) t = Poly(f.zero()) - t;
            total += t;
            return;
        }
        for (std::size_t col = 0; col < n; ++col) {
            if (used[col] || m[row][col].is_zero()) continue;
            used[col] = true;
            // parity of the number of used columns above `col` flips the sign
            int inversions = 0;
            for (std::size_t c = col + 1; c < n; ++c)
                if (used[c]) ++inversions;
            self(self, row + 1, inversions % 2 ? -sign : sign, prefix * m[row][col].poly(f));
            used[col] = false;
        }
    };
    rec(rec, 0, 1, Poly(f.one()));
    return total;
}

Poly symbolic_det_cycle_covers(const AtomMatrix& m, const Field& f) {
    // det(A) = sum over cycle covers of sgn(cover) * weight(cover), where
    // sgn is (-1)^(n - #cycles); independent of the Leibniz route above.
    std::size_t n = m.size();
    Poly total;
    std::vector<bool> covered(n, false);
    auto rec = [&](auto&& self, std::size_t ncycles, const Poly& prefix) -> void {
        std::size_t start = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!covered[v]) { start = v; break; }
        if (start == n) {
            Poly t = prefix;
            if ((n - ncycles) % 2) t = Poly(f.zero()) - t;
            total += t;
            return;
        }
        covered[start] = true;
        // walk a cycle from `start` through uncovered nodes back to start
        auto walk = [&](auto&& wself, std::size_t at, const Poly& acc) -> void {
            if (!m[at][start].is_zero())
                self(self, ncycles + 1, acc * m[at][start].poly(f));
            for (std::size_t nxt = start + 1; nxt < n; ++nxt) {
                if (covered[nxt] || m[at][nxt].is_zero()) continue;
                covered[nxt] = true;
                wself(wself, nxt, acc * m[at][nxt].poly(f));
                covered[nxt] = false;
            }
        };
        walk(walk, start, prefix);
        covered[start] = false;
    };
    rec(rec, 0, Poly(f.one()));
    return total;
}

Poly symbolic_det(const AtomMatrix& m, const Field& f) {
    return m.size() <= 8 ? symbolic_det_leibniz(m, f) : symbolic_det_cycle_covers(m, f);
}

Fe det_by_elimination(std::vector<std::vector<Fe>> m, const Field& f) {
    std::size_t n = m.size();
    Fe det = f.one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return f.zero();
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        Fe inv = m[col][col].inv();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            Fe factor = m[r][col] * inv;
            for (std::size_t j = col; j < n; ++j) m[r][j] = m[r][j] - factor * m[col][j];
        }
    }
    return det;
}

Fe eval_atom_matrix_det(const AtomMatrix& m, const Field& f,
                        const std::map<std::string, Fe>& point) {
    std::vector<std::vector<Fe>> num(m.size(), std::vector<Fe>(m.size(), f.zero()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) num[i][j] = m[i][j].eval(point);
    return det_by_elimination(std::move(num), f);
}

std::size_t ProjectionMatrix::offdiag_nonzeros() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = 0; j < matrix.size(); ++j)
            if (i != j && !matrix[i][j].is_zero()) ++k;
    return k;
}

bool ProjectionMatrix::diagonal_zero_one() const {
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        const Atom& a = matrix[i][i];
        if (a.is_var()) return false;
        if (!(a.constant.is_zero() || a.constant.is_one())) return false;
    }
    return true;
}

std::string poly_hash(const Poly& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (char ch : p.str()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

// --- ABP -> determinant ------------------------------------------------------

namespace {

struct PreparedAbp {
    Abp abp;                 // normalized, constant-parallels merged, rest subdivided
    std::size_t subdivisions = 0;
};

/// Merges parallel constant edges, then subdivides whatever else would
/// collide in the adjacency matrix: leftover parallel edges and any
/// source-sink edge that cannot sit on the merged node's diagonal.
PreparedAbp prepare_for_matrix(const Abp& input, bool strict_diagonal, bool allow_trivial) {
    Abp norm = input.normalized();
    const Field& f = norm.field();
    // trivial projection: one edge source -> sink keeps its weight as the
    // whole 1x1 matrix; the sign fix is absorbed into the entry
    if (allow_trivial && norm.num_nodes() == 2 && norm.edges().size() == 1)
        strict_diagonal = false;

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Weight>> groups;
    for (const auto& e : norm.edges()) {
        auto& g = groups[{e.from, e.to}];
        if (!e.weight.is_var()) {
            // fold constants together
            for (auto& w : g)
                if (!w.is_var()) {
                    w = Weight::of_const(w.constant + e.weight.constant);
                    goto next_edge;
                }
        }
        g.push_back(e.weight);
    next_edge:;
    }

    std::vector<std::string> names;
    for (std::uint32_t v = 0; v < norm.num_nodes(); ++v) names.push_back(norm.node_name(v));
    Abp out(f, names, norm.source(), norm.sink());
    std::size_t subdivisions = 0;
    auto subdivide = [&](std::uint32_t from, std::uint32_t to, const Weight& w) {
        std::uint32_t q = out.add_node("q" + std::to_string(out.num_nodes()));
        out.add_edge(from, q, w);
        out.add_edge(q, to, Weight::of_const(f.one()));
        ++subdivisions;
    };

    for (auto& [key, ws] : groups) {
        auto [from, to] = key;
        bool direct = (from == norm.source() && to == norm.sink());
        // drop exact-zero constant edges; they contribute nothing
        std::erase_if(ws, [](const Weight& w) { return !w.is_var() && w.constant.is_zero(); });
        bool slot_free = true;
        for (const auto& w : ws) {
            bool can_keep = slot_free;
            if (direct && strict_diagonal) {
                // the slot is the merged node's diagonal entry: only 1 fits
                can_keep = can_keep && !w.is_var() && w.constant.is_one();
            }
            if (can_keep) {
                out.add_edge(from, to, w);
                slot_free = false;
            } else {
                subdivide(from, to, w);
            }
        }
    }
    return PreparedAbp{out, subdivisions};
}

/// Shared core: adjacency matrix of the source=sink merged digraph with
/// 1-loops at the other nodes. `negate_all` gives the textbook intermediate
/// (det = -f); otherwise edges leaving the merged node stay positive and
/// det = f directly.
AtomMatrix merged_matrix(const Abp& a, bool negate_all) {
    const Field& f = a.field();
    auto order = a.topo_order();
    std::vector<std::uint32_t> index(a.num_nodes(), 0);
    std::uint32_t next = 1; // 0 is the merged source/sink node
    for (std::uint32_t v : order)
        if (v != a.source() && v != a.sink()) index[v] = next++;
    AtomMatrix m = atom_matrix_zero(next, f);
    for (std::uint32_t i = 1; i < next; ++i) m[i][i] = Atom::of_const(f.one());
    for (const auto& e : a.edges()) {
        std::uint32_t i = index[e.from], j = index[e.to];
        bool negated = negate_all || e.from != a.source();
        if (!m[i][j].is_zero()) fail(Errc::BadMatrix, "entry collision after subdivision");
        m[i][j] = Atom::of_weight(e.weight, negated);
    }
    return m;
}

} // namespace

AtomMatrix abp_to_det_negated(const Abp& a) {
    return merged_matrix(prepare_for_matrix(a, true, true).abp, true);
}

ProjectionMatrix abp_to_det_projection(const Abp& a, const DetProjectionOptions& opts) {
    // when padding past side 1 is requested anyway, subdividing the trivial
    // single-edge program keeps the diagonal in {0,1}
    bool allow_trivial = !opts.pad_to_side || *opts.pad_to_side <= 1;
    PreparedAbp prep = prepare_for_matrix(a, true, allow_trivial);
    ProjectionMatrix out;
    out.field = a.field();
    out.identity = CertifiedIdentity::DetEquals;
    out.matrix = merged_matrix(prep.abp, false);
    out.abp_nodes = prep.abp.num_nodes();
    out.abp_edges = prep.abp.edges().size();
    out.subdivisions = prep.subdivisions;
    out.provenance = "abp-det";
    if (opts.pad_to_side && *opts.pad_to_side > out.matrix.size()) {
        std::size_t n = *opts.pad_to_side;
        AtomMatrix padded = atom_matrix_zero(n, out.field);
        for (std::size_t i = 0; i < out.matrix.size(); ++i)
            for (std::size_t j = 0; j < out.matrix.size(); ++j) padded[i][j] = out.matrix[i][j];
        for (std::size_t i = out.matrix.size(); i < n; ++i)
            padded[i][i] = Atom::of_const(out.field.one());
        out.matrix = std::move(padded);
    }
    return out;
}

// --- affine dc certificates --------------------------------------------------

bool AffineEntry::is_zero() const {
    if (!constant.is_zero()) return false;
    for (const auto& [v, c] : linear)
        if (!c.is_zero()) return false;
    return true;
}

Poly AffineEntry::poly(const Field& f) const {
    Poly p(constant);
    for (const auto& [v, c] : linear)
        p += Poly(c) * Poly::variable(v, f.characteristic());
    return p;
}

DcCertificate formula_dc_certificate(const Circuit& formula) {
    Abp a = weakly_skew_to_abp(formula).normalized();
    const Field& f = a.field();
    auto order = a.topo_order();
    std::vector<std::uint32_t> index(a.num_nodes(), 0);
    std::uint32_t next = 1;
    for (std::uint32_t v : order)
        if (v != a.source() && v != a.sink()) index[v] = next++;

    DcCertificate cert;
    cert.field = f;
    cert.matrix.assign(next, std::vector<AffineEntry>(next, AffineEntry{f.zero(), {}}));
    for (std::uint32_t i = 1; i < next; ++i) cert.matrix[i][i].constant = f.one();
    for (const auto& e : a.edges()) {
        std::uint32_t i = index[e.from], j = index[e.to];
        bool negated = e.from != a.source();
        AffineEntry& entry = cert.matrix[i][j];
        if (e.weight.is_var()) {
            Fe coef = negated ? f.minus_one() : f.one();
            auto [it, fresh] = entry.linear.emplace(*e.weight.var, coef);
            if (!fresh) it->second = it->second + coef;
        } else {
            entry.constant = entry.constant + (negated ? -e.weight.constant : e.weight.constant);
        }
    }
    return cert;
}

Poly symbolic_det_affine(const DcCertificate& cert, const ExpandOptions& opts) {
    std::size_t n = cert.side();
    if (n > 12) fail(Errc::BudgetExceeded, "affine determinant beyond side 12");
    Poly total;
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t row, int sign, const Poly& prefix) -> void {
        if (prefix.term_count() > opts.term_budget) fail(Errc::BudgetExceeded, "affine determinant");
        if (row == n) {
            Poly t = prefix;
            if (sign < 0) t = Poly(cert.field.zero()) - t;
            total += t;
            return;
        }
        for (std::size_t col = 0; col < n; ++col) {
            if (used[col] || cert.matrix[row][col].is_zero()) continue;
            used[col] = true;
            int inversions = 0;
            for (std::size_t c = col + 1; c < n; ++c)
                if (used[c]) ++inversions;
            self(self, row + 1, inversions % 2 ? -sign : sign,
                 prefix * cert.matrix[row][col].poly(cert.field));
            used[col] = false;
        }
    };
    rec(rec, 0, 1, Poly(cert.field.one()));
    return total;
}

// --- Le Verrier / Csanky -----------------------------------------------------

namespace {

using FeMatrix = std::vector<std::vector<Fe>>;

FeMatrix mat_mul(const FeMatrix& a, const FeMatrix& b, const Field& f) {
    std::size_t n = a.size();
    FeMatrix r(n, std::vector<Fe>(n, f.zero()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) r[i][j] = r[i][j] + a[i][k] * b[k][j];
        }
    return r;
}

/// Inverse of a lower-triangular matrix by the 2x2 block recursion
///   inv([[S1,0],[S3,S2]]) = [[S1^-1, 0], [-S2^-1 S3 S1^-1, S2^-1]].
FeMatrix invert_lower_triangular(const FeMatrix& s, const Field& f) {
    std::size_t n = s.size();
    if (n == 1) return {{s[0][0].inv()}};
    std::size_t h = n / 2;
    auto block = [&](std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
        FeMatrix b(rows, std::vector<Fe>(cols, f.zero()));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) b[i][j] = s[r0 + i][c0 + j];
        return b;
    };
    FeMatrix s1i = invert_lower_triangular(block(0, 0, h, h), f);
    FeMatrix s2i = invert_lower_triangular(block(h, h, n - h, n - h), f);
    FeMatrix s3 = block(h, 0, n - h, h);

    FeMatrix r(n, std::vector<Fe>(n, f.zero()));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) r[i][j] = s1i[i][j];
    for (std::size_t i = 0; i < n - h; ++i)
        for (std::size_t j = 0; j < n - h; ++j) r[h + i][h + j] = s2i[i][j];
    // -S2^-1 S3 S1^-1, shapes (n-h) x h
    FeMatrix t(n - h, std::vector<Fe>(h, f.zero()));
    for (std::size_t i = 0; i < n - h; ++i)
        for (std::size_t k = 0; k < h; ++k) {
            Fe acc = f.zero();
            for (std::size_t l = 0; l < n - h; ++l) acc = acc + s2i[i][l] * s3[l][k];
            t[i][k] = acc;
        }
    for (std::size_t i = 0; i < n - h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            Fe acc = f.zero();
            for (std::size_t k = 0; k < h; ++k) acc = acc + t[i][k] * s1i[k][j];
            r[h + i][j] = -acc;
        }
    return r;
}

} // namespace

std::vector<Fe> csanky_charpoly(const FeMatrix& a, const Field& f) {
    std::size_t n = a.size();
    if (f.is_prime_field() && f.characteristic() <= n)
        fail(Errc::CharacteristicTooSmall,
             "p = " + std::to_string(f.characteristic()) + " but n = " + std::to_string(n));
    if (n == 0) return {};
    // power traces s_k = trace(A^k)
    std::vector<Fe> traces(n + 1, f.zero());
    FeMatrix pw = a;
    for (std::size_t k = 1; k <= n; ++k) {
        Fe tr = f.zero();
        for (std::size_t i = 0; i < n; ++i) tr = tr + pw[i][i];
        traces[k] = tr;
        if (k < n) pw = mat_mul(pw, a, f);
    }
    // triangular Newton system S c = s
    FeMatrix s(n, std::vector<Fe>(n, f.zero()));
    for (std::size_t i = 0; i < n; ++i) {
        s[i][i] = f.element(static_cast<long>(i + 1));
        for (std::size_t j = 0; j < i; ++j) s[i][j] = traces[i - j];
    }
    FeMatrix si = invert_lower_triangular(s, f);
    std::vector<Fe> c(n, f.zero());
    for (std::size_t i = 0; i < n; ++i) {
        Fe acc = f.zero();
        for (std::size_t j = 0; j <= i; ++j) acc = acc + si[i][j] * traces[j + 1];
        c[i] = acc;
    }
    return c;
}

// --- Berkowitz circuit -------------------------------------------------------

Circuit berkowitz_det_circuit(std::size_t n, const Field& field) {
    if (n < 1) fail(Errc::ParamOutOfRange, "n >= 1 required");
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            vars.push_back("x" + std::to_string(i) + "_" + std::to_string(j));
    Circuit c(field, vars);

    // every multiplication reads a freshly copied input gate, which keeps
    // the circuit skew and therefore weakly-skew
    auto in = [&](std::size_t i, std::size_t j) {
        return c.add_input_var("x" + std::to_string(i) + "_" + std::to_string(j));
    };
    auto neg = [&](GateId g) { return c.add_gate(GateKind::Mul, c.add_input_const(field.minus_one()), g); };

    // p^0 = (1)
    std::vector<GateId> p{c.add_input_const(field.one())};

    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<GateId> q(k + 1);
        // v_i[l], l = 1..k-1: v_i = S p[i-2] + M v_{i-1} with S[l] = x_{l,k},
        // M = leading (k-1) block, R[l] = x_{k,l}; then
        // q[i] = p[i] - x_{k,k} p[i-1] - R . v_i
        std::vector<GateId> v_prev; // v_{i-1}
        for (std::size_t i = 0; i <= k; ++i) {
            std::vector<GateId> v_cur;
            if (i >= 2 && k >= 2) {
                v_cur.resize(k - 1);
                for (std::size_t l = 1; l <= k - 1; ++l) {
                    GateId acc = c.add_gate(GateKind::Mul, in(l, k), p[i - 2]);
                    if (!v_prev.empty()) {
                        for (std::size_t l2 = 1; l2 <= k - 1; ++l2) {
                            GateId t = c.add_gate(GateKind::Mul, in(l, l2), v_prev[l2 - 1]);
                            acc = c.add_gate(GateKind::Add, acc, t);
                        }
                    }
                    v_cur[l - 1] = acc;
                }
            }
            // assemble q[i]
            std::optional<GateId> minus_part; // x_kk p[i-1] + R . v_i
            if (i >= 1 && i - 1 < p.size())
                minus_part = c.add_gate(GateKind::Mul, in(k, k), p[i - 1]);
            if (!v_cur.empty()) {
                GateId dot = c.add_gate(GateKind::Mul, in(k, 1), v_cur[0]);
                for (std::size_t l = 2; l <= k - 1; ++l)
                    dot = c.add_gate(GateKind::Add, dot, c.add_gate(GateKind::Mul, in(k, l), v_cur[l - 1]));
                minus_part = minus_part ? c.add_gate(GateKind::Add, *minus_part, dot) : dot;
            }
            std::optional<GateId> acc;
            if (i < p.size()) acc = p[i];
            if (minus_part) {
                GateId negated = neg(*minus_part);
                acc = acc ? c.add_gate(GateKind::Add, *acc, negated) : negated;
            }
            q[i] = acc.value(); // i = 0 keeps p[0], the constant 1
            v_prev = std::move(v_cur);
        }
        p = std::move(q);
    }
    GateId det = p[n];
    if (n % 2) det = neg(det);
    c.set_outputs({det});
    return c;
}

AtomMatrix per2_sign_trick() {
    AtomMatrix m = atom_matrix_zero(2, Field::rationals());
    m[0][0] = Atom::of_var("a");
    m[0][1] = Atom::of_var("b", true);
    m[1][0] = Atom::of_var("c");
    m[1][1] = Atom::of_var("d");
    return m;
}

// --- matrix files ------------------------------------------------------------

std::string serialize_atom_matrix(const AtomMatrix& m) {
    std::ostringstream out;
    out << "matrix " << m.size() << "\n";
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j].str();
        out << "\n";
    }
    return out.str();
}

namespace {

Atom parse_atom(const std::string& tok, const Field& f) {
    auto is_ident_start = [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (is_ident_start(tok[0])) return Atom::of_var(tok);
    if (tok.size() > 1 && tok[0] == '-' && is_ident_start(tok[1])) return Atom::of_var(tok.substr(1), true);
    return Atom::of_const(f.parse_literal(tok));
}

} // namespace

AtomMatrix parse_atom_matrix(const std::string& text, const Field& f) {
    std::istringstream in(text);
    std::string kw;
    std::size_t n;
    if (!(in >> kw >> n) || kw != "matrix") fail(Errc::BadMatrix, "expected 'matrix <n>'");
    AtomMatrix m = atom_matrix_zero(n, f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) fail(Errc::BadMatrix, "missing entries");
            m[i][j] = parse_atom(tok, f);
        }
    return m;
}

std::string serialize_projection(const ProjectionMatrix& m) {
    std::ostringstream out;
    out << serialize_atom_matrix(m.matrix);
    out << "field " << m.field.describe() << "\n";
    out << "identity " << (m.identity == CertifiedIdentity::DetEquals ? "det" : "per") << "\n";
    out << "trace nodes=" << m.abp_nodes << " edges=" << m.abp_edges
        << " subdivisions=" << m.subdivisions << "\n";
    if (!m.provenance.empty()) out << "provenance " << m.provenance << "\n";
    if (m.target) {
        out << "target-hash " << m.target_hash << "\n";
        std::istringstream terms(m.target->str());
        std::string line;
        while (std::getline(terms, line)) out << "target " << line << "\n";
    }
    if (!m.summed_vars.empty()) {
        out << "sum";
        for (const auto& v : m.summed_vars) out << ' ' << v;
        out << "\n";
    }
    if (m.source_circuit) {
        std::istringstream src(*m.source_circuit);
        std::string line;
        while (std::getline(src, line)) out << "source " << line << "\n";
    }
    return out.str();
}

ProjectionMatrix parse_projection(const std::string& text) {
    // pass 1: the field line, needed to interpret entries
    Field field = Field::rationals();
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string kw;
            ls >> kw;
            if (kw == "field") {
                std::string k;
                ls >> k;
                if (k == "Q") field = Field::rationals();
                else {
                    std::uint64_t p;
                    ls >> p;
                    field = Field::prime(p);
                }
            }
        }
    }
    ProjectionMatrix m;
    m.field = field;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0, row = 0;
    std::string target_text;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "matrix") {
            ls >> n;
            m.matrix = atom_matrix_zero(n, field);
        } else if (row < n && m.matrix.size() == n && kw != "field" && kw != "identity" &&
                   kw != "target" && kw != "target-hash" && kw != "trace" && kw != "provenance" &&
                   kw != "sum" && kw != "source") {
            m.matrix[row][0] = parse_atom(kw, field);
            for (std::size_t j = 1; j < n; ++j) {
                std::string tok;
                if (!(ls >> tok)) fail(Errc::BadMatrix, "short row");
                m.matrix[row][j] = parse_atom(tok, field);
            }
            ++row;
        } else if (kw == "identity") {
            std::string which;
            ls >> which;
            m.identity = which == "per" ? CertifiedIdentity::PerEquals : CertifiedIdentity::DetEquals;
        } else if (kw == "target-hash") {
            ls >> m.target_hash;
        } else if (kw == "target") {
            std::string rest;
            std::getline(ls, rest);
            target_text += rest + "\n";
        } else if (kw == "sum") {
            std::string v;
            while (ls >> v) m.summed_vars.push_back(v);
        } else if (kw == "source") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
            m.source_circuit = m.source_circuit.value_or("") + rest + "\n";
        } else if (kw == "provenance") {
            ls >> m.provenance;
        } else if (kw == "trace") {
            std::string fieldv;
            while (ls >> fieldv) {
                auto eq = fieldv.find('=');
                if (eq == std::string::npos) continue;
                auto key = fieldv.substr(0, eq);
                auto val = std::stoull(fieldv.substr(eq + 1));
                if (key == "nodes") m.abp_nodes = val;
                else if (key == "edges") m.abp_edges = val;
                else if (key == "subdivisions") m.subdivisions = val;
            }
        }
    }
    if (row != n) fail(Errc::BadMatrix, "row count mismatch");
    if (!target_text.empty()) m.target = parse_poly(target_text, field);
    return m;
}

} // namespace acirc
