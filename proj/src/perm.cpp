#include "acirc/perm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acirc {

std::uint32_t WeightedDigraph::add_node(const std::string& name) {
    names_.push_back(name.empty() ? "v" + std::to_string(names_.size()) : name);
    return static_cast<std::uint32_t>(names_.size() - 1);
}

void WeightedDigraph::add_edge(std::uint32_t from, std::uint32_t to, Weight w) {
    if (from >= names_.size() || to >= names_.size()) fail(Errc::BadAbp, "edge endpoint out of range");
    auto [it, fresh] = edges_.emplace(std::make_pair(from, to), std::move(w));
    if (!fresh)
        fail(Errc::DuplicateEdge, names_[from] + " -> " + names_[to]);
}

AtomMatrix WeightedDigraph::adjacency() const {
    AtomMatrix m = atom_matrix_zero(num_nodes(), field_);
    for (const auto& [key, w] : edges_) m[key.first][key.second] = Atom::of_weight(w, false);
    return m;
}

std::uint32_t Multidigraph::add_node(const std::string& name) {
    names_.push_back(name.empty() ? "v" + std::to_string(names_.size()) : name);
    return static_cast<std::uint32_t>(names_.size() - 1);
}

std::size_t Multidigraph::add_edge(std::uint32_t from, std::uint32_t to, Weight w) {
    if (from >= names_.size() || to >= names_.size()) fail(Errc::BadAbp, "edge endpoint out of range");
    edges_.push_back(MultiEdge{from, to, std::move(w), false});
    return edges_.size() - 1;
}

bool Multidigraph::is_simple() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& e : edges_) {
        if (e.removed) continue;
        if (!seen.insert({e.from, e.to}).second) return false;
    }
    return true;
}

WeightedDigraph Multidigraph::to_simple() const {
    WeightedDigraph g(field_);
    for (std::uint32_t v = 0; v < names_.size(); ++v) g.add_node(names_[v]);
    for (const auto& e : edges_)
        if (!e.removed) g.add_edge(e.from, e.to, e.weight);
    return g;
}

AtomMatrix Multidigraph::adjacency() const {
    if (!is_simple()) fail(Errc::DuplicateEdge, "parallel edges have no adjacency matrix");
    AtomMatrix m = atom_matrix_zero(num_nodes(), field_);
    for (const auto& e : edges_)
        if (!e.removed) m[e.from][e.to] = Atom::of_weight(e.weight, false);
    return m;
}

// --- cycle-cover enumeration ---------------------------------------------

std::vector<std::vector<std::size_t>> cycle_covers(const Multidigraph& g, std::size_t max_nodes,
                                                   std::size_t max_covers) {
    std::size_t n = g.num_nodes();
    if (n > max_nodes) fail(Errc::BudgetExceeded, "cycle-cover enumeration beyond the node cap");
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> out(n); // (to, handle)
    const auto& es = g.all_edges();
    for (std::size_t h = 0; h < es.size(); ++h)
        if (!es[h].removed) out[es[h].from].push_back({es[h].to, h});

    std::vector<std::vector<std::size_t>> covers;
    std::vector<bool> covered(n, false);
    std::vector<std::size_t> chosen;

    auto rec = [&](auto&& self) -> void {
        std::size_t start = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!covered[v]) { start = v; break; }
        if (start == n) {
            if (covers.size() >= max_covers) fail(Errc::BudgetExceeded, "cycle-cover explosion");
            covers.push_back(chosen);
            return;
        }
        covered[start] = true;
        // grow a cycle whose minimum node is `start`
        auto walk = [&](auto&& wself, std::uint32_t at) -> void {
            for (auto [to, h] : out[at]) {
                if (to == start) {
                    chosen.push_back(h);
                    self(self);
                    chosen.pop_back();
                } else if (to > start && !covered[to]) {
                    covered[to] = true;
                    chosen.push_back(h);
                    wself(wself, to);
                    chosen.pop_back();
                    covered[to] = false;
                }
            }
        };
        walk(walk, static_cast<std::uint32_t>(start));
        covered[start] = false;
    };
    rec(rec);
    return covers;
}

Poly cover_weight(const Multidigraph& g, const std::vector<std::size_t>& cover) {
    Poly w(g.field().one());
    std::uint64_t mod = g.field().characteristic();
    for (std::size_t h : cover) w = w * g.edge(h).weight.poly(mod);
    return w;
}

Poly per_by_cycle_covers(const Multidigraph& g, std::size_t max_nodes) {
    Poly total;
    for (const auto& cover : cycle_covers(g, max_nodes)) total += cover_weight(g, cover);
    return total;
}

Multidigraph digraph_from_matrix(const AtomMatrix& m, const Field& f) {
    Multidigraph g(f);
    for (std::size_t i = 0; i < m.size(); ++i) g.add_node();
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            const Atom& a = m[i][j];
            if (a.is_zero()) continue;
            Weight w = a.is_var() ? Weight::of_var(*a.var) : Weight::of_const(a.constant);
            if (a.is_var() && a.neg) {
                // signed variables do not fit the weight alphabet; callers
                // only use this on permanent-side matrices, which carry none
                fail(Errc::BadMatrix, "negated variable entry in digraph view");
            }
            g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), w);
        }
    return g;
}

// --- permanents ------------------------------------------------------------

Poly brute_per(const AtomMatrix& m, const Field& f) {
    std::size_t n = m.size();
    if (n > 7) fail(Errc::BudgetExceeded, "brute permanent beyond side 7");
    Poly total;
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t row, const Poly& prefix) -> void {
        if (row == n) {
            total += prefix;
            return;
        }
        for (std::size_t col = 0; col < n; ++col) {
            if (used[col] || m[row][col].is_zero()) continue;
            used[col] = true;
            self(self, row + 1, prefix * m[row][col].poly(f));
            used[col] = false;
        }
    };
    rec(rec, 0, Poly(f.one()));
    return total;
}

Fe ryser_reference(const std::vector<std::vector<Fe>>& m, const Field& f) {
    std::size_t n = m.size();
    if (n > 20) fail(Errc::BudgetExceeded, "reference Ryser beyond side 20");
    if (n == 0) return f.one();
    Fe total = f.zero();
    for (std::uint64_t excl = 0; excl < (1ull << n); ++excl) {
        Fe prod = f.one();
        for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) {
            Fe row = f.zero();
            for (std::size_t j = 0; j < n; ++j)
                if (!(excl & (1ull << j))) row = row + m[i][j];
            prod = prod * row;
        }
        bool odd = __builtin_popcountll(excl) & 1;
        total = odd ? total - prod : total + prod;
    }
    return total;
}

namespace {

/// One Gray-code chunk [lo, hi) of the subset walk; rows hold the running
/// sums over the columns outside the current exclusion mask.
Fe ryser_chunk(const std::vector<std::vector<Fe>>& m, const Field& f, std::uint64_t lo,
               std::uint64_t hi) {
    std::size_t n = m.size();
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };
    std::uint64_t mask = gray(lo);
    std::vector<Fe> rows(n, f.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(mask & (1ull << j))) rows[i] = rows[i] + m[i][j];
    Fe total = f.zero();
    for (std::uint64_t k = lo; k < hi; ++k) {
        Fe prod = f.one();
        for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) prod = prod * rows[i];
        bool odd = __builtin_popcountll(mask) & 1;
        total = odd ? total - prod : total + prod;
        if (k + 1 < hi) {
            std::uint64_t nxt = gray(k + 1);
            std::uint64_t flip = mask ^ nxt;
            std::size_t j = static_cast<std::size_t>(__builtin_ctzll(flip));
            bool nowExcluded = nxt & flip;
            for (std::size_t i = 0; i < n; ++i)
                rows[i] = nowExcluded ? rows[i] - m[i][j] : rows[i] + m[i][j];
            mask = nxt;
        }
    }
    return total;
}

} // namespace

namespace {

/// Prime-field chunk on raw residues; avoids per-step field-element
/// temporaries. Same walk and the same exact sums as ryser_chunk.
std::uint64_t ryser_chunk_u64(const std::vector<std::vector<std::uint64_t>>& m, std::uint64_t p,
                              std::uint64_t lo, std::uint64_t hi) {
    std::size_t n = m.size();
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };
    std::uint64_t mask = gray(lo);
    std::vector<std::uint64_t> rows(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (!(mask & (1ull << j))) {
                acc += m[i][j];
                if (acc >= p) acc -= p;
            }
        rows[i] = acc;
    }
    std::uint64_t total = 0;
    for (std::uint64_t k = lo; k < hi; ++k) {
        std::uint64_t prod = 1 % p;
        for (std::size_t i = 0; i < n && prod; ++i) prod = mulmod_u64(prod, rows[i], p);
        if (__builtin_popcountll(mask) & 1) {
            total = total >= prod ? total - prod : total + p - prod;
        } else {
            total += prod;
            if (total >= p) total -= p;
        }
        if (k + 1 < hi) {
            std::uint64_t nxt = gray(k + 1);
            std::uint64_t flip = mask ^ nxt;
            std::size_t j = static_cast<std::size_t>(__builtin_ctzll(flip));
            bool nowExcluded = nxt & flip;
            for (std::size_t i = 0; i < n; ++i) {
                if (nowExcluded) {
                    rows[i] = rows[i] >= m[i][j] ? rows[i] - m[i][j] : rows[i] + p - m[i][j];
                } else {
                    rows[i] += m[i][j];
                    if (rows[i] >= p) rows[i] -= p;
                }
            }
            mask = nxt;
        }
    }
    return total;
}

} // namespace

Fe ryser(const std::vector<std::vector<Fe>>& m, const Field& f) {
    std::size_t n = m.size();
    if (n > 30) fail(Errc::BudgetExceeded, "Ryser beyond side 30");
    if (n == 0) return f.one();
    std::uint64_t total_masks = 1ull << n;

    if (f.is_prime_field()) {
        std::uint64_t p = f.characteristic();
        std::vector<std::vector<std::uint64_t>> raw(n, std::vector<std::uint64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) raw[i][j] = m[i][j].residue();
        std::uint64_t total = 0;
#ifdef _OPENMP
        if (n >= 14) {
            std::uint64_t chunks = static_cast<std::uint64_t>(omp_get_max_threads());
            std::vector<std::uint64_t> partial(chunks, 0);
#pragma omp parallel for schedule(static)
            for (std::uint64_t c = 0; c < chunks; ++c) {
                std::uint64_t lo = total_masks * c / chunks;
                std::uint64_t hi = total_masks * (c + 1) / chunks;
                partial[c] = ryser_chunk_u64(raw, p, lo, hi);
            }
            for (std::uint64_t x : partial) {
                total += x;
                if (total >= p) total -= p;
            }
            return Fe::make_residue(p, total);
        }
#endif
        total = ryser_chunk_u64(raw, p, 0, total_masks);
        return Fe::make_residue(p, total);
    }
    return ryser_chunk(m, f, 0, total_masks);
}

Poly ryser_symbolic(const AtomMatrix& m, const Field& f, const ExpandOptions& opts) {
    std::size_t n = m.size();
    if (n > 20) fail(Errc::BudgetExceeded, "symbolic Ryser beyond side 20");
    std::vector<std::vector<Poly>> entry(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) entry[i][j] = m[i][j].poly(f);
    Poly total;
    for (std::uint64_t excl = 0; excl < (1ull << n); ++excl) {
        Poly prod(f.one());
        for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) {
            Poly row;
            for (std::size_t j = 0; j < n; ++j)
                if (!(excl & (1ull << j))) row += entry[i][j];
            prod = prod * row;
            if (prod.term_count() > opts.term_budget) fail(Errc::BudgetExceeded, "symbolic Ryser");
        }
        if (__builtin_popcountll(excl) & 1) total = total - prod;
        else total += prod;
    }
    return total;
}

Fe eval_atom_matrix_per(const AtomMatrix& m, const Field& f,
                        const std::map<std::string, Fe>& point) {
    std::vector<std::vector<Fe>> num(m.size(), std::vector<Fe>(m.size(), f.zero()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) num[i][j] = m[i][j].eval(point);
    return ryser(num, f);
}

// --- gadgets -----------------------------------------------------------------

AtomMatrix k_gadget(const Field& f) {
    AtomMatrix k = atom_matrix_zero(3, f);
    Fe half = f.half();
    k[0][0] = Atom::of_const(f.minus_one());
    k[0][1] = Atom::of_const(f.one());
    k[0][2] = Atom::of_const(half);
    k[1][0] = Atom::of_const(f.one());
    k[1][1] = Atom::of_const(f.one());
    k[1][2] = Atom::of_const(-half);
    k[2][0] = Atom::of_const(f.one());
    k[2][1] = Atom::of_const(f.one());
    k[2][2] = Atom::of_const(-half);
    return k;
}

Rosette build_rosette(std::size_t mu, const Field& f) {
    if (mu < 1) fail(Errc::ParamOutOfRange, "rosette needs mu >= 1");
    Multidigraph g(f);
    std::vector<std::uint32_t> u(mu), v(mu);
    for (std::size_t i = 0; i < mu; ++i) u[i] = g.add_node("u" + std::to_string(i + 1));
    for (std::size_t i = 0; i < mu; ++i) v[i] = g.add_node("v" + std::to_string(i + 1));
    Weight one = Weight::of_const(f.one());
    Rosette r{std::move(g), {}};
    for (std::size_t i = 0; i < mu; ++i) {
        std::size_t nxt = (i + 1) % mu;
        r.connectors.push_back(r.graph.add_edge(u[i], u[nxt], one)); // connector c_{i+1}
        r.graph.add_edge(u[i], v[i], one);
        r.graph.add_edge(v[i], u[nxt], one);
    }
    for (std::size_t i = 0; i < mu; ++i) {
        r.graph.add_edge(u[i], u[i], one);
        r.graph.add_edge(v[i], v[i], one);
    }
    return r;
}

void iff_couple(Multidigraph& g, std::size_t c, std::size_t c_prime) {
    if (g.field().characteristic() == 2) fail(Errc::CharacteristicTwo, "iff-coupling needs 1/2");
    if (c == c_prime || g.edge(c).removed || g.edge(c_prime).removed)
        fail(Errc::BadAbp, "coupled edges must be live and distinct");
    const MultiEdge e = g.edge(c);
    const MultiEdge ep = g.edge(c_prime);
    // the two coupled edges may each be loops, but must not touch each other
    for (std::uint32_t a : {e.from, e.to})
        for (std::uint32_t b : {ep.from, ep.to})
            if (a == b) fail(Errc::SharedEndpoints, "coupled edges share a node");

    const Field& f = g.field();
    Weight one = Weight::of_const(f.one());
    std::uint32_t p1 = g.add_node();
    std::uint32_t p2 = g.add_node();
    std::uint32_t p3 = g.add_node();
    g.remove_edge(c);
    g.remove_edge(c_prime);
    g.add_edge(e.from, p1, e.weight); // c_-
    g.add_edge(p2, e.to, one);
    g.add_edge(ep.from, p3, ep.weight); // c'_-
    g.add_edge(p3, ep.to, one);
    AtomMatrix k = k_gadget(f);
    std::uint32_t p[3] = {p1, p2, p3};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g.add_edge(p[i], p[j], Weight::of_const(k[i][j].constant));
}

// --- formula -> permanent digraph ---------------------------------------------

namespace {

/// Subdivides parallel duplicates so the merged digraph is simple. Unlike
/// the determinant side, source-sink edges may stay: they become loops on
/// the merged node, which the permanent has no objection to.
Abp prepare_for_per(const Abp& input, std::size_t* subdivisions) {
    Abp norm = input.normalized();
    const Field& f = norm.field();
    std::vector<std::string> names;
    for (std::uint32_t v = 0; v < norm.num_nodes(); ++v) names.push_back(norm.node_name(v));
    Abp out(f, names, norm.source(), norm.sink());
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Weight>> groups;
    for (const auto& e : norm.edges()) {
        auto& grp = groups[{e.from, e.to}];
        if (!e.weight.is_var()) {
            bool folded = false;
            for (auto& w : grp)
                if (!w.is_var()) {
                    w = Weight::of_const(w.constant + e.weight.constant);
                    folded = true;
                    break;
                }
            if (folded) continue;
        }
        grp.push_back(e.weight);
    }
    for (auto& [key, ws] : groups) {
        std::erase_if(ws, [](const Weight& w) { return !w.is_var() && w.constant.is_zero(); });
        bool first = true;
        for (const auto& w : ws) {
            if (first) {
                out.add_edge(key.first, key.second, w);
                first = false;
            } else {
                std::uint32_t q = out.add_node("q" + std::to_string(out.num_nodes()));
                out.add_edge(key.first, q, w);
                out.add_edge(q, key.second, Weight::of_const(f.one()));
                if (subdivisions) ++(*subdivisions);
            }
        }
    }
    return out;
}

Multidigraph merged_per_digraph(const Abp& a) {
    const Field& f = a.field();
    Multidigraph g(f);
    auto order = a.topo_order();
    std::vector<std::uint32_t> index(a.num_nodes(), 0);
    g.add_node("w0"); // merged source/sink
    for (std::uint32_t v : order)
        if (v != a.source() && v != a.sink())
            index[v] = g.add_node(a.node_name(v));
    for (const auto& e : a.edges()) g.add_edge(index[e.from], index[e.to], e.weight);
    Weight one = Weight::of_const(f.one());
    for (std::uint32_t v = 1; v < g.num_nodes(); ++v) g.add_edge(v, v, one);
    return g;
}

} // namespace

Multidigraph formula_to_per_digraph(const Circuit& formula) {
    auto flags = classify(formula);
    if (!flags.is_formula) fail(Errc::NotAFormula, "permanent embedding needs a formula");
    Abp a = prepare_for_per(weakly_skew_to_abp(formula), nullptr);
    Multidigraph g = merged_per_digraph(a);
    if (!g.is_simple()) fail(Errc::DuplicateEdge, "internal: subdivision left parallel edges");
    return g;
}

SumToPerResult valiant_sum_to_per(const Circuit& g, const std::vector<std::string>& summed_vars,
                                  std::size_t s) {
    const Field& f = g.field();
    if (f.characteristic() == 2) fail(Errc::CharacteristicTwo, "permanent completeness needs char != 2");
    if (g.size() >= s)
        fail(Errc::ParamOutOfRange,
             "formula size " + std::to_string(g.size()) + " not below the declared bound " + std::to_string(s));

    std::vector<std::string> yvars = summed_vars;
    for (const auto& v : yvars)
        g.var_index(v); // errors on unknown names

    Multidigraph graph = formula_to_per_digraph(g);
    SumToPerResult res;
    res.base_digraph_nodes = graph.num_nodes();
    if (res.base_digraph_nodes > s) fail(Errc::SizeBoundViolated, "base digraph larger than s");

    // edges d_{i,j} carrying y_i get weight 1 and are coupled to rosette
    // connectors below
    std::map<std::string, std::vector<std::size_t>> y_edges;
    for (std::size_t h = 0; h < graph.all_edges().size(); ++h) {
        MultiEdge& e = graph.edge(h);
        if (e.removed || !e.weight.is_var()) continue;
        const std::string& v = *e.weight.var;
        if (std::find(yvars.begin(), yvars.end(), v) != yvars.end()) {
            y_edges[v].push_back(h);
            e.weight = Weight::of_const(f.one());
        }
    }
    for (const auto& y : yvars)
        if (!y_edges.count(y)) fail(Errc::UnusedYVariable, y + " does not occur in the formula");

    // disjoint union with one rosette per summed variable
    for (const auto& y : yvars) {
        const auto& ds = y_edges[y];
        std::size_t mu = ds.size();
        res.sum_mu += mu;
        Rosette r = build_rosette(mu, f);
        std::vector<std::uint32_t> node_map(r.graph.num_nodes());
        for (std::uint32_t v = 0; v < r.graph.num_nodes(); ++v)
            node_map[v] = graph.add_node(y + "." + r.graph.node_name(v));
        std::vector<std::size_t> edge_map(r.graph.all_edges().size());
        for (std::size_t h = 0; h < r.graph.all_edges().size(); ++h) {
            const MultiEdge& e = r.graph.all_edges()[h];
            edge_map[h] = graph.add_edge(node_map[e.from], node_map[e.to], e.weight);
        }
        for (std::size_t j = 0; j < mu; ++j) {
            iff_couple(graph, edge_map[r.connectors[j]], ds[j]);
            ++res.couplings;
        }
    }

    if (!graph.is_simple()) fail(Errc::DuplicateEdge, "internal: pipeline produced parallel edges");
    if (graph.num_nodes() > 6 * s)
        fail(Errc::SizeBoundViolated,
             std::to_string(graph.num_nodes()) + " nodes exceeds 6s = " + std::to_string(6 * s));

    res.projection.field = f;
    res.projection.identity = CertifiedIdentity::PerEquals;
    res.projection.matrix = graph.adjacency();
    res.projection.provenance = "valiant-sum-to-per";
    res.projection.abp_nodes = graph.num_nodes();
    std::size_t live = 0;
    for (const auto& e : graph.all_edges())
        if (!e.removed) ++live;
    res.projection.abp_edges = live;
    return res;
}

// --- files -------------------------------------------------------------------

WeightedDigraph parse_digraph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<Field> field;
    std::vector<std::string> names;
    std::map<std::string, std::uint32_t> byname;
    struct PEdge { std::string from, to, w; bool loop; };
    std::vector<PEdge> pedges;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "digraph") { header = true; continue; }
        if (kw == "field") {
            std::string k;
            ls >> k;
            if (k == "Q") field = Field::rationals();
            else {
                std::uint64_t p;
                ls >> p;
                field = Field::prime(p);
            }
        } else if (kw == "node") {
            std::string n;
            ls >> n;
            if (byname.count(n)) fail(Errc::BadAbp, "duplicate node " + n);
            byname[n] = static_cast<std::uint32_t>(names.size());
            names.push_back(n);
        } else if (kw == "edge") {
            PEdge e;
            ls >> e.from >> e.to >> e.w;
            e.loop = false;
            pedges.push_back(e);
        } else if (kw == "loop") {
            PEdge e;
            ls >> e.from >> e.w;
            e.to = e.from;
            e.loop = true;
            pedges.push_back(e);
        } else fail(Errc::SyntaxError, "line " + std::to_string(lineno) + ": unknown keyword " + kw);
    }
    if (!header) fail(Errc::SyntaxError, "missing 'digraph' header");
    if (!field) field = Field::rationals();
    WeightedDigraph g(*field);
    for (const auto& n : names) g.add_node(n);
    for (const auto& e : pedges) {
        if (!byname.count(e.from) || !byname.count(e.to)) fail(Errc::BadAbp, "edge endpoint undeclared");
        bool looks_const = e.w.find_first_not_of("0123456789/-") == std::string::npos;
        g.add_edge(byname[e.from], byname[e.to],
                   looks_const ? Weight::of_const(field->parse_literal(e.w)) : Weight::of_var(e.w));
    }
    return g;
}

std::string serialize_digraph(const WeightedDigraph& g) {
    std::ostringstream out;
    out << "digraph\n";
    out << "field " << g.field().describe() << "\n";
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v) out << "node " << g.node_name(v) << "\n";
    for (const auto& [key, w] : g.edges()) {
        if (key.first == key.second)
            out << "loop " << g.node_name(key.first) << ' ' << w.str() << "\n";
        else
            out << "edge " << g.node_name(key.first) << ' ' << g.node_name(key.second) << ' '
                << w.str() << "\n";
    }
    return out.str();
}

} // namespace acirc
