#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "acirc/abp.hpp"
#include "acirc/det.hpp"

namespace acirc {

/// Weighted digraph with at most one edge per ordered node pair (loops
/// allowed); per(G) is the permanent of its adjacency matrix.
class WeightedDigraph {
public:
    explicit WeightedDigraph(Field field) : field_(std::move(field)) {}

    const Field& field() const { return field_; }
    std::size_t num_nodes() const { return names_.size(); }
    const std::string& node_name(std::uint32_t v) const { return names_[v]; }
    const std::map<std::pair<std::uint32_t, std::uint32_t>, Weight>& edges() const { return edges_; }

    std::uint32_t add_node(const std::string& name = "");
    /// Inserting an edge that already exists is an error; weights are never
    /// silently summed.
    void add_edge(std::uint32_t from, std::uint32_t to, Weight w);

    AtomMatrix adjacency() const;

private:
    Field field_;
    std::vector<std::string> names_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Weight> edges_;
};

/// Internal multigraph for the gadget constructions: keeps parallel edges
/// apart and gives every edge a stable handle.
struct MultiEdge {
    std::uint32_t from, to;
    Weight weight;
    bool removed = false;
};

class Multidigraph {
public:
    explicit Multidigraph(Field field) : field_(std::move(field)) {}

    const Field& field() const { return field_; }
    std::size_t num_nodes() const { return names_.size(); }
    std::size_t num_live_nodes() const { return names_.size(); }
    const std::string& node_name(std::uint32_t v) const { return names_[v]; }
    const std::vector<MultiEdge>& all_edges() const { return edges_; }

    std::uint32_t add_node(const std::string& name = "");
    std::size_t add_edge(std::uint32_t from, std::uint32_t to, Weight w); // returns handle
    void remove_edge(std::size_t handle) { edges_[handle].removed = true; }
    MultiEdge& edge(std::size_t handle) { return edges_[handle]; }
    const MultiEdge& edge(std::size_t handle) const { return edges_[handle]; }

    bool is_simple() const; // no live parallel duplicates
    WeightedDigraph to_simple() const;
    AtomMatrix adjacency() const; // requires is_simple()

private:
    Field field_;
    std::vector<std::string> names_;
    std::vector<MultiEdge> edges_;
};

/// All cycle covers of the multigraph, as lists of edge handles.
std::vector<std::vector<std::size_t>> cycle_covers(const Multidigraph& g,
                                                   std::size_t max_nodes = 14,
                                                   std::size_t max_covers = 2000000);
Poly cover_weight(const Multidigraph& g, const std::vector<std::size_t>& cover);
/// Unsigned cycle-cover sum = per(adjacency); definitional oracle.
Poly per_by_cycle_covers(const Multidigraph& g, std::size_t max_nodes = 14);

/// Digraph view of a matrix: one edge per nonzero entry.
Multidigraph digraph_from_matrix(const AtomMatrix& m, const Field& f);

/// Permanent by permutation enumeration, n <= 7. The oracle.
Poly brute_per(const AtomMatrix& m, const Field& f);

/// Ryser inclusion-exclusion, numeric: straight-line reference.
Fe ryser_reference(const std::vector<std::vector<Fe>>& m, const Field& f);
/// Gray-code Ryser, parallelized over subset ranges when OpenMP is present;
/// bit-identical to the reference for any thread count. n <= 30.
Fe ryser(const std::vector<std::vector<Fe>>& m, const Field& f);

/// Symbolic Ryser under a term budget.
Poly ryser_symbolic(const AtomMatrix& m, const Field& f, const ExpandOptions& opts = {});

Fe eval_atom_matrix_per(const AtomMatrix& m, const Field& f,
                        const std::map<std::string, Fe>& point);

/// The 3x3 coupling gadget; satisfies per(K) = per(K[2,3|1,3]) = 1 and the
/// four 0-identities (checked by the suite over every field used).
AtomMatrix k_gadget(const Field& f);

/// Rosette R(mu): 2*mu nodes, connector cycle u_i -> u_{i+1}, bridges
/// through v_i, loops everywhere, all weights 1. Returns the graph plus the
/// connector edge handles. R(1)'s connector is a loop parallel to u_1's
/// plain loop, which is why this lives on the multigraph type.
struct Rosette {
    Multidigraph graph;
    std::vector<std::size_t> connectors;
};
Rosette build_rosette(std::size_t mu, const Field& f);

/// Iff-coupling of edges c and c' through the K gadget: three new nodes,
/// per(G') = sum of the weights of the cycle covers of G containing both of
/// c, c' or neither. Endpoints of c must be disjoint from endpoints of c';
/// either edge may be a loop.
void iff_couple(Multidigraph& g, std::size_t c, std::size_t c_prime);

/// Formula -> digraph with per(G) = the formula's polynomial; node count
/// <= the formula's size + 1.
Multidigraph formula_to_per_digraph(const Circuit& formula);

struct SumToPerResult {
    ProjectionMatrix projection;        // identity: PerEquals
    std::size_t base_digraph_nodes = 0; // |G|
    std::size_t sum_mu = 0;
    std::size_t couplings = 0;
};

/// Valiant's exponential-sum reduction: for a formula g of size < s, builds
/// a matrix of side <= 6s over constants and the non-summed variables whose
/// permanent equals sum over all 0/1 assignments e to `summed_vars` of
/// g(x, e).
SumToPerResult valiant_sum_to_per(const Circuit& g, const std::vector<std::string>& summed_vars,
                                  std::size_t s);

WeightedDigraph parse_digraph(const std::string& text);
std::string serialize_digraph(const WeightedDigraph& g);

} // namespace acirc
