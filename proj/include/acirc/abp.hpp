#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acirc/circuit.hpp"
#include "acirc/poly.hpp"

namespace acirc {

/// An edge weight: a field constant or a bare variable.
struct Weight {
    std::optional<std::string> var; // set => variable weight
    Fe constant;                    // otherwise

    static Weight of_var(std::string v) { return Weight{std::move(v), Fe()}; }
    static Weight of_const(const Fe& c) { return Weight{std::nullopt, c}; }
    bool is_var() const { return var.has_value(); }

    Poly poly(std::uint64_t modulus) const {
        return is_var() ? Poly::variable(*var, modulus) : Poly(constant);
    }
    Fe eval(const std::map<std::string, Fe>& point) const {
        if (!is_var()) return constant;
        auto it = point.find(*var);
        if (it == point.end()) fail(Errc::MissingAssignment, *var);
        return it->second;
    }
    std::string str() const { return is_var() ? *var : constant.str(); }
    bool operator==(const Weight& o) const {
        return var == o.var && (is_var() || constant == o.constant);
    }
};

struct AbpEdge {
    std::uint32_t from, to;
    Weight weight;
};

/// Algebraic branching program: edge-weighted DAG with a source and a sink;
/// computes the sum over all source-sink paths of the edge-weight products.
/// Parallel edges are allowed and kept apart.
class Abp {
public:
    Abp(Field field, std::vector<std::string> node_names, std::uint32_t source, std::uint32_t sink);

    static Abp empty(Field field); // two nodes, no edge; computes 0

    const Field& field() const { return field_; }
    std::uint32_t source() const { return source_; }
    std::uint32_t sink() const { return sink_; }
    std::size_t num_nodes() const { return names_.size(); }
    const std::vector<AbpEdge>& edges() const { return edges_; }
    const std::string& node_name(std::uint32_t n) const { return names_[n]; }

    std::uint32_t add_node(const std::string& name = "");
    void add_edge(std::uint32_t from, std::uint32_t to, Weight w);

    /// Topological order; errors if the digraph has a cycle.
    std::vector<std::uint32_t> topo_order() const;

    /// Restriction to nodes on some source-sink path (SW-preserving).
    Abp normalized() const;

private:
    Field field_;
    std::vector<std::string> names_;
    std::vector<AbpEdge> edges_;
    std::uint32_t source_, sink_;
};

/// SW(G) by dynamic programming over the topological order.
Poly abp_expand(const Abp& a, const ExpandOptions& opts = {});
Fe abp_eval(const Abp& a, const std::map<std::string, Fe>& point);

/// Literal sum over all simple source-sink paths; the definitional oracle,
/// for small programs only.
Poly abp_expand_by_paths(const Abp& a);

/// Weakly-skew circuit (single output) -> ABP with SW = the circuit's
/// polynomial. Formula inputs meet the m+2 node / m+1 edge accounting
/// exactly; general weakly-skew inputs are measured by the suite.
Abp weakly_skew_to_abp(const Circuit& c);

/// Any ABP -> skew circuit of size at most (nodes - 2).
Circuit abp_to_skew_circuit(const Abp& a);

/// Series composition (sink of a glued to source of b): SW = SW(a) * SW(b).
Abp abp_series(const Abp& a, const Abp& b);
/// Parallel composition (sources and sinks identified): SW = SW(a) + SW(b).
Abp abp_parallel(const Abp& a, const Abp& b);

Abp parse_abp(const std::string& text);
std::string serialize_abp(const Abp& a);

} // namespace acirc
