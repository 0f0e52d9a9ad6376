#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acirc/field.hpp"

namespace acirc {

using GateId = std::uint32_t;

enum class GateKind { InputVar, InputConst, Add, Mul };

struct Gate {
    GateKind kind;
    std::uint32_t var = 0; // variable index, InputVar
    Fe constant;           // InputConst
    GateId a = 0, b = 0;   // children, Add/Mul

    bool is_input() const { return kind == GateKind::InputVar || kind == GateKind::InputConst; }
    bool is_op() const { return !is_input(); }
};

/// Arithmetic circuit over a field: a DAG of fan-in-2 +/x gates in
/// topological order (children precede parents). Immutable once built.
class Circuit {
public:
    Circuit(Field field, std::vector<std::string> vars)
        : field_(std::move(field)), vars_(std::move(vars)) {}

    const Field& field() const { return field_; }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const Gate& gate(GateId g) const { return gates_[g]; }
    const std::vector<GateId>& outputs() const { return outputs_; }
    GateId output() const; // errors unless exactly one output

    const std::string& gate_name(GateId g) const { return names_[g]; }

    GateId add_input_var(const std::string& var, const std::string& name = "");
    GateId add_input_const(const Fe& value, const std::string& name = "");
    GateId add_gate(GateKind op, GateId a, GateId b, const std::string& name = "");
    void set_outputs(std::vector<GateId> outs);

    std::uint32_t var_index(const std::string& name) const; // errors if unknown

    /// Number of operation gates, |Phi|.
    std::size_t size() const { return op_count_; }
    std::size_t num_gates() const { return gates_.size(); }

private:
    std::string fresh_name(const char* prefix);

    Field field_;
    std::vector<std::string> vars_;
    std::vector<Gate> gates_;
    std::vector<std::string> names_;
    std::vector<GateId> outputs_;
    std::size_t op_count_ = 0;
};

struct CircuitMetrics {
    std::size_t size = 0;
    std::size_t depth = 0;
    std::uint64_t formal_degree = 0;
    std::vector<std::size_t> gate_depth;
    std::vector<std::uint64_t> gate_degree;
    std::optional<std::size_t> constant_free_size; // set iff constants in {-1,0,1}
};

struct StructureFlags {
    bool is_formula = false;
    bool is_skew = false;
    bool is_weakly_skew = false;
    bool is_mult_disjoint = false;
    bool is_constant_free = false;
    /// For each mul gate (by id): the distinguished child when weakly-skew.
    /// Parallel vector `weakly_skew_reason` explains the first failure.
    std::vector<std::pair<GateId, GateId>> distinguished; // (mul gate, child)
    std::string weakly_skew_reason;
};

CircuitMetrics metrics(const Circuit& c);
StructureFlags classify(const Circuit& c);

/// Per-gate sets of reachable descendants (the subcircuit Phi_v), as packed
/// bitsets. Shared by classify and the transforms.
std::vector<std::vector<std::uint64_t>> descendant_sets(const Circuit& c);

std::size_t subcircuit_size(const Circuit& c, GateId root); // op gates of Phi_v

Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

/// Replaces every gate whose cone is constant by a single const input.
Circuit fold_constants(const Circuit& c);

} // namespace acirc
