#include "acirc/circuit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

namespace acirc {

GateId Circuit::output() const {
    if (outputs_.size() != 1) fail(Errc::NotSingleOutput, "circuit has " + std::to_string(outputs_.size()) + " outputs");
    return outputs_[0];
}

std::string Circuit::fresh_name(const char* prefix) {
    return std::string(prefix) + std::to_string(gates_.size());
}

GateId Circuit::add_input_var(const std::string& var, const std::string& name) {
    Gate g;
    g.kind = GateKind::InputVar;
    g.var = var_index(var);
    gates_.push_back(g);
    names_.push_back(name.empty() ? fresh_name("g") : name);
    return static_cast<GateId>(gates_.size() - 1);
}

GateId Circuit::add_input_const(const Fe& value, const std::string& name) {
    Gate g;
    g.kind = GateKind::InputConst;
    g.constant = value;
    gates_.push_back(g);
    names_.push_back(name.empty() ? fresh_name("g") : name);
    return static_cast<GateId>(gates_.size() - 1);
}

GateId Circuit::add_gate(GateKind op, GateId a, GateId b, const std::string& name) {
    if (a >= gates_.size() || b >= gates_.size())
        fail(Errc::UnknownGateRef, "child id out of range");
    Gate g;
    g.kind = op;
    g.a = a;
    g.b = b;
    gates_.push_back(g);
    names_.push_back(name.empty() ? fresh_name("g") : name);
    ++op_count_;
    return static_cast<GateId>(gates_.size() - 1);
}

void Circuit::set_outputs(std::vector<GateId> outs) {
    if (outs.empty()) fail(Errc::SyntaxError, "no outputs");
    for (GateId g : outs)
        if (g >= gates_.size()) fail(Errc::UnknownGateRef, "output id out of range");
    outputs_ = std::move(outs);
}

std::uint32_t Circuit::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) fail(Errc::UnknownVariable, name);
    return static_cast<std::uint32_t>(it - vars_.begin());
}

CircuitMetrics metrics(const Circuit& c) {
    CircuitMetrics m;
    const auto& gs = c.gates();
    m.gate_depth.resize(gs.size(), 0);
    m.gate_degree.resize(gs.size(), 0);
    bool small_consts = true;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const Gate& g = gs[i];
        switch (g.kind) {
            case GateKind::InputVar:
                m.gate_degree[i] = 1;
                break;
            case GateKind::InputConst: {
                m.gate_degree[i] = 0;
                const Fe& v = g.constant;
                Field f = c.field();
                if (!(v == f.zero() || v == f.one() || v == f.minus_one())) small_consts = false;
                break;
            }
            case GateKind::Add:
                m.gate_depth[i] = std::max(m.gate_depth[g.a], m.gate_depth[g.b]) + 1;
                m.gate_degree[i] = std::max(m.gate_degree[g.a], m.gate_degree[g.b]);
                break;
            case GateKind::Mul:
                m.gate_depth[i] = std::max(m.gate_depth[g.a], m.gate_depth[g.b]) + 1;
                m.gate_degree[i] = m.gate_degree[g.a] + m.gate_degree[g.b];
                break;
        }
        m.depth = std::max(m.depth, m.gate_depth[i]);
        m.formal_degree = std::max(m.formal_degree, m.gate_degree[i]);
    }
    m.size = c.size();
    if (small_consts) m.constant_free_size = c.size();
    return m;
}

std::vector<std::vector<std::uint64_t>> descendant_sets(const Circuit& c) {
    const auto& gs = c.gates();
    std::size_t words = (gs.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> desc(gs.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i].is_op()) {
            const auto& da = desc[gs[i].a];
            const auto& db = desc[gs[i].b];
            for (std::size_t w = 0; w < words; ++w) desc[i][w] = da[w] | db[w];
        }
        desc[i][i / 64] |= 1ull << (i % 64);
    }
    return desc;
}

std::size_t subcircuit_size(const Circuit& c, GateId root) {
    std::vector<bool> seen(c.num_gates(), false);
    std::vector<GateId> stack{root};
    std::size_t ops = 0;
    while (!stack.empty()) {
        GateId g = stack.back();
        stack.pop_back();
        if (seen[g]) continue;
        seen[g] = true;
        const Gate& gate = c.gate(g);
        if (gate.is_op()) {
            ++ops;
            stack.push_back(gate.a);
            stack.push_back(gate.b);
        }
    }
    return ops;
}

StructureFlags classify(const Circuit& c) {
    StructureFlags f;
    const auto& gs = c.gates();
    std::size_t n = gs.size();

    std::vector<std::uint32_t> fanout(n, 0);
    for (const Gate& g : gs)
        if (g.is_op()) {
            ++fanout[g.a];
            ++fanout[g.b];
        }

    f.is_formula = std::all_of(fanout.begin(), fanout.end(), [](std::uint32_t k) { return k <= 1; });

    f.is_skew = true;
    for (const Gate& g : gs)
        if (g.kind == GateKind::Mul && !gs[g.a].is_input() && !gs[g.b].is_input())
            f.is_skew = false;

    f.is_constant_free = true;
    for (const Gate& g : gs)
        if (g.kind == GateKind::InputConst) {
            Field fld = c.field();
            if (!(g.constant == fld.zero() || g.constant == fld.one() || g.constant == fld.minus_one()))
                f.is_constant_free = false;
        }

    auto desc = descendant_sets(c);
    std::size_t words = desc.empty() ? 0 : desc[0].size();
    auto contains = [&](const std::vector<std::uint64_t>& set, GateId g) {
        return (set[g / 64] >> (g % 64)) & 1;
    };

    f.is_mult_disjoint = true;
    for (const Gate& g : gs)
        if (g.kind == GateKind::Mul) {
            bool disjoint = true;
            for (std::size_t w = 0; w < words && disjoint; ++w)
                if (desc[g.a][w] & desc[g.b][w]) disjoint = false;
            if (!disjoint) f.is_mult_disjoint = false;
        }

    // Weakly-skew: each mul gate needs a child v' whose subcircuit touches
    // the rest of the circuit only through the edge (v', v). Edges are
    // counted per child slot, so a squaring gate fails via its own
    // second slot.
    f.is_weakly_skew = true;
    for (GateId v = 0; v < n; ++v) {
        const Gate& g = gs[v];
        if (g.kind != GateKind::Mul) continue;
        GateId chosen = 0;
        bool found = false;
        std::string reason;
        for (GateId cand : {g.a, g.b}) {
            const auto& sub = desc[cand];
            std::size_t external = 0;
            bool is_the_edge = false;
            GateId offender = 0, offender_to = 0;
            for (GateId w = 0; w < n && external <= 1; ++w) {
                const Gate& gw = gs[w];
                if (!gw.is_op() || contains(sub, w)) continue;
                for (GateId u : {gw.a, gw.b}) {
                    if (!contains(sub, u)) continue;
                    ++external;
                    if (w == v && u == cand) {
                        is_the_edge = true;
                    } else {
                        offender = u;
                        offender_to = w;
                    }
                }
            }
            if (external == 1 && is_the_edge) {
                chosen = cand;
                found = true;
                break;
            }
            if (reason.empty() && external > 0 && offender_to != offender)
                reason = "gate " + c.gate_name(offender) + " of the subcircuit at " + c.gate_name(cand) +
                         " has an external edge to " + c.gate_name(offender_to);
        }
        if (found) {
            f.distinguished.emplace_back(v, chosen);
        } else {
            f.is_weakly_skew = false;
            if (f.weakly_skew_reason.empty())
                f.weakly_skew_reason = reason.empty()
                                           ? "mul gate " + c.gate_name(v) + " has no distinguished child"
                                           : reason;
        }
    }
    return f;
}

Circuit fold_constants(const Circuit& c) {
    Circuit out(c.field(), c.vars());
    std::vector<bool> has_var(c.num_gates(), false);
    std::vector<Fe> cval(c.num_gates());
    std::vector<GateId> mapped(c.num_gates());
    for (std::size_t v = 0; v < c.num_gates(); ++v) {
        const Gate& g = c.gate(static_cast<GateId>(v));
        switch (g.kind) {
            case GateKind::InputVar:
                has_var[v] = true;
                mapped[v] = out.add_input_var(c.vars()[g.var]);
                break;
            case GateKind::InputConst:
                cval[v] = g.constant;
                mapped[v] = out.add_input_const(g.constant);
                break;
            default: {
                has_var[v] = has_var[g.a] || has_var[g.b];
                if (!has_var[v]) {
                    cval[v] = g.kind == GateKind::Add ? cval[g.a] + cval[g.b] : cval[g.a] * cval[g.b];
                    mapped[v] = out.add_input_const(cval[v]);
                } else {
                    mapped[v] = out.add_gate(g.kind, mapped[g.a], mapped[g.b]);
                }
                break;
            }
        }
    }
    std::vector<GateId> outs;
    for (GateId g : c.outputs()) outs.push_back(mapped[g]);
    out.set_outputs(outs);
    return out;
}

// --- file format -----------------------------------------------------------
//
//   field Q | field Fp <prime>
//   var <name> ...
//   <gid> = input <var> | <gid> = const <literal> | <gid> = add <g> <g> | <gid> = mul <g> <g>
//   output <gid> ...

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) {
        if (t[0] == '#') break;
        out.push_back(t);
    }
    return out;
}

bool valid_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

} // namespace

Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::optional<Field> field;
    std::vector<std::string> vars;
    std::vector<std::array<std::string, 4>> gate_lines; // name, op, arg1, arg2
    std::vector<int> gate_linenos;
    std::vector<std::string> output_names;

    auto syntax = [&](const std::string& msg) {
        fail(Errc::SyntaxError, "line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0] == "field") {
            if (field) syntax("duplicate field line");
            if (tok.size() == 2 && tok[1] == "Q") field = Field::rationals();
            else if (tok.size() == 3 && tok[1] == "Fp") {
                try {
                    field = Field::prime(mpz_class(tok[2]).get_ui());
                } catch (const std::invalid_argument&) {
                    syntax("bad modulus '" + tok[2] + "'");
                }
            } else syntax("expected 'field Q' or 'field Fp <prime>'");
        } else if (tok[0] == "var") {
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (!valid_ident(tok[i])) syntax("bad variable name '" + tok[i] + "'");
                if (std::find(vars.begin(), vars.end(), tok[i]) != vars.end())
                    syntax("duplicate variable '" + tok[i] + "'");
                vars.push_back(tok[i]);
            }
        } else if (tok[0] == "output") {
            if (tok.size() < 2) syntax("output needs at least one gate id");
            for (std::size_t i = 1; i < tok.size(); ++i) output_names.push_back(tok[i]);
        } else {
            if (tok.size() < 4 || tok[1] != "=") syntax("expected '<gid> = <op> ...'");
            if (!valid_ident(tok[0])) syntax("bad gate id '" + tok[0] + "'");
            std::array<std::string, 4> gl{tok[0], tok[2], tok.size() > 3 ? tok[3] : "",
                                          tok.size() > 4 ? tok[4] : ""};
            if ((tok[2] == "input" || tok[2] == "const") && tok.size() != 4)
                syntax("expected one argument");
            if ((tok[2] == "add" || tok[2] == "mul") && tok.size() != 5)
                syntax("expected two gate ids");
            if (tok[2] != "input" && tok[2] != "const" && tok[2] != "add" && tok[2] != "mul")
                syntax("unknown op '" + tok[2] + "'");
            gate_lines.push_back(gl);
            gate_linenos.push_back(lineno);
        }
    }
    if (!field) fail(Errc::SyntaxError, "missing field line");
    if (output_names.empty()) fail(Errc::SyntaxError, "missing output line");

    Circuit c(*field, vars);
    std::map<std::string, GateId> byname;
    for (std::size_t i = 0; i < gate_lines.size(); ++i) {
        const auto& gl = gate_lines[i];
        lineno = gate_linenos[i];
        if (byname.count(gl[0]))
            fail(Errc::DuplicateGateId, "line " + std::to_string(lineno) + ": '" + gl[0] + "'");
        auto child = [&](const std::string& ref) -> GateId {
            if (ref == gl[0]) fail(Errc::CycleDetected, "line " + std::to_string(lineno) + ": '" + ref + "' refers to itself");
            auto it = byname.find(ref);
            if (it == byname.end())
                fail(Errc::UnknownGateRef, "line " + std::to_string(lineno) + ": '" + ref + "'");
            return it->second; // forward references are impossible by construction
        };
        GateId g;
        if (gl[1] == "input") {
            if (std::find(vars.begin(), vars.end(), gl[2]) == vars.end())
                fail(Errc::UnknownVariable, "line " + std::to_string(lineno) + ": '" + gl[2] + "'");
            g = c.add_input_var(gl[2], gl[0]);
        } else if (gl[1] == "const") {
            g = c.add_input_const(field->parse_literal(gl[2]), gl[0]);
        } else {
            g = c.add_gate(gl[1] == "add" ? GateKind::Add : GateKind::Mul, child(gl[2]), child(gl[3]), gl[0]);
        }
        byname[gl[0]] = g;
    }
    std::vector<GateId> outs;
    for (const auto& name : output_names) {
        auto it = byname.find(name);
        if (it == byname.end()) fail(Errc::UnknownGateRef, "output '" + name + "'");
        outs.push_back(it->second);
    }
    c.set_outputs(outs);
    return c;
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream out;
    out << "field " << c.field().describe() << "\n";
    if (!c.vars().empty()) {
        out << "var";
        for (const auto& v : c.vars()) out << ' ' << v;
        out << "\n";
    }
    for (std::size_t i = 0; i < c.num_gates(); ++i) {
        const Gate& g = c.gate(static_cast<GateId>(i));
        out << c.gate_name(static_cast<GateId>(i)) << " = ";
        switch (g.kind) {
            case GateKind::InputVar: out << "input " << c.vars()[g.var]; break;
            case GateKind::InputConst: out << "const " << g.constant.str(); break;
            case GateKind::Add: out << "add " << c.gate_name(g.a) << ' ' << c.gate_name(g.b); break;
            case GateKind::Mul: out << "mul " << c.gate_name(g.a) << ' ' << c.gate_name(g.b); break;
        }
        out << "\n";
    }
    out << "output";
    for (GateId g : c.outputs()) out << ' ' << c.gate_name(g);
    out << "\n";
    return out.str();
}

} // namespace acirc
