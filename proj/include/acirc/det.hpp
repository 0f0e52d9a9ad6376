#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acirc/abp.hpp"
#include "acirc/circuit.hpp"
#include "acirc/poly.hpp"

namespace acirc {

/// A matrix entry for projection matrices: a constant, a variable, or a
/// negated variable. (Negated variables are forced by the sign bookkeeping
/// of the determinant embedding; see abp_to_det_projection.)
struct Atom {
    std::optional<std::string> var;
    bool neg = false; // only for variables; constants fold the sign
    Fe constant;

    static Atom of_const(const Fe& c) { return Atom{std::nullopt, false, c}; }
    static Atom of_var(std::string v, bool negated = false) {
        return Atom{std::move(v), negated, Fe()};
    }
    static Atom of_weight(const Weight& w, bool negated) {
        return w.is_var() ? of_var(*w.var, negated)
                          : of_const(negated ? -w.constant : w.constant);
    }
    bool is_var() const { return var.has_value(); }
    bool is_zero() const { return !is_var() && constant.is_zero(); }

    Poly poly(const Field& f) const {
        if (!is_var()) return Poly(constant);
        Poly p = Poly::variable(*var, f.characteristic());
        return neg ? Poly(f.zero()) - p : p;
    }
    Fe eval(const std::map<std::string, Fe>& point) const {
        if (!is_var()) return constant;
        auto it = point.find(*var);
        if (it == point.end()) fail(Errc::MissingAssignment, *var);
        return neg ? -it->second : it->second;
    }
    std::string str() const { return is_var() ? (neg ? "-" + *var : *var) : constant.str(); }
};

using AtomMatrix = std::vector<std::vector<Atom>>;

AtomMatrix atom_matrix_zero(std::size_t n, const Field& f);

/// Leibniz expansion with used-column pruning; side <= 10.
Poly symbolic_det_leibniz(const AtomMatrix& m, const Field& f);
/// Independent oracle: signed sum over cycle covers of the weighted digraph.
Poly symbolic_det_cycle_covers(const AtomMatrix& m, const Field& f);
Poly symbolic_det(const AtomMatrix& m, const Field& f);

/// Exact determinant of a constant matrix by Gaussian elimination with
/// pivoting; works over Q and any prime field.
Fe det_by_elimination(std::vector<std::vector<Fe>> m, const Field& f);

Fe eval_atom_matrix_det(const AtomMatrix& m, const Field& f,
                        const std::map<std::string, Fe>& point);

enum class CertifiedIdentity { DetEquals, PerEquals };

/// Square matrix over constants and (signed) variables together with the
/// identity it certifies. `target` is the polynomial the det/per equals.
struct ProjectionMatrix {
    Field field = Field::rationals();
    AtomMatrix matrix;
    CertifiedIdentity identity = CertifiedIdentity::DetEquals;
    std::optional<Poly> target;      // within budget
    std::string target_hash;         // FNV-1a of the target's text form
    std::string provenance;
    std::optional<std::string> source_circuit; // serialized generator, for re-checks
    std::vector<std::string> summed_vars;      // per-pipeline exponential sum

    // construction trace
    std::size_t abp_nodes = 0, abp_edges = 0, subdivisions = 0;

    std::size_t side() const { return matrix.size(); }
    std::size_t offdiag_nonzeros() const;
    bool diagonal_zero_one() const;
};

std::string poly_hash(const Poly& p);

struct DetProjectionOptions {
    /// Subdivide ABP edges so every diagonal entry stays 0/1 and every
    /// entry is a single atom. Always on; kept for symmetry with padding.
    std::optional<std::size_t> pad_to_side; // extend with 1-loops up to this side
};

/// Determinant universality: SW(abp) = det(matrix). Off-diagonal entries
/// are (possibly negated) edge weights; the diagonal is 0/1.
ProjectionMatrix abp_to_det_projection(const Abp& a, const DetProjectionOptions& opts = {});

/// The fully negated intermediate of the textbook proof, with det = -SW(abp)
/// (checked by the suite before the sign fix is applied).
AtomMatrix abp_to_det_negated(const Abp& a);

/// Determinantal-complexity certificate: affine-linear entries, side <=
/// (formula size + 1), det = the formula's polynomial. Parallel edges and
/// source-sink edges are absorbed into entries instead of subdivided.
struct AffineEntry {
    Fe constant;
    std::map<std::string, Fe> linear;
    bool is_zero() const;
    Poly poly(const Field& f) const;
};

struct DcCertificate {
    Field field = Field::rationals();
    std::vector<std::vector<AffineEntry>> matrix;
    std::size_t side() const { return matrix.size(); }
};

DcCertificate formula_dc_certificate(const Circuit& formula);
Poly symbolic_det_affine(const DcCertificate& m, const ExpandOptions& opts = {});

/// Characteristic polynomial by Le Verrier power traces and the recursive
/// triangular Newton solve: det(tI - A) = t^n - c1 t^{n-1} - ... - cn.
/// Requires characteristic 0 or p > n.
std::vector<Fe> csanky_charpoly(const std::vector<std::vector<Fe>>& a, const Field& f);

/// Division-free determinant circuit in variables x{i}_{j}: the
/// Samuelson-Berkowitz Toeplitz recurrences with every product taken
/// against a fresh input gate, so the result is skew (hence weakly-skew),
/// constant-free, and of size O(n^4).
Circuit berkowitz_det_circuit(std::size_t n, const Field& field);

/// [[a,-b],[c,d]]: det equals per([[a,b],[c,d]]).
AtomMatrix per2_sign_trick();

std::string serialize_projection(const ProjectionMatrix& m);
ProjectionMatrix parse_projection(const std::string& text);

AtomMatrix parse_atom_matrix(const std::string& text, const Field& f);
std::string serialize_atom_matrix(const AtomMatrix& m);

} // namespace acirc
