#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "acirc/circuit.hpp"
#include "acirc/field.hpp"

namespace acirc {

/// Canonical monomial: variable name -> positive exponent. Zero exponents
/// are never stored, so equality and ordering are semantic.
using Monomial = std::map<std::string, std::uint32_t>;

Monomial mono_mul(const Monomial& a, const Monomial& b);
std::uint64_t mono_degree(const Monomial& m);

/// Exact sparse multivariate polynomial; the ground-truth representation the
/// reductions are checked against. No zero coefficients are ever stored.
class Poly {
public:
    Poly() = default;
    explicit Poly(const Fe& c);
    static Poly variable(const std::string& name, std::uint64_t modulus);
    static Poly zero() { return Poly(); }

    const std::map<Monomial, Fe>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    std::uint64_t degree() const; // 0 for the zero polynomial

    void add_term(const Monomial& m, const Fe& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Fe coefficient(const Monomial& m, const Field& field) const;
    Fe evaluate(const std::map<std::string, Fe>& point, const Field& field) const;
    std::set<std::string> variables() const;
    bool is_multilinear() const;
    bool is_homogeneous() const;
    /// Homogeneous component of the given degree.
    Poly component(std::uint64_t d) const;

    /// wt(p): sum of |coefficients| for integer polynomials over Q.
    mpz_class weight() const;

    std::string str() const; // golden-file format, one term per line

private:
    std::map<Monomial, Fe> terms_;
};

Poly parse_poly(const std::string& text, const Field& field);

struct ExpandOptions {
    std::size_t term_budget = 1000000;
};

/// Expands the polynomial computed at `gate` (default: the single output).
/// A pre-pass estimates term counts per gate and refuses oversized jobs;
/// results are always exact, never truncated.
Poly expand(const Circuit& c, std::optional<GateId> gate = std::nullopt,
            const ExpandOptions& opts = {});

/// Per-gate expansion of every gate (same budget discipline).
std::vector<Poly> expand_all_gates(const Circuit& c, const ExpandOptions& opts = {});

std::vector<Fe> evaluate(const Circuit& c, const std::map<std::string, Fe>& point);
Fe evaluate_gate(const Circuit& c, GateId g, const std::map<std::string, Fe>& point);

struct PDMatrix {
    std::vector<Monomial> rows; // over the Y block
    std::vector<Monomial> cols; // over the Z block
    std::vector<std::vector<Fe>> entries;
    std::size_t rank = 0;
};

/// Nisan-style partial-derivative matrix of a multilinear polynomial with
/// respect to a Y/Z variable split; rank by exact Gaussian elimination.
PDMatrix pd_matrix_rank(const Poly& p, const std::set<std::string>& y_block,
                        const std::set<std::string>& z_block, const Field& field,
                        std::size_t entry_budget = 1u << 20);

std::size_t matrix_rank(std::vector<std::vector<Fe>> m, const Field& field);

} // namespace acirc
