#pragma once

#include <map>
#include <string>

#include "acirc/circuit.hpp"
#include "acirc/poly.hpp"

namespace acirc {

/// Named polynomial family instance: a circuit construction plus the
/// independent brute-force reference it was checked against.
struct FamilyDescriptor {
    std::string name;
    std::map<std::string, std::size_t> params;
    Circuit construction;
    std::string declared_class; // weakly-skew / skew / formula
    bool oracle_verified = false;
    CircuitMetrics metadata;
    std::map<std::string, std::string> extra;
};

struct FamilyParams {
    std::size_t n = 0;
    std::size_t d = 0; // imm depth, esym degree
};

/// det, per, hc, imm, esym, cut, trees. `cut` requires a prime field F_q.
FamilyDescriptor gen_family(const std::string& name, const FamilyParams& p, const Field& field);

/// The definitional polynomial by direct enumeration, independent of any
/// circuit construction.
Poly family_oracle(const std::string& name, const FamilyParams& p, const Field& field);

/// Perfect-matching generating function of K_{n,n} by matching enumeration;
/// equals PER_n.
Poly bipartite_matching_gf(std::size_t n, const Field& field);

/// Spanning-tree generating function of K_n by Pruefer enumeration.
Poly spanning_tree_gf(std::size_t n, const Field& field);

/// Sum of g over all 0/1 assignments to `summed_vars` (exact, closed form
/// per monomial).
Poly exponential_sum(const Circuit& g, const std::vector<std::string>& summed_vars,
                     const ExpandOptions& opts = {});

std::string serialize_family_meta(const FamilyDescriptor& f);

} // namespace acirc
