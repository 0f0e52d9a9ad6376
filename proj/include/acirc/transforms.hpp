#pragma once

#include <optional>
#include <string>

#include "acirc/circuit.hpp"
#include "acirc/poly.hpp"

namespace acirc {

enum class Verification { OracleExact, SeededPit, Skipped };

struct TransformReport {
    std::string name;
    CircuitMetrics input;
    CircuitMetrics output;
    Verification verified = Verification::Skipped;
    double size_ratio = 0;
    double depth_ratio = 0;
    std::map<std::string, std::string> extra; // e.g. measured constants

    std::string str() const;
};

struct HomogenizeResult {
    Circuit circuit; // outputs are the degree-0..d components
    TransformReport report;
};

/// Gate-splitting homogenization: output o gets components deg 0..d; every
/// gate of the result computes a homogeneous polynomial; size O(s d^2).
/// DegreeBoundTooSmall when the oracle shows the output degree exceeds d
/// (only detectable within the expansion budget).
HomogenizeResult homogenize(const Circuit& c, std::uint64_t d,
                            const ExpandOptions& opts = {});

struct TransformResult {
    Circuit circuit;
    TransformReport report;
};

/// Interval-copy construction after constant folding: output is
/// multiplicatively disjoint, equal to the input, of size <= size * degree.
TransformResult make_mult_disjoint(const Circuit& c, const ExpandOptions& opts = {});

/// Brent balancing of formulas via 1/3-2/3 separators and affine
/// reconstruction f = A*g + B; depth O(log s), the measured constant kappa
/// is in the report.
TransformResult balance_formula(const Circuit& c, const ExpandOptions& opts = {});

/// Semantic homogeneity (all gate polynomials homogeneous), when the
/// expansion budget allows.
std::optional<bool> semantically_homogeneous(const Circuit& c, const ExpandOptions& opts = {});

} // namespace acirc
