#pragma once

#include <string>

#include "acirc/det.hpp"
#include "acirc/families.hpp"

namespace acirc {

struct VerifyReport {
    bool pass = false;
    std::string mode;    // symbolic | randomized | regenerated
    std::string detail;  // first distinguishing point on failure, etc.
};

/// Re-checks the certified identity of a projection matrix: symbolically
/// when the side/budget allows, otherwise by seeded random evaluation
/// against the embedded target or source circuit.
VerifyReport verify_projection(const ProjectionMatrix& m, std::uint64_t seed,
                               const ExpandOptions& opts = {});

/// Dispatch on artifact file content: projection matrices and family
/// metadata blocks are recognized.
VerifyReport verify_artifact_text(const std::string& text, std::uint64_t seed,
                                  const ExpandOptions& opts = {});

/// Fills target/hash (and optionally the generator) of a projection from a
/// polynomial when it fits the budget.
void attach_target(ProjectionMatrix& m, const Poly& target);

} // namespace acirc
