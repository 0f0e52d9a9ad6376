#pragma once

#include <stdexcept>
#include <string>

namespace acirc {

enum class Errc {
    NotPrime,
    RationalOverPrimeField,
    DivisionByZero,
    FieldMismatch,
    CharacteristicTwo,
    CharacteristicTooSmall,
    SyntaxError,
    UnknownGateRef,
    CycleDetected,
    DuplicateGateId,
    FieldLiteralInvalid,
    BudgetExceeded,
    MissingAssignment,
    UnknownVariable,
    NotMultilinear,
    BlocksNotPartition,
    NonIntegerCoefficients,
    NotAFormula,
    NotWeaklySkew,
    NotSingleOutput,
    DegreeBoundTooSmall,
    DuplicateEdge,
    SharedEndpoints,
    UnusedYVariable,
    SizeBoundViolated,
    FieldTooSmall,
    TooManyVariables,
    NotConstantFree,
    NotMultDisjoint,
    ParamOutOfRange,
    UnknownArtifactKind,
    BadMatrix,
    BadAbp,
    Usage,
};

/// All domain failures are reported through this exception type; the code
/// survives into the CLI exit status and error text.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

const char* errc_name(Errc c);

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
    throw Error(code, std::string(errc_name(code)) + ": " + msg);
}

} // namespace acirc
