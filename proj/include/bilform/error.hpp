#pragma once

#include <stdexcept>
#include <string>

namespace bilform {

enum class Errc {
    DivisionByZero,
    FieldMismatch,
    ZeroPolynomial,
    ZeroConstantTerm,
    Singular,
    ShapeMismatch,
    NotNilpotent,
    AmbientMismatch,
    InternalInconsistency,
    DecompositionFailure,
    BadParams,
    ZeroScalar,
    ConstraintViolated,
    DegenerateForm,
    PartDegenerate,
    BadShape,
    WrongCase,
    NotCaseI,
    BudgetExceeded,
    CapExceeded,
    ParseError,
    BadPrime,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace bilform
