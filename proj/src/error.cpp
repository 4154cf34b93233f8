#include "bilform/error.hpp"

namespace bilform {

const char* errc_name(Errc c) noexcept {
    switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::ZeroConstantTerm: return "ZeroConstantTerm";
    case Errc::Singular: return "Singular";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::AmbientMismatch: return "AmbientMismatch";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::DecompositionFailure: return "DecompositionFailure";
    case Errc::BadParams: return "BadParams";
    case Errc::ZeroScalar: return "ZeroScalar";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::PartDegenerate: return "PartDegenerate";
    case Errc::BadShape: return "BadShape";
    case Errc::WrongCase: return "WrongCase";
    case Errc::NotCaseI: return "NotCaseI";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::BadPrime: return "BadPrime";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bilform
