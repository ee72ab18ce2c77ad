#pragma once

#include <stdexcept>
#include <string>

namespace epc {

enum class ErrorKind {
    SyntaxError,
    UnknownName,
    DuplicateName,
    EmptyDomain,
    SubjectUndefined,
    LabelUndefined,
    CarrierMismatch,
    NotInCarrier,
    CarrierNotSuperset,
    DomainMismatch,
    EmptySystem,
    CapExceeded,
    TotalityViolation,
    SubDomainGap,
    MissingCaseLabel,
    ExprError,
    UnknownSignal,
    MissingExpectation,
};

/// Single exception type for all semantic and parse failures; `kind` lets the
/// CLI map failures onto its exit-code contract.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::SubjectUndefined: return "SubjectUndefined";
    case ErrorKind::LabelUndefined: return "LabelUndefined";
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::NotInCarrier: return "NotInCarrier";
    case ErrorKind::CarrierNotSuperset: return "CarrierNotSuperset";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::EmptySystem: return "EmptySystem";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::TotalityViolation: return "TotalityViolation";
    case ErrorKind::SubDomainGap: return "SubDomainGap";
    case ErrorKind::MissingCaseLabel: return "MissingCaseLabel";
    case ErrorKind::ExprError: return "ExprError";
    case ErrorKind::UnknownSignal: return "UnknownSignal";
    case ErrorKind::MissingExpectation: return "MissingExpectation";
    }
    return "Error";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, std::string(error_kind_name(kind)) + ": " + message);
}

} // namespace epc
