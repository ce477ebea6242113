#pragma once

#include <stdexcept>
#include <string>

namespace cubeterm {

/// Failure conditions surfaced by the library. One code per condition so
/// callers can branch without parsing messages.
enum class Errc {
    NotIdempotent,
    TableOutOfRange,
    EntryOutOfRange,
    BadSignature,
    SearchCapExceeded,
    SignatureMismatch,
    LengthMismatch,
    ArityMismatch,
    BudgetExceeded,
    PreconditionArity,
    NoSuchIndex,
    ImproperBase,
    NotHomomorphism,
    NotFullyAbsorbing,
    HasCubeTerm,
    DegenerateSignature,
    LeadingArityTooSmall,
    CapExceeded,
    InvalidArgument,
    ParseError,
    Inconsistent,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace cubeterm
