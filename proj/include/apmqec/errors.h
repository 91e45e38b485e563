#ifndef APMQEC_ERRORS_H
#define APMQEC_ERRORS_H

#include <stdexcept>
#include <string>

namespace apmqec {

/// Precondition violated by an argument (out-of-range point, modulus mismatch, bad factorization).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An enumeration or search exceeded its configured cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A construction produced an object violating its invariants (e.g. H_X H_Z^T != 0).
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Group-structure precondition failed (e.g. non-regular action, so no exponent layout exists).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
    ParseError(const std::string &msg, size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {
    }
    size_t line;
};

/// Two atoms were routed into the same trap site.
struct CollisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A syndrome lies outside the column space of the check matrix.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A transition is not contained in the abelian subgroup; the caller should fall back.
struct EscalationSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace apmqec

#endif
