#pragma once

#include <stdexcept>
#include <string>

namespace qcurve {

// Input is well formed but describes an object outside the domain of the
// construction (reducible spectral curve, even-order chart, residue obstruction).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An exact identity the algorithms rely on failed: nonzero remainder in an
// exact division, radical residue in a rational result, broken traceless
// condition. Always a bug or a violated precondition upstream.
class InternalInconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qcurve
