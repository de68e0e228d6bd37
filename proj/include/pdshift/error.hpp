#pragma once

#include <stdexcept>

namespace pdshift {

// Thrown when an internal cross-check fails (a closed-form value disagreeing
// with the scan that is supposed to realize it).  Distinct from argument
// errors so callers can map it to a dedicated exit status.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pdshift
