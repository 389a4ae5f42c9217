#pragma once

#include <stdexcept>
#include <string>

namespace conman {

/// Base class for every failure raised by the toolkit. Malformed inputs that
/// can be described item by item are returned as a ValidationReport instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace conman
