#ifndef HAMLAB_ERRORS_HPP
#define HAMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hamlab {

/// Error categories, one per failure class surfaced by the CLI as a
/// distinct exit code.
enum class ErrorKind {
    Usage,            // bad arguments / configuration
    Parse,            // malformed input file
    Io,               // missing or unwritable file
    DomainMismatch,   // operands live on different grids or surfaces
    NonFinite,        // NaN/Inf encountered in field data
    Contract,         // a numerical contract was violated (identity, bound, support)
    Resolution,       // requested accuracy unreachable at current sampling
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace hamlab

#endif
