#pragma once

#include <stdexcept>
#include <string>

namespace mrt {

// Failure categories surfaced by the library. CLI maps usage -> exit 2,
// everything else -> exit 1.
enum class errc {
    domain,             // argument outside the supported domain
    invariant,          // a type invariant would be violated
    no_sign_change,     // bracket endpoints have the same sign
    insufficient_roots, // fewer roots found than requested
    no_convergence,     // iteration/refinement cap hit
    pull_in,            // electrical stiffness >= mechanical stiffness
    device_off,         // zero bias: transduction factor vanishes
    unknown_material,
    duplicate_material,
    parse,
    singular_network,
    no_passband,
    target_unreachable,
    usage,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace mrt
