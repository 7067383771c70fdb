#ifndef CUBEKNOT_ERROR_HPP
#define CUBEKNOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cubeknot {

/// Bad caller input: invalid parameters, violated preconditions, malformed
/// files. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A construction invariant failed at runtime. When `retriable` is set the
/// failure is scale-dependent (coarse cubulation) and the pipeline may retry
/// at a finer subdivision; otherwise it indicates a genuine bug and the CLI
/// maps it to exit code 3.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what, bool retriable_at_finer_scale = false)
        : std::runtime_error(what), retriable(retriable_at_finer_scale) {}

    bool retriable;
};

} // namespace cubeknot

#endif
