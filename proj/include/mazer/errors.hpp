#pragma once

#include <stdexcept>
#include <string>

namespace mazer {

/// A closed-form helper kernel was evaluated within the epsilon guard of one
/// of its poles. The parameter point sits (numerically) on a resonance pole
/// of the guard set; callers typically retry with nudged parameters.
class SingularKernel : public std::runtime_error {
public:
    explicit SingularKernel(const std::string& what) : std::runtime_error(what) {}
};

/// A boundary or interface linear system exceeded the condition-number
/// threshold (1e12) and the solution digits cannot be trusted.
class IllConditioned : public std::runtime_error {
public:
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

/// Slice refinement hit the cap without meeting the requested tolerance.
class NoConvergence : public std::runtime_error {
public:
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mazer
