#pragma once

#include <stdexcept>
#include <string>

namespace hetcache {

// Invalid or inconsistent experiment configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A guard on enumeration size or memory was exceeded. CLI exit code 3.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Series, quadrature or iterative solver failed to converge. CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetcache
