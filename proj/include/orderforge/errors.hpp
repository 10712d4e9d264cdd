#ifndef ORDERFORGE_ERRORS_HPP
#define ORDERFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orderforge {

// Bad arguments, malformed parameters, infeasible requested sizes.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed files.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// A construction could not complete: surgery-stuck, plant-impossible.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orderforge

#endif
