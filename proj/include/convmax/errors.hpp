#pragma once

#include <stdexcept>
#include <string>

namespace convmax {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or violated precondition (exit code 2 in the CLI).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

/// No admissible threshold exists on the current grid (exit code 2).
class infeasible_error : public error {
public:
    explicit infeasible_error(const std::string& what) : error(what) {}
};

/// File missing, unreadable, or malformed (exit code 1).
class io_error : public error {
public:
    explicit io_error(const std::string& what) : error(what) {}
};

/// Two functions that must share a grid do not.
class grid_mismatch_error : public domain_error {
public:
    explicit grid_mismatch_error(const std::string& what) : domain_error(what) {}
};

/// Degenerate input (identically zero function where a nonzero one is required).
class degenerate_error : public domain_error {
public:
    explicit degenerate_error(const std::string& what) : domain_error(what) {}
};

} // namespace convmax
