#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gribov {

// Base of every error raised by the library. code() is the stable
// machine-readable tag printed by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& detail) : Error("domain_error", detail) {}
};

class NonConvergence : public Error {
public:
    NonConvergence(std::size_t index, const std::string& detail)
        : Error("non_convergence", detail), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& detail) : Error("no_convergence", detail) {}
};

class IdentityViolation : public Error {
public:
    explicit IdentityViolation(const std::string& detail)
        : Error("identity_violation", detail) {}
};

class NonPositiveTerm : public Error {
public:
    NonPositiveTerm(std::size_t index, const std::string& detail)
        : Error("non_positive_term", detail), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& detail) : Error("overflow", detail) {}
};

class BoundViolation : public Error {
public:
    explicit BoundViolation(const std::string& detail) : Error("bound_violation", detail) {}
};

} // namespace gribov
