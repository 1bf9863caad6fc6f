#pragma once

#include <stdexcept>
#include <string>

namespace drlab {

// Exit-code families used by the command-line frontend.
enum class ErrorKind { Verification = 1, Input = 2, Domain = 3, Resource = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

// Malformed input, mode mismatch, bad configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

// Argument outside the domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

// Support cap, leaf budget, or similar limit exceeded.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ErrorKind::Resource, what) {}
};

// An invariant that must hold was observed to fail.
class VerificationError : public Error {
public:
    explicit VerificationError(const std::string& what) : Error(ErrorKind::Verification, what) {}
};

} // namespace drlab
