#pragma once

#include <stdexcept>
#include <string>

namespace rekit {

// Argument outside an operation's domain (bad index, s > p, zero vector, ...).
class InputDomainError : public std::invalid_argument {
public:
    explicit InputDomainError(const std::string& what) : std::invalid_argument(what) {}
};

class NotPsdError : public std::domain_error {
public:
    explicit NotPsdError(const std::string& what) : std::domain_error(what) {}
};

// Invalid covariance-model parameters.
class ModelError : public std::invalid_argument {
public:
    explicit ModelError(const std::string& what) : std::invalid_argument(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rekit
