#pragma once

#include <stdexcept>
#include <string>

namespace iaspa {

// Failure classes map 1:1 onto CLI exit codes (see cli.hpp).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleTargetError : std::runtime_error {
    explicit InfeasibleTargetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapExceededError : std::runtime_error {
    explicit CapExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace iaspa
