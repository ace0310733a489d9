#pragma once

#include <stdexcept>
#include <string>

namespace lesieve {

// Invalid configuration or violated hypothesis (maps to CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Resource exhaustion: index overflow, path length cap, round cap
// (maps to CLI exit code 3).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lesieve
