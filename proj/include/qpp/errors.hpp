#pragma once

#include <stdexcept>
#include <string>

namespace qpp {

// Key file or ciphertext container failed structural validation.
struct CorruptDataError : std::runtime_error {
    explicit CorruptDataError(const std::string& what) : std::runtime_error(what) {}
};

// Ciphertext header does not match the supplied key (n, m, or fingerprint).
struct KeyMismatchError : std::runtime_error {
    explicit KeyMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Image input the PNM codec does not handle.
struct UnsupportedFormatError : std::runtime_error {
    explicit UnsupportedFormatError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpp
