#pragma once

#include <stdexcept>
#include <string>

namespace modunwrap {

// Malformed or out-of-contract input data (files, ranges, shapes).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// An algorithm declared failure on valid input (rank deficiency,
// out-of-regime calculator arguments, enumeration limits).
class AlgorithmError : public std::runtime_error {
public:
    explicit AlgorithmError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modunwrap
