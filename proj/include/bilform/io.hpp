#pragma once

#include <optional>
#include <string>

#include "bilform/matrix.hpp"

namespace bilform {

// p <prime>, n <dim>, then n rows of n integers; lines starting with '#' are comments.
struct InputFile {
    u64 p = 0;
    std::size_t n = 0;
    Matrix gram;
};

// Entries are reduced mod p, or mod `field` when given. Throws ParseError, BadPrime.
InputFile parse_input(const std::string& text, std::optional<u64> field = std::nullopt);
InputFile read_input(const std::string& path, std::optional<u64> field = std::nullopt);
std::string format_input(const Matrix& A);

}  // namespace bilform
