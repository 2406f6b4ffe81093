#pragma once

#include "brancov/brancov.hpp"

#include <stdexcept>
#include <string>

namespace brancov {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Polynomial/rational expressions in z with complex literals a+bi,
// e.g. "z^2", "(z-1)^3+1", "z + 1/z", "0.5i*z^2 - 2".
RationalMap parse_map(const std::string& text);

} // namespace brancov
