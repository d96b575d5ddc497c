#pragma once

#include <functional>
#include <string>

namespace whw {

// Parses an arithmetic expression in the variable x: numbers, + - * / ^,
// parentheses, pi, and sin cos tan sinh cosh tanh exp log sqrt abs.
// Throws ConfigError on malformed input.
std::function<double(double)> parse_expression(const std::string& text);

} // namespace whw
