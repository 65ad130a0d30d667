// expr.hpp -- word expressions over named elements
#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "agr/element.hpp"

namespace agr {

/// Parse failure; carries the 0-based offset into the expression text.
class ExprError : public std::runtime_error {
public:
    size_t pos;
    ExprError(size_t pos, const std::string& what)
        : std::runtime_error("at offset " + std::to_string(pos) + ": " + what), pos(pos) {}
};

/// Name bindings available to expressions.
using ExprEnv = std::map<std::string, Element>;

/// Evaluates an expression over the grammar
///   expr   := term {"*" term}
///   term   := factor ["^" integer]            (integer may be negative)
///   factor := name | call | "(" expr ")"
///   call   := "comm" "(" expr "," expr ")"    commutator g^-1 h^-1 g h
///           | "conj" "(" expr "," expr ")"    conjugate h^-1 g h
/// Whitespace is ignored.  Names are looked up in `env`.
Element parse_expression(const std::string& text, const ExprEnv& env);

}  // namespace agr
