#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lagrep/jet.hpp"
#include "lagrep/mpoly.hpp"
#include "lagrep/ratfn.hpp"

namespace lagrep {

/// Ordered coordinate names; variable i of a polynomial prints as names[i].
using Names = std::vector<std::string>;

/// Parses the shared expression grammar:
///   identifiers [a-zA-Z][a-zA-Z0-9]*, integer literals, + - * / ^ and
///   parentheses; jet variables are written u1_x, u1_xx, u1_xxx, u1_x4, ...
/// Negative powers and division are only allowed on jet-free operands.
/// Errors are InputError with the column of the offending token.
DiffPoly parse_diffpoly(std::string_view text, const Names& names,
                        int jet_bound = kDefaultJetBound);
/// Same grammar without jet variables.
RatFn parse_ratfn(std::string_view text, const Names& names);
Rational parse_rational(std::string_view text);

/// Canonical printing (graded-lex terms; denominators shown as products of
/// square-free factors with pairwise differences split out). The output
/// parses back to an equal value.
std::string to_string(const MPoly& p, const Names& names);
std::string to_string(const RatFn& f, const Names& names);
std::string to_string(const DiffPoly& f, const Names& names);
std::string to_string(const Rational& q);
std::string jet_name(const Names& names, JetVar v);

}  // namespace lagrep
