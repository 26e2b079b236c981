#pragma once

#include <string_view>

#include "bforge/nc_poly.hpp"

namespace bforge {

/// Expression grammar (whitespace-insensitive):
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*          no juxtaposition
///   unary   := ('-'|'+') unary | power
///   power   := primary ('^' natural)?
///   primary := number | number'i' | 'i' | param | generator
///            | ('exp'|'sinh'|'cosh') '(' expr ')' | '(' expr ')'
///   texpr   := tterm (('+'|'-') tterm)*,  tterm := term '(x)' term
/// Division is only by a scalar times a parameter monomial. Intermediate values
/// are kept as numerator / monomial at order + slack and divided exactly at the
/// end; the result is truncated at tr.order. No rewriting is applied.
NCPoly parse_expr(std::string_view text, const Basis& basis, const ParamSpace& params, const Truncation& tr);
Tensor2 parse_tensor_expr(std::string_view text, const Basis& basis, const ParamSpace& params,
                          const Truncation& tr);
/// Expression without generators.
ParamPoly parse_param_expr(std::string_view text, const ParamSpace& params, const Truncation& tr);
Scalar parse_scalar(std::string_view text);

}  // namespace bforge
