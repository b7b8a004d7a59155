#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radmax/density.hpp"
#include "radmax/error.hpp"

namespace radmax {

/// Malformed density expression. `offset` is the byte position of the
/// offending character in the input text.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Parsed radial profile w0(t). Grammar:
///
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := base ('^' signed-number)?
///   base   := 't' | number | preset '(' signed-number ')' | func '(' expr ')' | '(' expr ')'
///
/// with presets power, shell, power_family and functions abs, exp.
/// power_family(a) stands for t^(-a n) and is bound to n at evaluation.
class DensityExpression {
 public:
  struct Node;

  static DensityExpression parse(std::string_view text);

  /// Canonical text; parse(print()) prints the same string.
  std::string print() const;

  double eval(double t, int n = 0) const;
  /// Evaluated in log space throughout, so t^(-a n) at large n stays finite.
  /// Throws DomainError where the expression is negative.
  double log_eval(double t, int n = 0) const;

  bool depends_on_dimension() const;
  /// gamma when the expression is c t^gamma.
  std::optional<double> homogeneity(int n = 0) const;
  /// Exponent of the leading behaviour at t -> 0+.
  double order_at_zero(int n = 0) const;

  /// The density in R^n. Single presets and constants map to the library
  /// factories; anything else becomes a general profile.
  RadialDensity density(int n = 0) const;

 private:
  explicit DensityExpression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

inline DensityExpression parse_density(std::string_view text) { return DensityExpression::parse(text); }

}  // namespace radmax
