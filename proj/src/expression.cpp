#include "radmax/expression.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "radmax/report.hpp"

namespace radmax {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : ConfigError("density expression, byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

enum class Kind { var, num, add, sub, mul, div, pow, abs, exp, power, shell, power_family };

struct DensityExpression::Node {
  Kind kind;
  double value = 0.0;  // literal, exponent, or preset parameter
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const DensityExpression::Node>;
constexpr double kInf = std::numeric_limits<double>::infinity();

NodePtr make(Kind k, double v = 0.0, NodePtr a = nullptr, NodePtr b = nullptr) {
  return std::make_shared<const DensityExpression::Node>(DensityExpression::Node{k, v, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    auto e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == s_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "', found '" + s_[pos_] + "'", pos_);
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::add, 0.0, lhs, term());
      else if (accept('-')) lhs = make(Kind::sub, 0.0, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      if (accept('*')) lhs = make(Kind::mul, 0.0, lhs, factor());
      else if (accept('/')) lhs = make(Kind::div, 0.0, lhs, factor());
      else return lhs;
    }
  }

  NodePtr factor() {
    auto b = base();
    if (accept('^')) return make(Kind::pow, signed_number(), b);
    return b;
  }

  double signed_number() {
    skip();
    double sign = 1.0;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      if (s_[pos_] == '-') sign = -1.0;
      ++pos_;
    }
    return sign * number();
  }

  double number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ == start) {
      if (pos_ == s_.size()) throw ParseError("expected a number before end of input", pos_);
      throw ParseError(std::string("expected a number, found '") + s_[pos_] + "'", pos_);
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(v))
      throw ParseError("malformed number '" + std::string(s_.substr(start, pos_ - start)) + "'", start);
    return v;
  }

  NodePtr base() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make(Kind::num, number());
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw ParseError(std::string("unexpected '") + c + "'", pos_);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    if (id == "t") return make(Kind::var);
    if (id == "abs" || id == "exp") {
      expect('(');
      auto e = expr();
      expect(')');
      return make(id == "abs" ? Kind::abs : Kind::exp, 0.0, e);
    }
    Kind k;
    if (id == "power") k = Kind::power;
    else if (id == "shell") k = Kind::shell;
    else if (id == "power_family") k = Kind::power_family;
    else throw ParseError("unknown preset or function '" + std::string(id) + "'", start);
    expect('(');
    const std::size_t arg = pos_;
    const double v = signed_number();
    expect(')');
    if (k == Kind::shell && !(v > 0.0 && v < 1.0)) throw ParseError("shell exponent must lie in (0, 1)", arg);
    if (k == Kind::power_family && !(v < 1.0)) throw ParseError("power_family needs alpha < 1", arg);
    return make(k, v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int precedence(Kind k) {
  switch (k) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::pow: return 3;
    default: return 4;
  }
}

std::string print(const NodePtr& e) {
  auto wrap = [](const NodePtr& c, bool paren) { return paren ? "(" + print(c) + ")" : print(c); };
  switch (e->kind) {
    case Kind::var: return "t";
    case Kind::num: return format_double(e->value);
    case Kind::power: return "power(" + format_double(e->value) + ")";
    case Kind::shell: return "shell(" + format_double(e->value) + ")";
    case Kind::power_family: return "power_family(" + format_double(e->value) + ")";
    case Kind::abs: return "abs(" + print(e->a) + ")";
    case Kind::exp: return "exp(" + print(e->a) + ")";
    case Kind::pow: return wrap(e->a, precedence(e->a->kind) < 4) + "^" + format_double(e->value);
    default: {
      const int p = precedence(e->kind);
      const char* op = e->kind == Kind::add ? " + " : e->kind == Kind::sub ? " - " : e->kind == Kind::mul ? " * " : " / ";
      return wrap(e->a, precedence(e->a->kind) < p) + op + wrap(e->b, precedence(e->b->kind) <= p);
    }
  }
}

// Signed logarithm: value = sign * exp(log_abs).
struct SLog {
  double log_abs;
  int sign;
};

SLog slog_of(double v) {
  if (v == 0.0) return {-kInf, 0};
  return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
}

double value_of(SLog s) { return s.sign == 0 ? 0.0 : s.sign * std::exp(s.log_abs); }

SLog slog_add(SLog x, SLog y) {
  if (x.sign == 0) return y;
  if (y.sign == 0) return x;
  if (x.log_abs < y.log_abs) std::swap(x, y);
  if (x.sign == y.sign) return {x.log_abs + std::log1p(std::exp(y.log_abs - x.log_abs)), x.sign};
  if (y.log_abs == x.log_abs) return {-kInf, 0};
  return {x.log_abs + std::log(-std::expm1(y.log_abs - x.log_abs)), x.sign};
}

SLog slog(const NodePtr& e, double t, int n) {
  const double lt = std::log(t);
  switch (e->kind) {
    case Kind::var: return {lt, 1};
    case Kind::num: return slog_of(e->value);
    case Kind::power: return {e->value == 0.0 ? 0.0 : e->value * lt, 1};
    case Kind::power_family: return {e->value == 0.0 ? 0.0 : -e->value * n * lt, 1};
    case Kind::shell: return {-e->value * std::log(std::fabs(1.0 - t)), 1};
    case Kind::add: return slog_add(slog(e->a, t, n), slog(e->b, t, n));
    case Kind::sub: {
      SLog y = slog(e->b, t, n);
      y.sign = -y.sign;
      return slog_add(slog(e->a, t, n), y);
    }
    case Kind::mul:
    case Kind::div: {
      const SLog x = slog(e->a, t, n), y = slog(e->b, t, n);
      if (y.sign == 0 && e->kind == Kind::div) return {kInf, x.sign == 0 ? 1 : x.sign};
      if (x.sign == 0 || y.sign == 0) return {-kInf, 0};
      return {e->kind == Kind::mul ? x.log_abs + y.log_abs : x.log_abs - y.log_abs, x.sign * y.sign};
    }
    case Kind::pow: {
      const SLog x = slog(e->a, t, n);
      const double k = e->value;
      if (x.sign == 0) return k > 0.0 ? SLog{-kInf, 0} : k == 0.0 ? SLog{0.0, 1} : SLog{kInf, 1};
      int sign = 1;
      if (x.sign < 0) {
        if (k != std::floor(k)) return {std::numeric_limits<double>::quiet_NaN(), 1};
        sign = std::fmod(std::fabs(k), 2.0) == 1.0 ? -1 : 1;
      }
      return {k * x.log_abs, sign};
    }
    case Kind::abs: {
      SLog x = slog(e->a, t, n);
      x.sign = x.sign == 0 ? 0 : 1;
      return x;
    }
    case Kind::exp: return {value_of(slog(e->a, t, n)), 1};
  }
  return {std::numeric_limits<double>::quiet_NaN(), 1};
}

bool uses_n(const NodePtr& e) {
  if (!e) return false;
  return e->kind == Kind::power_family || uses_n(e->a) || uses_n(e->b);
}

// (coefficient sign/log, exponent) when e = c t^gamma.
std::optional<double> monomial_exponent(const NodePtr& e, int n) {
  switch (e->kind) {
    case Kind::var: return 1.0;
    case Kind::num: return e->value > 0.0 ? std::optional<double>(0.0) : std::nullopt;
    case Kind::power: return e->value;
    case Kind::power_family: return -e->value * n;
    case Kind::mul:
    case Kind::div: {
      auto x = monomial_exponent(e->a, n), y = monomial_exponent(e->b, n);
      if (!x || !y) return std::nullopt;
      return e->kind == Kind::mul ? *x + *y : *x - *y;
    }
    case Kind::pow: {
      auto x = monomial_exponent(e->a, n);
      if (!x) return std::nullopt;
      return *x * e->value;
    }
    default: return std::nullopt;
  }
}

double order0(const NodePtr& e, int n) {
  switch (e->kind) {
    case Kind::var: return 1.0;
    case Kind::num:
    case Kind::shell:
    case Kind::exp: return 0.0;
    case Kind::power: return e->value;
    case Kind::power_family: return -e->value * n;
    case Kind::add:
    case Kind::sub: return std::min(order0(e->a, n), order0(e->b, n));
    case Kind::mul: return order0(e->a, n) + order0(e->b, n);
    case Kind::div: return order0(e->a, n) - order0(e->b, n);
    case Kind::pow: return e->value * order0(e->a, n);
    case Kind::abs: return order0(e->a, n);
  }
  return 0.0;
}

void collect_shells(const NodePtr& e, std::vector<double>& out) {
  if (!e) return;
  if (e->kind == Kind::shell && out.empty()) out.push_back(1.0);
  collect_shells(e->a, out);
  collect_shells(e->b, out);
}

}  // namespace

DensityExpression DensityExpression::parse(std::string_view text) { return DensityExpression(Parser(text).parse()); }

std::string DensityExpression::print() const { return radmax::print(root_); }

double DensityExpression::eval(double t, int n) const { return value_of(slog(root_, t, n)); }

double DensityExpression::log_eval(double t, int n) const {
  const SLog s = slog(root_, t, n);
  if (s.sign < 0 || std::isnan(s.log_abs))
    throw DomainError("density '" + print() + "' is negative or undefined at t = " + format_double(t));
  return s.log_abs;
}

bool DensityExpression::depends_on_dimension() const { return uses_n(root_); }

std::optional<double> DensityExpression::homogeneity(int n) const { return monomial_exponent(root_, n); }

double DensityExpression::order_at_zero(int n) const { return order0(root_, n); }

RadialDensity DensityExpression::density(int n) const {
  if (depends_on_dimension() && n < 1) throw DomainError("'" + print() + "' needs a dimension");
  switch (root_->kind) {
    case Kind::num:
      return RadialDensity::constant(root_->value);
    case Kind::power: return RadialDensity::power(root_->value);
    case Kind::shell: return RadialDensity::shell(root_->value);
    case Kind::power_family: return RadialDensity::power_family(root_->value, n);
    default: break;
  }
  RadialDensity::Traits tr;
  collect_shells(root_, tr.singular_points);
  tr.homogeneity = homogeneity(n);
  if (!tr.homogeneity) {
    const double ord = order_at_zero(n);
    tr.integrability_floor = ord < 0.0 ? std::max(1, static_cast<int>(std::floor(-ord)) + 1) : 1;
  }
  // Probe a few points so malformed profiles fail here rather than inside quadrature.
  for (double t : {1e-3, 0.5, 2.0, 1e3}) {
    if (!tr.singular_points.empty() && t == 1.0) continue;
    log_eval(t, n);
  }
  std::string name = print();
  if (depends_on_dimension()) name += "@n=" + std::to_string(n);
  auto root = root_;
  DensityExpression self(root);
  return RadialDensity(name, [self, n](double t) { return self.log_eval(t, n); }, tr);
}

}  // namespace radmax
