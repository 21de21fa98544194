#include "lagrep/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "lagrep/error.hpp"

namespace lagrep {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Names& names, int bound, bool allow_jets)
      : s_(text), names_(names), bound_(bound), allow_jets_(allow_jets) {}

  DiffPoly parse() {
    DiffPoly v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("parse error at column " + std::to_string(pos_ + 1) + ": " + msg +
                     " in \"" + std::string(s_) + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  DiffPoly zero() const { return DiffPoly(names_.size(), bound_); }
  DiffPoly constant(const Rational& c) const {
    return DiffPoly::constant(names_.size(), c, bound_);
  }

  DiffPoly expr() {
    DiffPoly v = term();
    while (true) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  DiffPoly term() {
    DiffPoly v = unary();
    while (true) {
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        DiffPoly d = unary();
        if (!d.is_jet_free()) {
          pos_ = at;
          fail("division by an expression containing jet variables");
        }
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        v *= d.jet_free_part().inverse();
      } else {
        return v;
      }
    }
  }

  DiffPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  long integer_exponent() {
    skip_ws();
    bool paren = accept('(');
    bool neg = false;
    if (accept('-')) neg = true;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 9) fail("exponent too large");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (paren && !accept(')')) fail("expected ')'");
    return neg ? -e : e;
  }

  DiffPoly power() {
    DiffPoly base = atom();
    if (accept('^')) {
      const std::size_t at = pos_;
      const long e = integer_exponent();
      if (e < 0) {
        if (!base.is_jet_free()) {
          pos_ = at;
          fail("negative power of an expression containing jet variables");
        }
        if (base.is_zero()) {
          pos_ = at;
          fail("negative power of zero");
        }
        return DiffPoly(base.jet_free_part().pow(e), bound_);
      }
      if (base.is_jet_free()) {
        return DiffPoly(base.jet_free_part().pow(e), bound_);
      }
      return base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  DiffPoly atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      DiffPoly v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return constant(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      const auto index = static_cast<std::size_t>(it - names_.begin());
      std::uint32_t order = 0;
      if (pos_ < s_.size() && s_[pos_] == '_') {
        const std::size_t suffix = pos_;
        ++pos_;
        std::size_t xs = 0;
        while (pos_ < s_.size() && s_[pos_] == 'x') {
          ++pos_;
          ++xs;
        }
        if (xs == 0) {
          pos_ = suffix;
          fail("malformed jet suffix");
        }
        const std::size_t dstart = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (dstart != pos_) {
          if (xs != 1 || pos_ - dstart > 6) {
            pos_ = suffix;
            fail("malformed jet suffix");
          }
          order = static_cast<std::uint32_t>(std::stoul(std::string(s_.substr(dstart, pos_ - dstart))));
          if (order < 4) {
            pos_ = suffix;
            fail("numeric jet suffix is reserved for orders >= 4");
          }
        } else {
          order = static_cast<std::uint32_t>(xs);
        }
        if (!allow_jets_) {
          pos_ = suffix;
          fail("jet variable not allowed here");
        }
      }
      if (order == 0) return DiffPoly::base(names_.size(), index, bound_);
      if (static_cast<int>(order) > bound_) {
        throw BoundError("jet variable " + name + " of order " + std::to_string(order) +
                         " exceeds jet bound " + std::to_string(bound_));
      }
      return DiffPoly::jet(names_.size(), index, order, bound_);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Names& names_;
  int bound_;
  bool allow_jets_;
  std::size_t pos_ = 0;
};

std::string monomial_string(const Exponents& e, const Names& names) {
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += '*';
    out += names.at(k);
    if (e[k] > 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

bool is_single_term(const MPoly& p) { return p.size() <= 1; }

// Splits a primitive square-free factor into linear factors x_i - x_j and x_i
// where possible, returning the pieces (each primitive with positive lc).
std::vector<MPoly> split_simple_factors(MPoly f) {
  std::vector<MPoly> out;
  const std::size_t nv = f.nvars();
  std::vector<MPoly> candidates;
  for (std::size_t i = 0; i < nv; ++i) candidates.push_back(MPoly::variable(nv, i));
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = i + 1; j < nv; ++j) {
      candidates.push_back(MPoly::variable(nv, i) - MPoly::variable(nv, j));
    }
  }
  for (const auto& c : candidates) {
    if (f.total_degree() <= 1) break;
    while (f.total_degree() > 1) {
      auto q = f.try_divide(c);
      if (!q) break;
      out.push_back(c);
      f = *q;
      f.make_primitive();
    }
  }
  out.push_back(f);
  return out;
}

}  // namespace

DiffPoly parse_diffpoly(std::string_view text, const Names& names, int jet_bound) {
  return Parser(text, names, jet_bound, true).parse();
}

RatFn parse_ratfn(std::string_view text, const Names& names) {
  DiffPoly p = Parser(text, names, kDefaultJetBound, false).parse();
  if (p.is_zero()) return RatFn(names.size());
  return p.jet_free_part();
}

Rational parse_rational(std::string_view text) {
  RatFn f = parse_ratfn(text, {});
  return f.constant_value();
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const MPoly& p, const Names& names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool neg = c < 0;
    const Rational a = neg ? Rational(-c) : c;
    const std::string mono = monomial_string(e, names);
    if (first) {
      if (neg) out += '-';
    } else {
      out += neg ? '-' : '+';
    }
    first = false;
    if (mono.empty()) {
      out += to_string(a);
    } else if (a == 1) {
      out += mono;
    } else {
      out += to_string(a) + "*" + mono;
    }
  }
  return out;
}

std::string to_string(const RatFn& f, const Names& names) {
  if (f.is_polynomial()) return to_string(f.num(), names);
  const SquareFreeDecomposition sf = square_free(f.den());
  std::vector<std::pair<MPoly, std::uint32_t>> pieces;
  for (const auto& [factor, mult] : sf.factors) {
    for (auto& piece : split_simple_factors(factor)) {
      if (piece.is_constant()) continue;
      pieces.emplace_back(std::move(piece), mult);
    }
  }
  // Merge equal pieces (a linear factor can appear from several square-free parts).
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
    if (a.first.total_degree() != b.first.total_degree()) {
      return a.first.total_degree() < b.first.total_degree();
    }
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    const auto& ta = a.first.terms();
    const auto& tb = b.first.terms();
    for (std::size_t k = 0; k < ta.size(); ++k) {
      const int c = grlex_compare(ta[k].first, tb[k].first);
      if (c != 0) return c > 0;
      if (ta[k].second != tb[k].second) return ta[k].second < tb[k].second;
    }
    return false;
  });
  std::vector<std::pair<MPoly, std::uint32_t>> merged;
  for (auto& p : pieces) {
    if (!merged.empty() && merged.back().first == p.first) {
      merged.back().second += p.second;
    } else {
      merged.push_back(std::move(p));
    }
  }
  MPoly prod(f.nvars(), Rational(1));
  for (const auto& [p, m] : merged) prod *= p.pow(m);
  // den = s * prod for a rational s; absorb 1/s into the numerator.
  const Rational s = f.den().leading_coefficient() / prod.leading_coefficient();
  const MPoly num = f.num() * (Rational(1) / s);
  std::string n = to_string(num, names);
  if (!is_single_term(num)) n = "(" + n + ")";
  std::string d;
  for (const auto& [p, m] : merged) {
    if (!d.empty()) d += '*';
    std::string ps = to_string(p, names);
    if (!is_single_term(p) || (m > 1 && p.terms()[0].second != 1)) ps = "(" + ps + ")";
    d += ps;
    if (m > 1) d += "^" + std::to_string(m);
  }
  const bool wrap = merged.size() > 1 ||
                    (merged.size() == 1 && is_single_term(merged[0].first) &&
                     merged[0].first.terms()[0].second != 1);
  return n + "/" + (wrap ? "(" + d + ")" : d);
}

std::string jet_name(const Names& names, JetVar v) {
  std::string out = names.at(v.component) + "_";
  if (v.order <= 3) {
    out += std::string(v.order, 'x');
  } else {
    out += "x" + std::to_string(v.order);
  }
  return out;
}

std::string to_string(const DiffPoly& f, const Names& names) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += '*';
      mono += jet_name(names, v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    const bool neg = c.num().leading_coefficient() < 0;
    const RatFn a = neg ? -c : c;
    std::string coeff;
    if (mono.empty()) {
      coeff = to_string(a, names);
      if (!a.is_polynomial() || a.num().size() > 1) coeff = "(" + coeff + ")";
    } else if (a.is_constant() && a.constant_value() == 1) {
      coeff.clear();
    } else {
      coeff = to_string(a, names);
      if (!a.is_polynomial() || a.num().size() > 1) coeff = "(" + coeff + ")";
    }
    std::string term = coeff;
    if (!mono.empty()) term = coeff.empty() ? mono : coeff + "*" + mono;
    if (first) {
      out += neg ? "-" + term : term;
    } else {
      out += (neg ? " - " : " + ") + term;
    }
    first = false;
  }
  return out;
}

}  // namespace lagrep
