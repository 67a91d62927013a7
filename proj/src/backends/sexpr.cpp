#include "ownref/backends/sexpr.hpp"

#include "ownref/logic/error.hpp"

#include <cctype>

namespace ownref::backends {

namespace {

class Reader {
public:
  explicit Reader(std::string_view s) : s_(s) {}

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

  SExpr read() {
    skip();
    if (i_ >= s_.size()) throw Error("s-expression: unexpected end of input");
    char c = s_[i_];
    if (c == ')') throw Error("s-expression: unbalanced ')'");
    if (c == '(') {
      ++i_;
      SExpr e;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw Error("s-expression: missing ')'");
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    SExpr e;
    if (c == '|') {
      auto end = s_.find('|', i_ + 1);
      if (end == std::string_view::npos) throw Error("s-expression: unterminated |symbol|");
      e.atom = std::string(s_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return e;
    }
    if (c == '"') {
      std::size_t j = i_ + 1;
      for (;; ++j) {
        if (j >= s_.size()) throw Error("s-expression: unterminated string");
        if (s_[j] == '"') {
          if (j + 1 < s_.size() && s_[j + 1] == '"') {
            ++j;
            continue;
          }
          break;
        }
      }
      e.atom = std::string(s_.substr(i_, j + 1 - i_));
      i_ = j + 1;
      return e;
    }
    std::size_t j = i_;
    while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' &&
           s_[j] != ')' && s_[j] != ';')
      ++j;
    e.atom = std::string(s_.substr(i_, j - i_));
    i_ = j;
    return e;
  }

private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::optional<mpq_class> decimal(const std::string& a) {
  if (a.empty()) return std::nullopt;
  auto dot = a.find('.');
  std::string whole = a.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : a.substr(dot + 1);
  if (whole.empty()) whole = "0";
  for (char c : whole + frac)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  mpz_class num(whole + frac, 10);
  mpz_class den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

} // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

std::string to_string(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string s = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) s += ' ';
    s += to_string(e.items[i]);
  }
  return s + ")";
}

std::optional<mpq_class> rational_value(const SExpr& e) {
  if (!e.is_list) return decimal(e.atom);
  if (e.items.size() == 2 && e.items[0].is_atom("-")) {
    auto v = rational_value(e.items[1]);
    if (!v) return std::nullopt;
    return mpq_class(-*v);
  }
  if (e.items.size() == 3 && e.items[0].is_atom("/")) {
    auto n = rational_value(e.items[1]);
    auto d = rational_value(e.items[2]);
    if (!n || !d || *d == 0) return std::nullopt;
    return mpq_class(*n / *d);
  }
  return std::nullopt;
}

} // namespace ownref::backends
