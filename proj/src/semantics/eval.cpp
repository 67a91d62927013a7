#include "ownref/semantics/interpreter.hpp"

namespace ownref::semantics {

namespace {

using logic::Formula;

// Returns nullopt when the formula is not closed after substitution.
std::optional<bool> decide(const Formula& f, const std::map<std::string, Value>& regs,
                           std::string& missing) {
  auto env = [&](const std::string& x) -> const BigInt* {
    auto it = regs.find(x);
    if (it == regs.end() || !it->second.is_int()) {
      missing = x;
      return nullptr;
    }
    return &it->second.as_int();
  };
  switch (f.kind) {
  case Formula::Kind::True: return true;
  case Formula::Kind::False: return false;
  case Formula::Kind::Cmp: {
    BigInt a, b;
    if (!logic::eval_term(f.terms[0], env, a) || !logic::eval_term(f.terms[1], env, b))
      return std::nullopt;
    return logic::cmp_holds(f.op, a, b);
  }
  case Formula::Kind::Not: {
    auto r = decide(f.kids[0], regs, missing);
    if (!r) return r;
    return !*r;
  }
  case Formula::Kind::And:
  case Formula::Kind::Or: {
    bool is_and = f.kind == Formula::Kind::And;
    for (const auto& k : f.kids) {
      auto r = decide(k, regs, missing);
      if (!r) return r;
      if (*r != is_and) return !is_and;
    }
    return is_and;
  }
  case Formula::Kind::Implies:
  case Formula::Kind::Iff: {
    auto a = decide(f.kids[0], regs, missing);
    auto b = decide(f.kids[1], regs, missing);
    if (!a || !b) return std::nullopt;
    return f.kind == Formula::Kind::Implies ? (!*a || *b) : (*a == *b);
  }
  case Formula::Kind::Atom: missing = f.pred; return std::nullopt;
  }
  return std::nullopt;
}

} // namespace

bool eval_formula(const std::map<std::string, Value>& regs, const logic::Formula& f,
                  std::string* warning) {
  std::string missing;
  auto r = decide(f, regs, missing);
  if (!r) {
    if (warning) *warning = "formula `" + logic::to_string(f) + "` is not closed: `" + missing +
                            "` has no integer value";
    return false;
  }
  return *r;
}

} // namespace ownref::semantics
