#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ownref::frontend {

struct Token {
  enum class Kind { Ident, Int, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1, column = 1;

  bool is(std::string_view sym) const { return kind != Kind::Int && text == sym; }
};

// `⋆` is returned as the symbol `_`.
std::vector<Token> lex(std::string_view source);

bool is_keyword(std::string_view word);

} // namespace ownref::frontend
