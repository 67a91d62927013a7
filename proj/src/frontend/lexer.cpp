#include "ownref/frontend/lexer.hpp"

#include "ownref/logic/error.hpp"

#include <array>
#include <cctype>

namespace ownref::frontend {

namespace {

constexpr std::array<std::string_view, 10> kKeywords = {
    "let", "in", "mkref", "ifz", "if", "then", "else", "alias", "assert", "true"};

// Longest match first.
constexpr std::array<std::string_view, 20> kSymbols = {
    ":=", "<=", ">=", "!=", "&&", "||", "*", "+", "-", "=", "<",
    ">",  "!",  ";",  ",",  "(",  ")",  "{", "}", "_"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$';
}

} // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return word == "false";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int l = line, co = col;
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError(l, co, "unterminated comment");
      advance(end + 2 - i);
      continue;
    }

    Token t;
    t.line = line;
    t.column = col;
    if (src.substr(i, 3) == "\xE2\x8B\x86") {   // ⋆
      t.kind = Token::Kind::Symbol;
      t.text = "_";
      advance(3);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (ident_start(c) && !(c == '_' && (i + 1 >= src.size() || !ident_char(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool found = false;
      for (auto s : kSymbols) {
        if (src.substr(i, s.size()) == s) {
          t.kind = Token::Kind::Symbol;
          t.text = std::string(s);
          advance(s.size());
          found = true;
          break;
        }
      }
      if (!found)
        throw ParseError(line, col, std::string("unexpected character `") + c + "`");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

} // namespace ownref::frontend
