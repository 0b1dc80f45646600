#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "alp/errors.hpp"

namespace alp {

struct Token {
  enum class Kind {
    Atom,        // lowercase-initial identifier
    Variable,    // uppercase- or underscore-initial identifier
    Number,      // decimal real
    DoubleColon, // ::
    Implies,     // :-
    Tilde,       // ~
    Comma,       // ,
    Dot,         // .
    LParen,
    RParen,
    LBracket,
    RBracket,
    NegBody,     // \+
    RelEq,       // =
    RelLt,       // <
    RelGt,       // >
    RelLe,       // =<
    RelGe,       // >=
    Opaque,      // { ... } algebraic label, braces stripped
  };

  Kind kind;
  std::string text;   // identifier text / opaque payload
  double number = 0;  // Number only
  int line = 1;
  int column = 1;
};

// Splits UTF-8 source into tokens; `%` starts a comment running to
// end-of-line. Throws ParseError with the offending position.
inline std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  int line = 1, column = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto peek = [&](std::size_t k = 0) -> char {
    return i + k < n ? source[i + k] : '\0';
  };
  auto advance = [&]() {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++i;
  };
  auto push = [&](Token::Kind k, std::string text, int l, int c) {
    tokens.push_back({k, std::move(text), 0.0, l, c});
  };

  while (i < n) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '%') {
      while (i < n && source[i] != '\n') advance();
      continue;
    }
    const int tl = line, tc = column;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        text += peek();
        advance();
      }
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        text += '.';
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          text += peek();
          advance();
        }
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t save = i;
        std::string exp(1, peek());
        advance();
        if (peek() == '+' || peek() == '-') {
          exp += peek();
          advance();
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          while (std::isdigit(static_cast<unsigned char>(peek()))) {
            exp += peek();
            advance();
          }
          text += exp;
        } else {
          i = save;  // bare `e` belongs to the next token
        }
      }
      Token t{Token::Kind::Number, text, std::strtod(text.c_str(), nullptr), tl, tc};
      tokens.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        text += peek();
        advance();
      }
      bool variable = std::isupper(static_cast<unsigned char>(text[0])) || text[0] == '_';
      push(variable ? Token::Kind::Variable : Token::Kind::Atom, text, tl, tc);
      continue;
    }
    switch (c) {
      case ':':
        if (peek(1) == ':') {
          advance();
          advance();
          push(Token::Kind::DoubleColon, "::", tl, tc);
        } else if (peek(1) == '-') {
          advance();
          advance();
          push(Token::Kind::Implies, ":-", tl, tc);
        } else {
          throw ParseError("unexpected ':'", tl, tc);
        }
        continue;
      case '~':
        advance();
        push(Token::Kind::Tilde, "~", tl, tc);
        continue;
      case ',':
        advance();
        push(Token::Kind::Comma, ",", tl, tc);
        continue;
      case '.':
        advance();
        push(Token::Kind::Dot, ".", tl, tc);
        continue;
      case '(':
        advance();
        push(Token::Kind::LParen, "(", tl, tc);
        continue;
      case ')':
        advance();
        push(Token::Kind::RParen, ")", tl, tc);
        continue;
      case '[':
        advance();
        push(Token::Kind::LBracket, "[", tl, tc);
        continue;
      case ']':
        advance();
        push(Token::Kind::RBracket, "]", tl, tc);
        continue;
      case '\\':
        if (peek(1) == '+') {
          advance();
          advance();
          push(Token::Kind::NegBody, "\\+", tl, tc);
          continue;
        }
        throw ParseError("unexpected '\\'", tl, tc);
      case '=':
        if (peek(1) == '<') {
          advance();
          advance();
          push(Token::Kind::RelLe, "=<", tl, tc);
        } else {
          advance();
          push(Token::Kind::RelEq, "=", tl, tc);
        }
        continue;
      case '<':
        advance();
        push(Token::Kind::RelLt, "<", tl, tc);
        continue;
      case '>':
        if (peek(1) == '=') {
          advance();
          advance();
          push(Token::Kind::RelGe, ">=", tl, tc);
        } else {
          advance();
          push(Token::Kind::RelGt, ">", tl, tc);
        }
        continue;
      case '{': {
        advance();
        std::string payload;
        int depth = 1;
        while (i < n) {
          char d = source[i];
          if (d == '{') ++depth;
          if (d == '}' && --depth == 0) break;
          payload += d;
          advance();
        }
        if (i >= n) throw ParseError("unterminated '{'", tl, tc);
        advance();  // closing brace
        // trim surrounding whitespace of the opaque payload
        std::size_t b = payload.find_first_not_of(" \t\r\n");
        std::size_t e = payload.find_last_not_of(" \t\r\n");
        payload = b == std::string::npos ? "" : payload.substr(b, e - b + 1);
        push(Token::Kind::Opaque, payload, tl, tc);
        continue;
      }
      default:
        throw ParseError(std::string("illegal character '") + c + "'", tl, tc);
    }
  }
  return tokens;
}

}  // namespace alp
