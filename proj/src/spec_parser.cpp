/*
 * Copyright (c) 2026 The protoforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Recursive-descent parser for the .psl format:
//
//   spec    := "delta" FLOAT ";" "cars" IDENT+ ";" phi
//   phi     := primary ( "|" phi )?
//   primary := "(" phi ")" | event ( "." phi | ":" FLOAT )
//   event   := IDENT IDENT "->" IDENT ( "(" IDENT ")" )?
//
// '#' starts a comment that runs to the end of the line.

#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "protoforge/error.hpp"
#include "protoforge/spec.hpp"

namespace protoforge {

namespace {

enum class Tok { Ident, Number, Semi, Dot, Bar, Colon, LParen, RParen, Arrow, End };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Bar: return "'|'";
    case Tok::Colon: return "':'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      const int line = line_, col = col_;
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])))) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
          advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          advance();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        out.push_back({Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col});
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", line, col});
      } else {
        Tok kind;
        switch (c) {
          case ';': kind = Tok::Semi; break;
          case '.': kind = Tok::Dot; break;
          case '|': kind = Tok::Bar; break;
          case ':': kind = Tok::Colon; break;
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          default:
            throw ParseError(ErrorCode::Syntax, std::string("unexpected character '") + c + "'",
                             line, col);
        }
        advance();
        out.push_back({kind, std::string(1, c), line, col});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  FullSpec run() {
    expect_keyword("delta");
    const double delta = probability();
    expect(Tok::Semi);
    expect_keyword("cars");
    std::vector<CarId> cars;
    do {
      const Token& t = expect(Tok::Ident);
      if (!cars_.insert(t.text).second) {
        throw ParseError(ErrorCode::DuplicateCar, "car '" + t.text + "' declared twice", t.line,
                         t.column);
      }
      cars.push_back(CarId{t.text});
    } while (peek().kind == Tok::Ident);
    expect(Tok::Semi);
    ProtocolSpec protocol = phi();
    expect(Tok::End);
    return FullSpec{std::move(protocol), delta, std::move(cars)};
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  const Token& expect(Tok kind) {
    const Token& t = toks_[pos_];
    if (t.kind != kind) {
      throw ParseError(ErrorCode::Syntax,
                       std::string("expected ") + tok_name(kind) + ", found " +
                           (t.kind == Tok::End ? std::string(tok_name(Tok::End)) : "'" + t.text + "'"),
                       t.line, t.column);
    }
    ++pos_;
    return t;
  }

  void expect_keyword(const char* word) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text != word) {
      throw ParseError(ErrorCode::Syntax, std::string("expected '") + word + "'", t.line, t.column);
    }
    ++pos_;
  }

  double probability() {
    const Token& t = expect(Tok::Number);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError(ErrorCode::Syntax, "malformed number '" + t.text + "'", t.line, t.column);
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ParseError(ErrorCode::ProbabilityOutOfRange,
                       "probability " + t.text + " outside [0,1]", t.line, t.column);
    }
    return value;
  }

  const Token& car() {
    const Token& t = expect(Tok::Ident);
    if (!cars_.count(t.text)) {
      throw ParseError(ErrorCode::UnknownCar, "car '" + t.text + "' is not declared", t.line,
                       t.column);
    }
    return t;
  }

  GlobalEvent event() {
    const Token& name = expect(Tok::Ident);
    GlobalEvent e;
    e.name = name.text;
    e.src = CarId{car().text};
    expect(Tok::Arrow);
    e.dst = CarId{car().text};
    if (peek().kind == Tok::LParen) {
      ++pos_;
      e.data = expect(Tok::Ident).text;
      expect(Tok::RParen);
    }
    if (e.src == e.dst) {
      throw ParseError(ErrorCode::SelfAddressedEvent,
                       "event '" + e.name + "' has identical source and destination", name.line,
                       name.column);
    }
    auto [it, inserted] = events_.emplace(e.name, e);
    if (!inserted && !(it->second == e)) {
      throw ParseError(ErrorCode::InconsistentEvent,
                       "event '" + e.name + "' redeclared as " + to_string(e) + " (was " +
                           to_string(it->second) + ")",
                       name.line, name.column);
    }
    for (const auto& on_path : path_) {
      if (on_path == e.name) {
        throw ParseError(ErrorCode::DuplicateEventOnPath,
                         "event '" + e.name + "' occurs twice on one path", name.line,
                         name.column);
      }
    }
    return e;
  }

  ProtocolSpec phi() {
    ProtocolSpec left = primary();
    if (peek().kind == Tok::Bar) {
      ++pos_;
      return ProtocolSpec::disj(std::move(left), phi());
    }
    return left;
  }

  ProtocolSpec primary() {
    if (peek().kind == Tok::LParen) {
      ++pos_;
      ProtocolSpec inner = phi();
      expect(Tok::RParen);
      return inner;
    }
    GlobalEvent e = event();
    if (peek().kind == Tok::Dot) {
      ++pos_;
      path_.push_back(e.name);
      ProtocolSpec rest = phi();
      path_.pop_back();
      return ProtocolSpec::seq(std::move(e), std::move(rest));
    }
    if (peek().kind == Tok::Colon) {
      ++pos_;
      return ProtocolSpec::leaf(std::move(e), probability());
    }
    const Token& t = peek();
    throw ParseError(ErrorCode::Syntax,
                     "expected '.' or ':' after event '" + e.name + "'", t.line, t.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> cars_;
  std::map<std::string, GlobalEvent> events_;
  std::vector<std::string> path_;
};

}  // namespace

FullSpec parse_spec(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

}  // namespace protoforge
