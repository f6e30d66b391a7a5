#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "tgr/error.hpp"

namespace tgr::detail {

enum class Tok { kIdent, kInt, kBottom, kArrow, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Tokenizer shared by the term, graph and rule grammars. `#` starts a comment
/// unless it sits inside an identifier and is followed by a digit (as in the
/// generated node ids `h#3`).
class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  bool at_punct(char c) const {
    return current_.kind == Tok::kPunct && current_.text.size() == 1 && current_.text[0] == c;
  }
  bool at_ident(std::string_view word) const {
    return current_.kind == Tok::kIdent && current_.text == word;
  }

  void expect_punct(char c) {
    if (!at_punct(c)) fail(std::string("expected '") + c + "'");
    advance();
  }
  std::string expect_ident(const char* what = "identifier") {
    if (current_.kind != Tok::kIdent) fail(std::string("expected ") + what);
    return next().text;
  }
  int expect_int() {
    if (current_.kind != Tok::kInt) fail("expected integer");
    return std::stoi(next().text);
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string got = current_.kind == Tok::kEnd ? "end of input" : "'" + current_.text + "'";
    throw ParseError(file_, current_.line, current_.column, message + ", got " + got);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(file_, t.line, t.column, message);
  }

  const std::string& file() const { return file_; }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space();
    current_ = Token{};
    current_.line = line_;
    current_.column = col_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::kEnd;
      return;
    }
    std::string_view rest = text_.substr(pos_);
    if (rest.starts_with("_|_")) {
      current_.kind = Tok::kBottom;
      current_.text = "_|_";
      for (int i = 0; i < 3; ++i) bump();
      return;
    }
    if (rest.starts_with("⊥")) {
      current_.kind = Tok::kBottom;
      current_.text = "⊥";
      for (std::size_t i = 0; i < std::string_view("⊥").size(); ++i) bump();
      return;
    }
    if (rest.starts_with("->")) {
      current_.kind = Tok::kArrow;
      current_.text = "->";
      bump();
      bump();
      return;
    }
    char c = text_[pos_];
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (ident_char(d)) {
          bump();
        } else if (d == '#' && pos_ + 1 < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          bump();
        } else {
          break;
        }
      }
      current_.kind = Tok::kIdent;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      current_.kind = Tok::kInt;
      current_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    if (std::string_view("(),;:{}/@.=").find(c) != std::string_view::npos) {
      current_.kind = Tok::kPunct;
      current_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(file_, line_, col_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

}  // namespace tgr::detail
