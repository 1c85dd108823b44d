#include <cctype>
#include <set>

#include "surface.hpp"

namespace fgo::parser {

std::string_view to_string(DiagKind k) {
  switch (k) {
    case DiagKind::Lex: return "lex";
    case DiagKind::Parse: return "parse";
    case DiagKind::Scope: return "scope";
    case DiagKind::Type: return "type";
    case DiagKind::Arity: return "arity";
  }
  return "?";
}

std::string format(const Diagnostic& d) {
  return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": " +
         std::string(to_string(d.kind)) + " error: " + d.message;
}

namespace surface {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "datatype", "fun", "class", "instance", "definition", "where",
    "case",     "of",  "when",  "let",      "in"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct Alias {
  std::string_view utf8;
  std::string_view symbol;
};

constexpr Alias kAliases[] = {
    {"\xE2\x87\x92", "=>"},  // ⇒
    {"\xCE\xBB", "\\"},      // λ
    {"\xE2\x8A\x86", "<="},  // ⊆
};

}  // namespace

std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  std::size_t lastLine = 0;
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
  auto push = [&](Tok kind, std::string text, SourcePos pos) {
    out.push_back(Token{kind, std::move(text), pos, pos.line != lastLine});
    lastLine = pos.line;
  };

  while (i < src.size()) {
    char c = src[i];
    SourcePos pos{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 3) == "(*)") {
      push(Tok::Symbol, "(", pos);
      push(Tok::Symbol, "*", SourcePos{line, col + 1});
      push(Tok::Symbol, ")", SourcePos{line, col + 2});
      advance(3);
      continue;
    }
    if (src.substr(i, 2) == "(*") {
      int depth = 0;
      do {
        if (src.substr(i, 2) == "(*") {
          ++depth;
          advance(2);
        } else if (src.substr(i, 2) == "*)") {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      } while (depth > 0 && i < src.size());
      if (depth > 0) diags.push_back({pos, DiagKind::Lex, "unterminated comment"});
      continue;
    }
    bool aliased = false;
    for (const auto& a : kAliases) {
      if (src.substr(i, a.utf8.size()) == a.utf8) {
        push(Tok::Symbol, std::string(a.symbol), pos);
        advance(a.utf8.size());
        aliased = true;
        break;
      }
    }
    if (aliased) continue;
    if (c == '\'' && i + 1 < src.size() && ident_start(src[i + 1])) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::TyVar, std::string(src.substr(i + 1, j - i - 1)), pos);
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      push(kKeywords.count(word) ? Tok::Keyword : Tok::Ident, word, pos);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_start(src[j])) {
        diags.push_back({pos, DiagKind::Lex, "malformed number"});
        while (j < src.size() && ident_char(src[j])) ++j;
        advance(j - i);
        continue;
      }
      push(Tok::Int, std::string(src.substr(i, j - i)), pos);
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size() && src[j] != '\n') {
        if (src[j] == '"') {
          closed = true;
          break;
        }
        if (src[j] == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case 'r': text += '\r'; break;
            case '"': text += '"'; break;
            case '\\': text += '\\'; break;
            default:
              diags.push_back({SourcePos{line, col + (j - i)}, DiagKind::Lex,
                               std::string("unknown escape \\") + e});
          }
          j += 2;
          continue;
        }
        text += src[j++];
      }
      if (!closed) {
        diags.push_back({pos, DiagKind::Lex, "unterminated string literal"});
        advance(j - i);
        continue;
      }
      push(Tok::String, std::move(text), pos);
      advance(j + 1 - i);
      continue;
    }
    static constexpr std::string_view two[] = {"::", "=>", "<="};
    bool matched = false;
    for (auto s : two) {
      if (src.substr(i, 2) == s) {
        push(Tok::Symbol, std::string(s), pos);
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("=|(),\\.+*").find(c) != std::string_view::npos) {
      push(Tok::Symbol, std::string(1, c), pos);
      advance(1);
      continue;
    }
    diags.push_back({pos, DiagKind::Lex, std::string("unexpected character '") + c + "'"});
    advance(1);
  }
  out.push_back(Token{Tok::End, "", SourcePos{line, col}, true});
  return out;
}

std::optional<std::string> operator_name(std::string_view op) {
  if (op == "+") return "plus";
  if (op == "*") return "times";
  return std::nullopt;
}

}  // namespace surface
}  // namespace fgo::parser
