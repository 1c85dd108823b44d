#include "support/golden.hpp"

#include <cctype>
#include <set>

namespace fgo::test {

std::vector<std::string> go_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
      ++i;
    } else if (ident(c)) {
      std::size_t j = i;
      while (j < text.size() && ident(text[j])) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"') j += text[j] == '\\' ? 2 : 1;
      out.emplace_back(text.substr(i, j + 1 - i));
      i = j + 1;
    } else if (i + 1 < text.size() && (text.substr(i, 2) == ":=" || text.substr(i, 2) == "==" ||
                                       text.substr(i, 2) == "&&" || text.substr(i, 2) == "||")) {
      out.emplace_back(text.substr(i, 2));
      i += 2;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

bool same_tokens(std::string_view a, std::string_view b) { return go_tokens(a) == go_tokens(b); }

std::string token_diff(std::string_view a, std::string_view b) {
  auto x = go_tokens(a), y = go_tokens(b);
  std::size_t i = 0;
  while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
  if (i == x.size() && i == y.size()) return "identical";
  auto at = [](const std::vector<std::string>& v, std::size_t k) {
    std::string s;
    for (std::size_t j = k; j < v.size() && j < k + 8; ++j) s += v[j] + " ";
    return s.empty() ? std::string("<end>") : s;
  };
  return "token " + std::to_string(i) + ": [" + at(x, i) + "] vs [" + at(y, i) + "]";
}

std::string alpha_rename(std::string_view text, const std::map<std::string, std::string>& renaming) {
  std::string out;
  std::size_t i = 0;
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < text.size()) {
    if (ident(text[i])) {
      std::size_t j = i;
      while (j < text.size() && ident(text[j])) ++j;
      std::string w(text.substr(i, j - i));
      auto it = renaming.find(w);
      out += it == renaming.end() ? w : it->second;
      i = j;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string render_decls(const go::Program& p, const std::vector<std::string>& names,
                         const go::RenderOptions& opts) {
  std::set<std::string> wanted(names.begin(), names.end());
  go::Program q;
  q.package = p.package;
  for (const auto& d : p.decls) {
    const std::string& n = std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
    if (wanted.count(n)) q.decls.push_back(d);
  }
  std::string text = go::render(q, opts);
  auto header = text.find("\n)\n");
  if (header != std::string::npos) text = text.substr(header + 3);
  return text.substr(std::min(text.find_first_not_of('\n'), text.size()));
}

std::size_t clause_blocks(const go::Program& p, const std::string& name) {
  for (const auto& d : p.decls) {
    const auto* f = std::get_if<go::FuncDecl>(&d);
    if (!f || f->name != name) continue;
    std::size_t n = 0;
    for (const go::Stmt* s = f->body.get(); s; s = s->rest.get())
      if (s->kind == go::Stmt::Kind::Block) ++n;
    return n;
  }
  return 0;
}

}  // namespace fgo::test
