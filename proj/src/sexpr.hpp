#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

namespace fsat::detail {

struct Token {
  enum class Kind { LParen, RParen, Ident, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Token::Kind::RParen, ")", i++});
    } else if (c == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else {
      std::size_t start = i;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' &&
             s[i] != ';')
        ++i;
      out.push_back({Token::Kind::Ident, s.substr(start, i - start), start});
    }
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

inline std::optional<std::size_t> explicit_index(const std::string& name) {
  if (name.size() < 2 || name[0] != '#') return std::nullopt;
  std::size_t v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  return v;
}

}  // namespace fsat::detail
