#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oppbridge/error.hpp"

namespace oppbridge {

/// Splits a recorded command line into words the way a POSIX shell would,
/// minus expansions. Single and double quotes group and are stripped; a
/// backslash outside single quotes takes the next character literally.
/// A trailing lone backslash is kept as a literal backslash.
inline std::vector<std::string> tokenize_options(std::string_view value) {
  std::vector<std::string> tokens;
  std::optional<std::string> token;
  char quote = 0;

  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (quote == '\'') {
      if (c == '\'') {
        quote = 0;
      } else {
        token->push_back(c);
      }
    } else if (c == '\\') {
      if (!token) token.emplace();
      if (i + 1 < value.size()) {
        token->push_back(value[++i]);
      } else {
        token->push_back('\\');
      }
    } else if (quote == '"') {
      if (c == '"') {
        quote = 0;
      } else {
        token->push_back(c);
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
      if (!token) token.emplace();
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (token) tokens.push_back(std::move(*token));
      token.reset();
    } else {
      if (!token) token.emplace();
      token->push_back(c);
    }
  }

  if (quote != 0) {
    throw Error(Errc::UnterminatedQuote,
                std::string("unterminated ") + (quote == '"' ? "double" : "single") +
                    " quote in option string");
  }
  if (token) tokens.push_back(std::move(*token));
  return tokens;
}

}  // namespace oppbridge
