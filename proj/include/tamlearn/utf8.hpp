#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tamlearn::utf8 {

bool is_valid(std::string_view s);

/// Byte offset of the first byte of every scalar value in `s`.
/// Assumes `s` is valid UTF-8.
std::vector<std::size_t> scalar_offsets(std::string_view s);

std::u32string decode(std::string_view s);
std::string encode(char32_t c);
std::string encode(std::u32string_view s);

std::size_t length(std::string_view s);

/// The trailing `n` scalar values of `s` (all of `s` when it is shorter).
std::string_view suffix(std::string_view s, std::size_t n);

bool is_space(char32_t c);

}  // namespace tamlearn::utf8
