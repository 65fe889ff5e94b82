// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace opinion::text {

/// Decodes UTF-8 into Unicode scalar values. Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

/// Byte offsets of every scalar value start, plus a final entry equal to s.size().
std::vector<std::size_t> char_boundaries(std::string_view s);

bool is_space(char32_t cp);

/// True when the scalar is a letter, digit, or ideograph (anything that can carry meaning).
bool is_word_char(char32_t cp);

/// True if `token` contains at least one word character.
bool has_word_char(std::string_view token);

/// Removes markup tags (`<p>`, `</div>`, `<!-- ... -->`, `<br/>`) until none remain.
std::string strip_markup(std::string_view s);

/// Collapses whitespace runs to one ASCII space and trims both ends.
std::string collapse_whitespace(std::string_view s);

/// strip_markup followed by collapse_whitespace; idempotent.
std::string normalize(std::string_view s);

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 14695981039346656037ULL);
std::string to_hex(std::uint64_t v);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

/// Reads the whole file; throws LoadError if it cannot be opened.
std::string read_file(const std::string& path);
/// Reads a file as lines, dropping a trailing '\r' and the UTF-8 BOM.
std::vector<std::string> read_lines(const std::string& path);

}  // namespace opinion::text
