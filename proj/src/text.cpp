// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/text.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "opinion/error.hpp"

namespace opinion::text {

namespace {

// Decodes the scalar starting at byte i; sets len to the bytes consumed.
char32_t decode_one(std::string_view s, std::size_t i, std::size_t& len) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    len = 1;
    if (b0 < 0x80) return b0;
    std::size_t need = 0;
    char32_t acc = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1, acc = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2, acc = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3, acc = b0 & 0x07, min = 0x10000;
    } else {
        return 0xFFFD;
    }
    for (std::size_t k = 1; k <= need; ++k) {
        if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0xFFFD;
        acc = (acc << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    if (acc < min || acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF)) return 0xFFFD;
    len = need + 1;
    return acc;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t len = 1;
        out.push_back(decode_one(s, i, len));
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

std::vector<std::size_t> char_boundaries(std::string_view s) {
    std::vector<std::size_t> out;
    out.reserve(s.size() + 1);
    std::size_t i = 0;
    while (i < s.size()) {
        out.push_back(i);
        std::size_t len = 1;
        decode_one(s, i, len);
        i += len;
    }
    out.push_back(s.size());
    return out;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\v':
        case U'\f':
        case 0x85:
        case 0xA0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
        case 0xFEFF:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
               cp == U'_';
    }
    if (is_space(cp)) return false;
    // General and CJK punctuation blocks.
    if (cp >= 0x2010 && cp <= 0x206F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
    if (cp >= 0xFF1A && cp <= 0xFF20) return false;
    if (cp >= 0xFF3B && cp <= 0xFF40) return false;
    if (cp >= 0xFF5B && cp <= 0xFF65) return false;
    if (cp >= 0x00A1 && cp <= 0x00BF) return false;
    if (cp == 0xD7 || cp == 0xF7 || cp == 0xFFFD) return false;
    return true;
}

bool has_word_char(std::string_view token) {
    for (char32_t cp : decode_utf8(token)) {
        if (is_word_char(cp)) return true;
    }
    return false;
}

namespace {

bool tag_start(std::string_view s, std::size_t i) {
    if (s[i] != '<' || i + 1 >= s.size()) return false;
    const char c = s[i + 1];
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '/' || c == '!' || c == '?';
}

// Block-level tags separate words; inline tags (b, span, a, ...) do not.
bool is_block_tag(std::string_view tag) {
    std::string name;
    for (std::size_t k = 1; k < tag.size(); ++k) {
        const char c = tag[k];
        if (c == '/' && name.empty()) continue;
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) break;
        name.push_back(static_cast<char>(c | 0x20));
    }
    static constexpr std::string_view kBlock[] = {
        "p", "br", "div", "li", "ul", "ol", "tr", "td", "th", "table", "h1", "h2", "h3",
        "h4", "h5", "h6", "hr", "section", "article", "header", "footer", "blockquote", "pre"};
    for (auto b : kBlock) {
        if (name == b) return true;
    }
    // Comments, doctype and processing instructions.
    return name.empty();
}

// One left-to-right pass. Returns true if anything was removed.
bool strip_pass(std::string_view in, std::string& out) {
    out.clear();
    out.reserve(in.size());
    bool removed = false;
    std::size_t i = 0;
    while (i < in.size()) {
        if (tag_start(in, i)) {
            const auto close = in.find('>', i + 1);
            if (close != std::string_view::npos) {
                if (is_block_tag(in.substr(i, close - i))) out.push_back(' ');
                i = close + 1;
                removed = true;
                continue;
            }
        }
        out.push_back(in[i]);
        ++i;
    }
    return removed;
}

}  // namespace

std::string strip_markup(std::string_view s) {
    std::string current(s);
    std::string next;
    while (strip_pass(current, next)) current.swap(next);
    return current;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char32_t cp : decode_utf8(s)) {
        if (is_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, cp);
    }
    return out;
}

std::string normalize(std::string_view s) { return collapse_whitespace(strip_markup(s)); }

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        first = false;
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace opinion::text
