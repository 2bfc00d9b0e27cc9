#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qulint {

/// Splits text into lines. The trailing segment after the last newline is a
/// line only if it is non-empty, so "a\n" is one line and "a\nb" is two.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

inline int count_lines(std::string_view text) {
    return static_cast<int>(split_lines(text).size());
}

/// Returns the 1-based line, or "" when out of range.
inline std::string line_at(std::string_view text, int line) {
    auto lines = split_lines(text);
    if (line < 1 || line > static_cast<int>(lines.size())) return "";
    return std::string(lines[static_cast<std::size_t>(line - 1)]);
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// Prefixes every line with "<n>: ", numbering from 1. Newline structure is
/// preserved, so strip_line_annotations reproduces the input byte-exactly.
inline std::string annotate_lines(std::string_view text) {
    std::string out;
    out.reserve(text.size() + text.size() / 8 + 16);
    int n = 1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        out += std::to_string(n++);
        out += ": ";
        if (nl == std::string_view::npos) {
            out += text.substr(pos);
            break;
        }
        out += text.substr(pos, nl - pos + 1);
        pos = nl + 1;
    }
    return out;
}

/// Inverse of annotate_lines: removes one "<n>: " prefix from every line.
inline std::string strip_line_annotations(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::size_t end = (nl == std::string_view::npos) ? text.size() : nl + 1;
        std::string_view line = text.substr(pos, end - pos);
        std::size_t d = 0;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
        if (d > 0 && d + 1 < line.size() && line[d] == ':' && line[d + 1] == ' ') {
            out += line.substr(d + 2);
        } else {
            out += line;
        }
        pos = end;
    }
    return out;
}

inline std::string replace_all(std::string text, std::string_view from, std::string_view to) {
    if (from.empty()) return text;
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (true) {
        std::size_t hit = text.find(from, pos);
        if (hit == std::string::npos) {
            out.append(text, pos, text.size() - pos);
            return out;
        }
        out.append(text, pos, hit - pos);
        out.append(to);
        pos = hit + from.size();
    }
}

/// Deterministic upper-bound token estimate: ceil(len/4).
inline int estimate_tokens(std::string_view text) {
    return static_cast<int>((text.size() + 3) / 4);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace qulint
