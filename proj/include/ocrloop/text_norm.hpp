#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ocrloop {

// ─── UTF-8 ──────────────────────────────────────────────────────

// Decode UTF-8 into Unicode scalar values. Invalid bytes are kept as
// single code points so malformed model output never throws.
inline std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = b0;
        if (b0 >= 0xF0)      { len = 4; cp = b0 & 0x07u; }
        else if (b0 >= 0xE0) { len = 3; cp = b0 & 0x0Fu; }
        else if (b0 >= 0xC0) { len = 2; cp = b0 & 0x1Fu; }
        if (len > 1) {
            if (i + len > s.size()) { out.push_back(b0); ++i; continue; }
            bool ok = true;
            for (std::size_t k = 1; k < len; ++k) {
                const auto bk = static_cast<unsigned char>(s[i + k]);
                if ((bk & 0xC0u) != 0x80u) { ok = false; break; }
                cp = (cp << 6) | (bk & 0x3Fu);
            }
            if (!ok) { out.push_back(b0); ++i; continue; }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void utf8_append(std::string& out, char32_t cp) {
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

// ─── Character classes ──────────────────────────────────────────

inline bool is_space_cp(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
        case 0x00A0: case 0x3000:  // NBSP, ideographic space
            return true;
        default:
            return false;
    }
}

inline bool is_ascii_punct(char32_t cp) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// Full-width punctuation commonly emitted for Chinese answers.
inline bool is_cjk_punct(char32_t cp) {
    switch (cp) {
        case 0x3002: case 0xFF0C: case 0xFF01: case 0xFF1F:
        case 0xFF1B: case 0xFF1A: case 0x3001: case 0xFF0E:
            return true;
        default:
            return false;
    }
}

inline char32_t to_lower_cp(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
}

// ─── Normalization ──────────────────────────────────────────────

// The one normalizer every string metric routes through: lowercase
// (ASCII), collapse whitespace runs to a single space, trim, and strip
// trailing punctuation.
inline std::string normalize_text(std::string_view s) {
    const auto cps = utf8_decode(s);
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (is_space_cp(cp)) {
            if (!kept.empty()) pending_space = true;
            continue;
        }
        if (pending_space) { kept.push_back(U' '); pending_space = false; }
        kept.push_back(to_lower_cp(cp));
    }
    while (!kept.empty() &&
           (is_ascii_punct(kept.back()) || is_cjk_punct(kept.back()))) {
        kept.pop_back();
        while (!kept.empty() && kept.back() == U' ') kept.pop_back();
    }
    std::string out;
    out.reserve(kept.size());
    for (char32_t cp : kept) utf8_append(out, cp);
    return out;
}

// Lowercased word tokens, splitting on whitespace and punctuation.
// Used by BLEU/METEOR/token-F1 and VQA length routing.
inline std::vector<std::string> tokenize_words(std::string_view s) {
    const auto cps = utf8_decode(s);
    std::vector<std::string> tokens;
    std::string cur;
    for (char32_t cp : cps) {
        if (is_space_cp(cp) || is_ascii_punct(cp) || is_cjk_punct(cp)) {
            if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
            continue;
        }
        utf8_append(cur, to_lower_cp(cp));
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (static_cast<unsigned char>(s[b]) <= ' ')) ++b;
    while (e > b && (static_cast<unsigned char>(s[e - 1]) <= ' ')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    return out;
}

// ─── Stable hashing ─────────────────────────────────────────────

// FNV-1a, used for request digests and config/template hashes.
// std::hash is not stable across processes; this is.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace ocrloop
