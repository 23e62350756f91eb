#pragma once

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// Minimal insert/delete/substitute count between two sequences.
// Two-row dynamic program.
template <typename Seq>
std::size_t levenshtein_seq(const Seq& a, const Seq& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Edit distance over Unicode scalar values, not bytes, so multi-byte
// characters count as single edits.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    return levenshtein_seq(utf8_decode(a), utf8_decode(b));
}

}  // namespace ocrloop
