#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ocrloop/metrics/score.hpp"
#include "ocrloop/metrics/table_tree.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

namespace detail {

// Postorder flattening used by the Zhang–Shasha distance.
struct FlatTree {
    std::vector<std::string> tag;        // per postorder index
    std::vector<std::string> norm_text;  // normalized cell text
    std::vector<int> lml;                // leftmost leaf descendant
    std::vector<int> keyroots;           // ascending

    int size() const { return static_cast<int>(tag.size()); }
};

inline int flatten_post(const TableNode& n, FlatTree& out) {
    int leftmost = -1;
    for (const auto& c : n.children) {
        const int child_lml = flatten_post(c, out);
        if (leftmost == -1) leftmost = child_lml;
    }
    const int idx = out.size();
    out.tag.push_back(n.tag);
    out.norm_text.push_back(normalize_text(n.text));
    out.lml.push_back(leftmost == -1 ? idx : leftmost);
    return out.lml.back();
}

inline FlatTree flatten(const TableNode& root) {
    FlatTree f;
    flatten_post(root, f);
    // keyroot = highest postorder index among nodes sharing a leftmost leaf
    std::vector<int> last_for_lml(f.tag.size(), -1);
    for (int i = 0; i < f.size(); ++i) last_for_lml[static_cast<std::size_t>(f.lml[static_cast<std::size_t>(i)])] = i;
    for (int i = 0; i < f.size(); ++i) {
        if (last_for_lml[static_cast<std::size_t>(f.lml[static_cast<std::size_t>(i)])] == i)
            f.keyroots.push_back(i);
    }
    return f;
}

inline int relabel_cost(const FlatTree& a, int i, const FlatTree& b, int j) {
    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(j);
    return (a.tag[ii] == b.tag[jj] && a.norm_text[ii] == b.norm_text[jj]) ? 0 : 1;
}

}  // namespace detail

// Ordered-tree edit distance (insert/delete/relabel, unit costs) by the
// Zhang–Shasha keyroot dynamic program. Cell text participates through
// the relabel cost: nodes match only when both tag and normalized text
// agree.
inline int tree_edit_distance(const TableNode& ta, const TableNode& tb) {
    const detail::FlatTree a = detail::flatten(ta);
    const detail::FlatTree b = detail::flatten(tb);
    const int n = a.size(), m = b.size();
    std::vector<std::vector<int>> td(static_cast<std::size_t>(n),
                                     std::vector<int>(static_cast<std::size_t>(m), 0));

    std::vector<std::vector<int>> fd;  // forest distances, reused per keyroot pair
    for (int i : a.keyroots) {
        for (int j : b.keyroots) {
            const int li = a.lml[static_cast<std::size_t>(i)];
            const int lj = b.lml[static_cast<std::size_t>(j)];
            const int rows = i - li + 2;
            const int cols = j - lj + 2;
            fd.assign(static_cast<std::size_t>(rows), std::vector<int>(static_cast<std::size_t>(cols), 0));
            const int ioff = li - 1;
            const int joff = lj - 1;
            for (int x = 1; x < rows; ++x) fd[static_cast<std::size_t>(x)][0] = fd[static_cast<std::size_t>(x - 1)][0] + 1;
            for (int y = 1; y < cols; ++y) fd[0][static_cast<std::size_t>(y)] = fd[0][static_cast<std::size_t>(y - 1)] + 1;
            for (int x = 1; x < rows; ++x) {
                for (int y = 1; y < cols; ++y) {
                    const int node_i = x + ioff;
                    const int node_j = y + joff;
                    const auto X = static_cast<std::size_t>(x);
                    const auto Y = static_cast<std::size_t>(y);
                    if (a.lml[static_cast<std::size_t>(node_i)] == li &&
                        b.lml[static_cast<std::size_t>(node_j)] == lj) {
                        fd[X][Y] = std::min({fd[X - 1][Y] + 1,
                                             fd[X][Y - 1] + 1,
                                             fd[X - 1][Y - 1] + detail::relabel_cost(a, node_i, b, node_j)});
                        td[static_cast<std::size_t>(node_i)][static_cast<std::size_t>(node_j)] = fd[X][Y];
                    } else {
                        const auto P = static_cast<std::size_t>(a.lml[static_cast<std::size_t>(node_i)] - 1 - ioff);
                        const auto Q = static_cast<std::size_t>(b.lml[static_cast<std::size_t>(node_j)] - 1 - joff);
                        fd[X][Y] = std::min({fd[X - 1][Y] + 1,
                                             fd[X][Y - 1] + 1,
                                             fd[P][Q] + td[static_cast<std::size_t>(node_i)][static_cast<std::size_t>(node_j)]});
                    }
                }
            }
        }
    }
    return td[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(m - 1)];
}

// Tree-Edit Distance Similarity: 1 - TED / max(|pred|, |gold|).
inline MetricScore teds(const TableNode& pred, const TableNode& gold) {
    MetricScore score;
    score.metric = "teds";
    const int ted = tree_edit_distance(pred, gold);
    const std::size_t np = tree_size(pred);
    const std::size_t ng = tree_size(gold);
    const double denom = static_cast<double>(std::max(np, ng));
    score.value = clamp01(1.0 - static_cast<double>(ted) / denom);
    score.diagnostics["ted"] = ted;
    score.diagnostics["pred_nodes"] = np;
    score.diagnostics["gold_nodes"] = ng;
    return score;
}

}  // namespace ocrloop
