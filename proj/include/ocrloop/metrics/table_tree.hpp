#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// Rooted ordered labeled tree for table structure scoring. Tags are
// lowercase element names; cells carry text content.
struct TableNode {
    std::string tag;
    std::string text;
    std::vector<TableNode> children;
};

inline std::size_t tree_size(const TableNode& n) {
    std::size_t total = 1;
    for (const auto& c : n.children) total += tree_size(c);
    return total;
}

namespace detail {

inline bool is_structural_tag(std::string_view t) {
    return t == "table" || t == "thead" || t == "tbody" || t == "tr" ||
           t == "td" || t == "th";
}

struct TagToken {
    std::string name;
    bool closing = false;
};

// Parse "<name attr=...>" starting at s[pos] == '<'. Returns the position
// one past '>' and fills the token, or returns npos when this is not a
// well-formed tag (caller treats '<' as text).
inline std::size_t scan_tag(std::string_view s, std::size_t pos, TagToken& tok) {
    std::size_t i = pos + 1;
    tok.closing = false;
    tok.name.clear();
    if (i < s.size() && s[i] == '/') { tok.closing = true; ++i; }
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])))) {
        tok.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
        ++i;
    }
    if (tok.name.empty()) return std::string_view::npos;
    while (i < s.size() && s[i] != '>') ++i;
    if (i >= s.size()) return std::string_view::npos;
    return i + 1;
}

inline void append_cell_text(TableNode& node, std::string_view chunk) {
    const std::string t = trim(chunk);
    if (t.empty()) return;
    if (!node.text.empty()) node.text.push_back(' ');
    node.text += t;
}

inline TableNode parse_tagged(std::string_view s) {
    TableNode virtual_root;  // tag "" collects top-level nodes
    std::vector<TableNode*> stack{&virtual_root};

    auto top = [&]() -> TableNode& { return *stack.back(); };
    auto open = [&](std::string name) {
        top().children.push_back(TableNode{std::move(name), "", {}});
        stack.push_back(&top().children.back());
    };

    std::size_t i = 0;
    std::size_t text_begin = 0;
    auto flush_text = [&](std::size_t end) {
        if (end > text_begin) append_cell_text(top(), s.substr(text_begin, end - text_begin));
    };

    while (i < s.size()) {
        if (s[i] != '<') { ++i; continue; }
        TagToken tok;
        const std::size_t next = scan_tag(s, i, tok);
        if (next == std::string_view::npos) { ++i; continue; }
        flush_text(i);
        text_begin = next;
        i = next;
        if (!is_structural_tag(tok.name)) continue;  // drop inline markup
        if (tok.closing) {
            // pop to the matching open node if one exists
            for (std::size_t k = stack.size(); k-- > 1;) {
                if (stack[k]->tag == tok.name) {
                    stack.resize(k);
                    break;
                }
            }
            continue;
        }
        if (tok.name == "td" || tok.name == "th") {
            // cells never nest: an unclosed cell ends when the next one starts
            while (stack.size() > 1 && (top().tag == "td" || top().tag == "th"))
                stack.pop_back();
            if (top().tag != "tr") open("tr");  // implicit row
        } else if (tok.name == "tr") {
            // rows never nest inside cells or other rows
            while (stack.size() > 1 &&
                   (top().tag == "td" || top().tag == "th" || top().tag == "tr"))
                stack.pop_back();
        }
        open(tok.name);
    }
    flush_text(s.size());

    if (virtual_root.children.size() == 1 && virtual_root.children.front().tag == "table" &&
        virtual_root.text.empty()) {
        return std::move(virtual_root.children.front());
    }
    virtual_root.tag = "table";
    return virtual_root;
}

inline bool is_md_separator_row(std::string_view line) {
    bool saw_dash = false;
    for (char c : line) {
        if (c == '-') saw_dash = true;
        else if (c != '|' && c != ':' && c != '+' && c != '=' && c != ' ' && c != '\t' && c != '\r')
            return false;
    }
    return saw_dash;
}

inline TableNode parse_markdown(std::string_view s) {
    TableNode root{"table", "", {}};
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t eol = s.find('\n', pos);
        std::string_view line = s.substr(pos, eol == std::string_view::npos ? s.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? s.size() + 1 : eol + 1;
        if (line.find('|') == std::string_view::npos) continue;
        if (is_md_separator_row(line)) continue;

        std::vector<std::string> cells;
        std::size_t b = 0;
        while (true) {
            const std::size_t bar = line.find('|', b);
            cells.push_back(trim(line.substr(b, bar == std::string_view::npos ? line.size() - b : bar - b)));
            if (bar == std::string_view::npos) break;
            b = bar + 1;
        }
        const std::string lead = trim(line);
        if (!lead.empty() && lead.front() == '|' && !cells.empty() && cells.front().empty())
            cells.erase(cells.begin());
        if (!lead.empty() && lead.back() == '|' && !cells.empty() && cells.back().empty())
            cells.pop_back();
        if (cells.empty()) continue;

        TableNode row{"tr", "", {}};
        for (auto& c : cells) row.children.push_back(TableNode{"td", std::move(c), {}});
        root.children.push_back(std::move(row));
    }
    return root;
}

}  // namespace detail

// Tolerant table parser: HTML-style table markup and markdown pipe
// tables map onto the same tree shape; anything else becomes a
// single-root tree holding the raw text so scoring can still proceed.
inline TableNode parse_table_markup(std::string_view text) {
    const std::string lowered = to_lower_ascii(text);
    for (const char* t : {"<table", "<tr", "<td", "<th", "<tbody", "<thead"}) {
        if (lowered.find(t) != std::string::npos) return detail::parse_tagged(text);
    }
    if (text.find('|') != std::string_view::npos) {
        TableNode md = detail::parse_markdown(text);
        if (!md.children.empty()) return md;
    }
    return TableNode{"table", trim(text), {}};
}

}  // namespace ocrloop
