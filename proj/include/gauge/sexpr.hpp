#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gauge {

/// Minimal s-expression: an atom or a parenthesised list. `;` starts a line comment.
struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    std::size_t offset = 0;  ///< byte offset of the first character in the source text

    static SExpr make_atom(std::string text) {
        SExpr e;
        e.atom = std::move(text);
        return e;
    }
    static SExpr make_list(std::vector<SExpr> items) {
        SExpr e;
        e.is_list = true;
        e.items = std::move(items);
        return e;
    }

    bool is_atom() const { return !is_list; }
    bool is_atom(std::string_view text) const { return !is_list && atom == text; }
    /// True for a list whose head is the atom `head`.
    bool has_head(std::string_view head) const {
        return is_list && !items.empty() && items.front().is_atom(head);
    }
};

/// Reads every top-level expression in `text`.
std::vector<SExpr> read_all(std::string_view text);

/// Reads exactly one expression; trailing non-comment text is an error.
SExpr read_one(std::string_view text);

std::string to_string(const SExpr& e);

/// Reads a whole file into memory; throws gauge::Error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace gauge
