#include "gauge/sexpr.hpp"

#include "gauge/error.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gauge {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    SExpr read() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        std::size_t start = pos_;
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')'", pos_);
        if (c == '(') {
            ++pos_;
            std::vector<SExpr> items;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) throw ParseError("unbalanced '('", start);
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                items.push_back(read());
            }
            SExpr e = SExpr::make_list(std::move(items));
            e.offset = start;
            return e;
        }
        while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
        SExpr e = SExpr::make_atom(std::string(text_.substr(start, pos_ - start)));
        e.offset = start;
        return e;
    }

private:
    static bool is_delimiter(char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void write(std::ostream& out, const SExpr& e) {
    if (!e.is_list) {
        out << e.atom;
        return;
    }
    out << '(';
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) out << ' ';
        write(out, e.items[i]);
    }
    out << ')';
}

}  // namespace

std::vector<SExpr> read_all(std::string_view text) {
    Reader reader(text);
    std::vector<SExpr> out;
    while (!reader.at_end()) out.push_back(reader.read());
    return out;
}

SExpr read_one(std::string_view text) {
    Reader reader(text);
    SExpr e = reader.read();
    if (!reader.at_end()) throw ParseError("trailing input after expression", e.offset);
    return e;
}

std::string to_string(const SExpr& e) {
    std::ostringstream out;
    write(out, e);
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace gauge
