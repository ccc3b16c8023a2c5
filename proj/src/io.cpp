#include "kwm/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace kwm {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, int n, int line, int column) : s_(text), n_(n), line_(line), col0_(column) {}

    Poly parse() {
        Poly p = expr();
        skip();
        if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(line_, col0_ + static_cast<int>(pos_), what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Poly term() {
        Poly acc = unary();
        while (accept('*')) acc = acc * unary();
        return acc;
    }

    Poly unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Poly power() {
        Poly base = atom();
        if (!accept('^')) return base;
        skip();
        const std::size_t start = pos_;
        Integer e = integer();
        if (e > 64) {
            pos_ = start;
            fail("exponent too large");
        }
        return base.pow(static_cast<int>(e.get_si()));
    }

    Integer integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    Poly atom() {
        skip();
        if (pos_ >= s_.size()) fail("expected expression");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational value(integer());
            if (accept('/')) {
                skip();
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    fail("division is only allowed between integer literals");
                const std::size_t at = pos_;
                Integer den = integer();
                if (den == 0) {
                    pos_ = at;
                    fail("zero denominator");
                }
                value /= Rational(den);
            }
            return Poly::constant(n_, value);
        }
        if (c == 's' || c == 't') {
            const std::size_t start = pos_++;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = start;
                fail("expected variable index");
            }
            const int slot = s_[pos_++] - '0';
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = start;
                fail("variable out of range");
            }
            if (slot > n_ || (c == 't' && slot == 0)) {
                pos_ = start;
                fail(std::string("variable out of range: ") + c + std::to_string(slot));
            }
            return Poly::variable(n_, slot);
        }
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int n_;
    int line_;
    int col0_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Line {
    int number;
    std::string_view text;
};

// Lines with comments removed; blank lines dropped.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    while (!text.empty() || number == 0) {
        ++number;
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!trim(line).empty()) out.push_back({number, line});
        if (text.empty()) break;
    }
    return out;
}

int column_of(const Line& line, std::string_view part) {
    return static_cast<int>(part.data() - line.text.data()) + 1;
}

// "key = value" split; nullopt when there is no '='.
std::optional<std::pair<std::string, std::string_view>> key_value(std::string_view line) {
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    return std::make_pair(std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1)));
}

int parse_int(std::string_view s, int line, int column) {
    s = trim(s);
    if (s.empty()) throw ParseError(line, column, "expected integer");
    int value = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError(line, column, "expected integer");
        value = value * 10 + (c - '0');
        if (value > 1000000) throw ParseError(line, column, "integer too large");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const std::size_t at = s.find(sep);
        out.push_back(s.substr(0, at));
        if (at == std::string_view::npos) return out;
        s = s.substr(at + 1);
    }
}

}  // namespace

Poly parse_poly(std::string_view text, int n, int line, int column) {
    return ExprParser(text, n, line, column).parse();
}

ARModel parse_matrix(std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError(1, 1, "missing header n=<int>");
    std::size_t at = 0;
    int n = 0;
    std::optional<std::size_t> q;
    for (; at < lines.size(); ++at) {
        auto kv = key_value(lines[at].text);
        if (!kv) break;
        const int col = column_of(lines[at], kv->second);
        if (kv->first == "n") {
            n = parse_int(kv->second, lines[at].number, col);
            if (n < 1 || n > kMaxVars) throw ParseError(lines[at].number, col, "n must be between 1 and 9");
        } else if (kv->first == "q") {
            q = static_cast<std::size_t>(parse_int(kv->second, lines[at].number, col));
        } else if (kv->first == "vars") {
            continue;  // checked below once n is known
        } else {
            throw ParseError(lines[at].number, 1, "unknown header key '" + kv->first + "'");
        }
    }
    if (n == 0) throw ParseError(lines.front().number, 1, "missing header n=<int>");
    for (std::size_t h = 0; h < at; ++h) {
        auto kv = key_value(lines[h].text);
        if (kv->first != "vars") continue;
        for (auto name : split(kv->second, ',')) {
            const int col = column_of(lines[h], name);
            name = trim(name);
            parse_poly(name, n, lines[h].number, col);
        }
    }

    std::vector<std::vector<Poly>> rows;
    std::vector<std::pair<int, int>> row_pos;
    for (; at < lines.size(); ++at) {
        for (auto row_text : split(lines[at].text, ';')) {
            if (trim(row_text).empty()) continue;
            std::vector<Poly> row;
            for (auto entry : split(row_text, ','))
                row.push_back(parse_poly(entry, n, lines[at].number, column_of(lines[at], entry)));
            if (!rows.empty() && row.size() != rows.front().size())
                throw ParseError(lines[at].number, column_of(lines[at], row_text), "row length differs from the first row");
            rows.push_back(std::move(row));
            row_pos.emplace_back(lines[at].number, column_of(lines[at], row_text));
        }
    }
    if (rows.empty()) {
        if (!q) throw ParseError(lines.back().number, 1, "matrix without rows needs q=<int>");
        return ARModel::free_behavior(n, *q);
    }
    if (q && *q != rows.front().size())
        throw ParseError(row_pos.front().first, row_pos.front().second, "row length differs from q");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool zero = true;
        for (const auto& p : rows[i]) zero = zero && p.is_zero();
        if (zero) throw ParseError(row_pos[i].first, row_pos[i].second, "zero row");
        for (const auto& p : rows[i])
            if (p.uses_s0()) throw ParseError(row_pos[i].first, row_pos[i].second, "s0 is not allowed in an AR model");
    }
    return ARModel(PolyMatrix::from_rows(n, rows));
}

std::string print_matrix(const ARModel& r) {
    std::ostringstream out;
    out << "n=" << r.n() << "\n";
    if (r.is_free()) {
        out << "q=" << r.q() << "\n";
        return out.str();
    }
    for (std::size_t i = 0; i < r.p(); ++i) {
        for (std::size_t j = 0; j < r.q(); ++j) out << (j ? ", " : "") << r.matrix()(i, j).to_string();
        out << "\n";
    }
    return out.str();
}

QMatrix parse_qmatrix(std::string_view text, std::size_t rows, std::size_t cols, int line) {
    const std::string_view t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ParseError(line, 1, "matrix must be written [a, b; c, d]");
    const std::string_view body = trim(t.substr(1, t.size() - 2));
    if (body.empty()) {
        if (rows * cols != 0) throw ParseError(line, 1, "empty matrix where " + std::to_string(rows) + "x" + std::to_string(cols) + " expected");
        return QMatrix(rows, cols);
    }
    const auto row_texts = split(body, ';');
    if (row_texts.size() != rows)
        throw ParseError(line, 1, "expected " + std::to_string(rows) + " rows, found " + std::to_string(row_texts.size()));
    QMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto entries = split(row_texts[r], ',');
        if (entries.size() != cols)
            throw ParseError(line, 1, "row " + std::to_string(r + 1) + " has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            try {
                m(r, c) = parse_rational(std::string(trim(entries[c])));
            } catch (const std::exception&) {
                throw ParseError(line, static_cast<int>(entries[c].data() - text.data()) + 1,
                                 "invalid rational '" + std::string(trim(entries[c])) + "'");
            }
        }
    }
    return m;
}

std::string print_qmatrix(const QMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return "[]";
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) out += "; ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += to_string(m(r, c));
        }
    }
    return out + "]";
}

ModelText parse_model_text(std::string_view text) {
    std::map<std::string, std::pair<std::string_view, int>> values;
    for (const auto& line : content_lines(text)) {
        auto kv = key_value(line.text);
        if (!kv) throw ParseError(line.number, 1, "expected key = value");
        if (values.count(kv->first)) throw ParseError(line.number, 1, "duplicate key '" + kv->first + "'");
        values[kv->first] = {kv->second, line.number};
    }
    auto need = [&](const std::string& key) -> std::pair<std::string_view, int> {
        auto it = values.find(key);
        if (it == values.end()) throw ParseError(1, 1, "missing key '" + key + "'");
        return it->second;
    };
    auto integer = [&](const std::string& key) {
        auto [v, line] = need(key);
        return parse_int(v, line, 1);
    };

    const int n = integer("n");
    if (n < 1 || n > kMaxVars) throw ParseError(need("n").second, 1, "n must be between 1 and 9");
    const auto q = static_cast<std::size_t>(integer("q"));
    const auto dx = static_cast<std::size_t>(integer("dimX"));
    const auto dy = static_cast<std::size_t>(integer("dimY"));
    std::vector<QMatrix> k;
    for (int i = 1; i <= n; ++i) {
        auto [v, line] = need("K" + std::to_string(i));
        k.push_back(parse_qmatrix(v, dy, dx, line));
    }
    auto [lv, ll] = need("L");
    auto [mv, ml] = need("M");
    Pencil pencil(n, std::move(k), parse_qmatrix(lv, dy, dx, ll));
    QMatrix m = parse_qmatrix(mv, dy, q, ml);
    for (const auto& [key, v] : values) {
        const bool known = key == "n" || key == "q" || key == "dimX" || key == "dimY" || key == "L" || key == "M" ||
                           key == "indices" || (key.size() == 2 && key[0] == 'K' && key[1] >= '1' && key[1] - '0' <= n);
        if (!known) throw ParseError(v.second, 1, "unknown key '" + key + "'");
    }

    ModelText out{std::move(pencil), std::move(m), std::nullopt};
    auto it = values.find("indices");
    if (it != values.end()) {
        std::string_view list = trim(it->second.first);
        if (!list.empty() && list.front() == '(' && list.back() == ')') list = trim(list.substr(1, list.size() - 2));
        std::vector<int> blocks;
        if (!list.empty())
            for (auto part : split(list, ',')) blocks.push_back(parse_int(part, it->second.second, 1));
        out.blocks = std::move(blocks);
    }
    return out;
}

KWModel parse_model(std::string_view text, const SimilarityOptions& opts) {
    ModelText t = parse_model_text(text);
    if (!t.blocks) {
        return model_from_pencil(t.pencil, t.m, index_bound(t.pencil), opts);
    }
    try {
        return KWModel(std::move(t.pencil), std::move(t.m), std::move(*t.blocks));
    } catch (const DimensionError& e) {
        throw ParseError(1, 1, std::string("indices: ") + e.what());
    }
}

std::string print_model(const KWModel& m) {
    std::ostringstream out;
    out << "n = " << m.n() << "\n";
    out << "q = " << m.q() << "\n";
    out << "indices = ";
    for (std::size_t i = 0; i < m.blocks().size(); ++i) out << (i ? ", " : "") << m.blocks()[i];
    out << "\n";
    out << "dimX = " << m.dim_x() << "\n";
    out << "dimY = " << m.dim_y() << "\n";
    for (int i = 1; i <= m.n(); ++i) out << "K" << i << " = " << print_qmatrix(m.pencil().k(i)) << "\n";
    out << "L = " << print_qmatrix(m.pencil().l()) << "\n";
    out << "M = " << print_qmatrix(m.m()) << "\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace kwm
