#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kwm/kw.hpp"

namespace kwm {

/// Syntax or content error with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Polynomial expression over s0..sn (t1..tn are accepted as aliases of
/// s1..sn). Integers, p/q literals, + - * ^ and parentheses.
Poly parse_poly(std::string_view text, int n, int line = 1, int column = 1);

/// Matrix file: "n=<int>" header, optional "q=<int>" and "vars=..." lines,
/// then rows of comma-separated expressions separated by ';' or newlines.
/// '#' starts a comment.
ARModel parse_matrix(std::string_view text);
std::string print_matrix(const ARModel& r);

/// "[a, b; c, d]" with entries as integers or p/q.
QMatrix parse_qmatrix(std::string_view text, std::size_t rows, std::size_t cols, int line = 1);
std::string print_qmatrix(const QMatrix& m);

/// Contents of a model file before the indices are checked or recovered.
struct ModelText {
    Pencil pencil;
    QMatrix m;
    std::optional<std::vector<int>> blocks;
};

ModelText parse_model_text(std::string_view text);

/// Model file: "key = value" lines for n, q, indices, dimX, dimY, K1..Kn,
/// L and M. Without an "indices" line the indices are recovered from the
/// pencil.
KWModel parse_model(std::string_view text, const SimilarityOptions& opts = {});
std::string print_model(const KWModel& m);

/// Whole file contents; throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);

}  // namespace kwm
