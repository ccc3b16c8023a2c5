#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace kwm {

/// Exact rational scalar. GMP keeps every value reduced with a positive
/// denominator, and zero is 0/1.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of rationals.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);
    QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
    QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static QMatrix identity(std::size_t n);
    static QMatrix zero(std::size_t rows, std::size_t cols) { return QMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Rational>& entries() const { return data_; }

    bool is_zero() const;

    QMatrix transpose() const;
    QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    QMatrix column(std::size_t c) const { return block(0, c, rows_, 1); }
    QMatrix row(std::size_t r) const { return block(r, 0, 1, cols_); }
    void set_block(std::size_t r0, std::size_t c0, const QMatrix& b);

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix operator*(const Rational& s) const;
    QMatrix operator-() const;
    bool operator==(const QMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

QMatrix hstack(const QMatrix& a, const QMatrix& b);
QMatrix vstack(const QMatrix& a, const QMatrix& b);
QMatrix block_diagonal(const std::vector<QMatrix>& blocks);

struct RrefResult {
    QMatrix matrix;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Zero rows are kept at the bottom.
RrefResult rref(const QMatrix& m);
std::size_t rank(const QMatrix& m);
/// Rank of m reduced modulo the prime 2^61 - 1; a lower bound for rank(m).
/// nullopt when some denominator is divisible by the prime.
std::optional<std::size_t> rank_mod_p(const QMatrix& m);

/// Columns span the right null space. Column k has a 1 in the k-th free
/// column of rref(m), zeros in the other free columns.
QMatrix kernel_basis(const QMatrix& m);

/// One particular solution of m x = b with every free variable set to zero,
/// or nullopt when the system is inconsistent.
std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b);

std::optional<QMatrix> inverse(const QMatrix& m);
bool is_invertible(const QMatrix& m);

std::string to_string(const QMatrix& m);

}  // namespace kwm
