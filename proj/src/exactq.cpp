#include "kwm/exactq.hpp"

#include <cctype>
#include <sstream>
#include <utility>

namespace kwm {

Rational parse_rational(const std::string& text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_int = [&](bool allow_sign) -> std::string {
        skip_ws();
        std::string digits;
        if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            if (text[pos] == '-') digits.push_back('-');
            ++pos;
        }
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits.push_back(text[pos]);
            ++pos;
        }
        if (pos == start) throw std::invalid_argument("malformed rational: '" + text + "'");
        return digits;
    };
    Integer num(read_int(true));
    Integer den(1);
    skip_ws();
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = Integer(read_int(false));
    }
    skip_ws();
    if (pos != text.size()) throw std::invalid_argument("malformed rational: '" + text + "'");
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("QMatrix: entry count does not match shape");
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("QMatrix: ragged initializer");
        for (const auto& v : r) data_.push_back(v);
    }
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool QMatrix::is_zero() const {
    for (const auto& v : data_)
        if (v != 0) return false;
    return true;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

QMatrix QMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("QMatrix::block out of range");
    QMatrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void QMatrix::set_block(std::size_t r0, std::size_t c0, const QMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionError("QMatrix::set_block out of range");
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("QMatrix: shape mismatch in +");
    QMatrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("QMatrix: shape mismatch in -");
    QMatrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("QMatrix: shape mismatch in *");
    QMatrix p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(r, k);
            if (a == 0) continue;
            for (std::size_t c = 0; c < o.cols_; ++c)
                if (o(k, c) != 0) p(r, c) += a * o(k, c);
        }
    return p;
}

QMatrix QMatrix::operator*(const Rational& s) const {
    QMatrix p(*this);
    for (auto& v : p.data_) v *= s;
    return p;
}

QMatrix QMatrix::operator-() const { return *this * Rational(-1); }

QMatrix hstack(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ");
    QMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

QMatrix vstack(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ");
    QMatrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

QMatrix block_diagonal(const std::vector<QMatrix>& blocks) {
    std::size_t nr = 0, nc = 0;
    for (const auto& b : blocks) {
        nr += b.rows();
        nc += b.cols();
    }
    QMatrix m(nr, nc);
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        m.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return m;
}

namespace {

// Row-sparse elimination: each pivot row is applied only on its nonzero
// columns, which keeps the structured systems built by the pencil and
// trajectory code cheap.
struct Eliminator {
    std::vector<std::vector<Rational>> rows;
    std::size_t ncols;

    explicit Eliminator(const QMatrix& m) : rows(m.rows()), ncols(m.cols()) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            rows[r].assign(m.entries().begin() + static_cast<std::ptrdiff_t>(r * ncols),
                           m.entries().begin() + static_cast<std::ptrdiff_t>((r + 1) * ncols));
    }

    std::vector<std::size_t> run(std::size_t limit_cols) {
        std::vector<std::size_t> pivots;
        std::size_t prow = 0;
        std::vector<std::size_t> nz;
        Rational f;
        for (std::size_t c = 0; c < limit_cols && prow < rows.size(); ++c) {
            std::size_t best = rows.size();
            for (std::size_t r = prow; r < rows.size(); ++r)
                if (rows[r][c] != 0) {
                    best = r;
                    break;
                }
            if (best == rows.size()) continue;
            std::swap(rows[prow], rows[best]);
            auto& pr = rows[prow];
            if (pr[c] != 1) {
                Rational inv = 1 / pr[c];
                for (std::size_t k = c; k < ncols; ++k)
                    if (pr[k] != 0) pr[k] *= inv;
            }
            nz.clear();
            for (std::size_t k = c; k < ncols; ++k)
                if (pr[k] != 0) nz.push_back(k);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == prow) continue;
                auto& row = rows[r];
                if (row[c] == 0) continue;
                f = row[c];
                for (std::size_t k : nz) row[k] -= f * pr[k];
            }
            pivots.push_back(c);
            ++prow;
        }
        return pivots;
    }

    QMatrix matrix() const {
        std::vector<Rational> data;
        data.reserve(rows.size() * ncols);
        for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
        return QMatrix(rows.size(), ncols, std::move(data));
    }
};

}  // namespace

RrefResult rref(const QMatrix& m) {
    Eliminator e(m);
    auto pivots = e.run(m.cols());
    return {e.matrix(), std::move(pivots)};
}

std::size_t rank(const QMatrix& m) {
    if (m.empty()) return 0;
    Eliminator e(m);
    return e.run(m.cols()).size();
}

QMatrix kernel_basis(const QMatrix& m) {
    auto [red, pivots] = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    QMatrix k(n, free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        const std::size_t fc = free_cols[j];
        k(fc, j) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (red(i, fc) != 0) k(pivots[i], j) = -red(i, fc);
    }
    return k;
}

std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b) {
    if (b.rows() != m.rows()) throw DimensionError("solve: right-hand side has wrong row count");
    const std::size_t n = m.cols();
    Eliminator e(hstack(m, b));
    auto pivots = e.run(n);
    // Rows past the pivots must have a zero right-hand side.
    for (std::size_t r = pivots.size(); r < e.rows.size(); ++r)
        for (std::size_t c = n; c < n + b.cols(); ++c)
            if (e.rows[r][c] != 0) return std::nullopt;
    QMatrix x(n, b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t c = 0; c < b.cols(); ++c) x(pivots[i], c) = e.rows[i][n + c];
    return x;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    Eliminator e(hstack(m, QMatrix::identity(n)));
    if (e.run(n).size() != n) return std::nullopt;
    QMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.rows[r][n + c];
    return inv;
}

bool is_invertible(const QMatrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

std::string to_string(const QMatrix& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) os << "; ";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ", ";
            os << m(r, c).get_str();
        }
    }
    os << ']';
    return os.str();
}

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(x & kPrime) + static_cast<std::uint64_t>(x >> 61);
    if (r >= kPrime) r -= kPrime;
    return r;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul_mod(a, a))
        if (e & 1) r = mul_mod(r, a);
    return r;
}

std::uint64_t reduce_mod(const mpz_class& z) {
    mpz_class r = z % mpz_class(static_cast<unsigned long>(kPrime));
    if (r < 0) r += static_cast<unsigned long>(kPrime);
    return r.get_ui();
}

}  // namespace

std::optional<std::size_t> rank_mod_p(const QMatrix& m) {
    static_assert(sizeof(unsigned long) == 8);
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::uint64_t> a(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        const Rational& v = m.entries()[i];
        if (v == 0) continue;
        const std::uint64_t den = reduce_mod(v.get_den());
        if (den == 0) return std::nullopt;
        a[i] = mul_mod(reduce_mod(v.get_num()), pow_mod(den, kPrime - 2));
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t k = c; k < cols; ++k) std::swap(a[piv * cols + k], a[rank * cols + k]);
        const std::uint64_t inv = pow_mod(a[rank * cols + c], kPrime - 2);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            std::uint64_t f = a[r * cols + c];
            if (f == 0) continue;
            f = mul_mod(f, inv);
            for (std::size_t k = c; k < cols; ++k) {
                const std::uint64_t sub = mul_mod(f, a[rank * cols + k]);
                std::uint64_t& x = a[r * cols + k];
                x = x >= sub ? x - sub : x + kPrime - sub;
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace kwm
