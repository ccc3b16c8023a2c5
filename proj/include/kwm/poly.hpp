#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kwm/exactq.hpp"

namespace kwm {

/// Largest supported n. Variables are s0 (homogenizing) and s1..s9.
inline constexpr int kMaxVars = 9;

/// Exponent vector over s0, s1, ..., s9. Slot 0 is s0. A multi-index of the
/// ring S is a monomial whose s0 slot is zero.
struct Monomial {
    std::array<std::uint16_t, kMaxVars + 1> exp{};

    int degree() const;
    /// Order of the multi-index part, i.e. degree without s0.
    int order() const { return degree() - exp[0]; }
    bool divides(const Monomial& other) const;

    Monomial operator*(const Monomial& o) const;
    /// Requires divides(o).
    Monomial operator/(const Monomial& o) const;
    static Monomial lcm(const Monomial& a, const Monomial& b);
    static Monomial var(int slot, int power = 1);

    bool operator==(const Monomial&) const = default;
};

using MultiIndex = Monomial;

/// Graded reverse lexicographic order with s1 > s2 > ... > sn > s0.
/// Returns <0, 0, >0 like strcmp.
int grevlex_compare(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) > 0; }
};

/// Ambient used to index Monomials in maps when the order does not matter.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return a.exp < b.exp; }
};

struct Term {
    Monomial mono;
    Rational coeff;
};

/// Sparse polynomial in s0, s1..sn with terms sorted by decreasing grevlex.
/// The same type carries trajectories in t1..tn (see Trajectory).
class Poly {
public:
    Poly() = default;
    explicit Poly(int n);
    Poly(int n, std::vector<Term> terms);

    static Poly constant(int n, const Rational& c);
    static Poly variable(int n, int slot);
    static Poly monomial(int n, const Monomial& m, const Rational& c = 1);

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    bool uses_s0() const;
    bool is_homogeneous() const;
    const Term& leading() const { return terms_.front(); }
    Rational coefficient(const Monomial& m) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly mul_term(const Monomial& m, const Rational& c) const;
    Poly pow(int e) const;

    /// Substitutes s0 = value.
    Poly substitute_s0(const Rational& value) const;
    /// Partial derivative with respect to slot (1..n).
    Poly derivative(int slot) const;

    bool operator==(const Poly& o) const;

    /// Canonical text, e.g. "s1^2*s2 - 3/2*s0 + 1". `symbol` names the
    /// non-homogenizing variables ('s' or 't').
    std::string to_string(char symbol = 's') const;

private:
    void normalize();
    int n_ = 0;
    std::vector<Term> terms_;
};

/// All multi-indices of order <= k in graded-lex order: by order, then
/// lexicographically decreasing (s1 before s2).
std::vector<MultiIndex> delta(int n, int k);
/// All monomials of exact degree d in s1..sn (plus s0 when with_s0),
/// in decreasing grevlex order.
std::vector<Monomial> monomials_of_degree(int n, int d, bool with_s0);
/// Binomial coefficient as a machine integer; 0 when k < 0 or k > m.
long long binomial(long long m, long long k);

/// Indexes a list of monomials.
class MonomialIndex {
public:
    MonomialIndex() = default;
    explicit MonomialIndex(std::vector<Monomial> basis);
    std::size_t size() const { return basis_.size(); }
    const std::vector<Monomial>& basis() const { return basis_; }
    std::optional<std::size_t> find(const Monomial& m) const;
    std::size_t at(const Monomial& m) const;

private:
    std::vector<Monomial> basis_;
    std::map<Monomial, std::size_t, MonomialLess> index_;
};

/// Function on multi-indices supported in Delta(k), listed in delta(n, k) order.
struct CoeffVector {
    int n = 0;
    int k = 0;
    std::vector<Rational> values;

    static CoeffVector zero(int n, int k);
    bool operator==(const CoeffVector&) const = default;
};

/// a -> sum a(i) s^i.
Poly phi(const CoeffVector& a);
/// Inverse of phi on S_{<=k}. Throws std::invalid_argument if f uses s0 or
/// has degree above k.
CoeffVector phi_inv(const Poly& f, int k);
/// Forward shift in direction `var` (1..n): (tau a)(j) = a(j - e_var).
/// The result lives in Delta(k+1).
CoeffVector forward_shift(const CoeffVector& a, int var);

/// Matrix of polynomials in a common ring, optionally carrying an assigned
/// degree for every row.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(int n, std::size_t rows, std::size_t cols);
    PolyMatrix(int n, std::size_t rows, std::size_t cols, std::vector<Poly> entries);
    static PolyMatrix from_rows(int n, const std::vector<std::vector<Poly>>& rows);
    static PolyMatrix from_qmatrix(int n, const QMatrix& m);

    int n() const { return n_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Poly& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Poly& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    std::vector<Poly> row(std::size_t r) const;

    /// Maximum entry degree in row r; -1 for a zero row.
    int row_degree(std::size_t r) const;
    std::vector<int> exact_row_degrees() const;
    bool is_row_zero(std::size_t r) const;
    bool uses_s0() const;
    /// Every entry in row i is zero or homogeneous of degree degs[i].
    bool is_row_homogeneous(const std::vector<int>& degs) const;

    const std::optional<std::vector<int>>& row_degrees() const { return row_degrees_; }
    /// Attaches an assigned degree per row. Rejects zero rows and rows whose
    /// actual degree exceeds the assignment.
    PolyMatrix with_row_degrees(std::vector<int> degs) const;

    PolyMatrix transpose() const;
    PolyMatrix operator*(const PolyMatrix& o) const;
    PolyMatrix operator+(const PolyMatrix& o) const;
    PolyMatrix operator-(const PolyMatrix& o) const;
    /// Entries (and shape) only; attached row degrees are ignored.
    bool operator==(const PolyMatrix& o) const;
    bool is_zero() const;

    std::string to_string() const;

private:
    int n_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Poly> entries_;
    std::optional<std::vector<int>> row_degrees_;
};

/// Entry (i,j) becomes s0^{a_i} R_ij(s/s0). Requires s0-free input and
/// a_i >= deg(row i).
PolyMatrix homogenize(const PolyMatrix& r, const std::vector<int>& a);
/// Substitutes s0 = 1.
PolyMatrix dehomogenize(const PolyMatrix& q);
/// Substitutes s0 = 0.
PolyMatrix substitute_s0_zero(const PolyMatrix& q);

/// Vector of polynomial signals in t1..tn.
struct Trajectory {
    int n = 0;
    std::vector<Poly> components;

    static Trajectory zero(int n, std::size_t q);
    int degree() const;
    bool is_zero() const;
    bool operator==(const Trajectory& o) const { return n == o.n && components == o.components; }
    std::string to_string() const;
};

/// Applies c * d^alpha to a trajectory polynomial for every term of op.
Poly apply_operator(const Poly& op, const Poly& w);
/// (R(d) w)_i = sum_j R_ij(d) w_j.
Trajectory apply_diffop(const PolyMatrix& r, const Trajectory& w);

}  // namespace kwm
