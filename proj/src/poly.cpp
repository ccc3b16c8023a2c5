#include "kwm/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kwm {

// ---------------------------------------------------------------- monomials

int Monomial::degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exp.size(); ++i)
        if (exp[i] > other.exp[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial m;
    for (std::size_t i = 0; i < exp.size(); ++i) m.exp[i] = static_cast<std::uint16_t>(exp[i] + o.exp[i]);
    return m;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial m;
    for (std::size_t i = 0; i < exp.size(); ++i) m.exp[i] = static_cast<std::uint16_t>(exp[i] - o.exp[i]);
    return m;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < a.exp.size(); ++i) m.exp[i] = std::max(a.exp[i], b.exp[i]);
    return m;
}

Monomial Monomial::var(int slot, int power) {
    Monomial m;
    m.exp.at(static_cast<std::size_t>(slot)) = static_cast<std::uint16_t>(power);
    return m;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db ? 1 : -1;
    // s0 is the smallest variable, then s9, ..., s1.
    if (a.exp[0] != b.exp[0]) return a.exp[0] < b.exp[0] ? 1 : -1;
    for (int i = kMaxVars; i >= 1; --i)
        if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
    return 0;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(int n) : n_(n) {
    if (n < 0 || n > kMaxVars) throw std::invalid_argument("Poly: variable count out of range");
}

Poly::Poly(int n, std::vector<Term> terms) : Poly(n) {
    terms_ = std::move(terms);
    normalize();
}

Poly Poly::constant(int n, const Rational& c) { return monomial(n, Monomial{}, c); }

Poly Poly::variable(int n, int slot) {
    if (slot < 0 || slot > n) throw std::invalid_argument("Poly::variable: slot out of range");
    return monomial(n, Monomial::var(slot), 1);
}

Poly Poly::monomial(int n, const Monomial& m, const Rational& c) {
    Poly p(n);
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grevlex_compare(a.mono, b.mono) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(out);
}

int Poly::degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
}

bool Poly::uses_s0() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mono.exp[0] > 0; });
}

bool Poly::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = terms_.front().mono.degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const Term& t) { return t.mono.degree() == d; });
}

Rational Poly::coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
        if (t.mono == m) return t.coeff;
    return 0;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int cmp;
        if (i == a.size())
            cmp = -1;
        else if (j == b.size())
            cmp = 1;
        else
            cmp = grevlex_compare(a[i].mono, b[j].mono);
        if (cmp > 0) {
            out.push_back(a[i++]);
        } else if (cmp < 0) {
            out.push_back({b[j].mono, subtract ? Rational(-b[j].coeff) : b[j].coeff});
            ++j;
        } else {
            Rational c = subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
            if (c != 0) out.push_back({a[i].mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

int common_n(const Poly& a, const Poly& b) { return std::max(a.n(), b.n()); }

}  // namespace

Poly Poly::operator+(const Poly& o) const {
    Poly p(common_n(*this, o));
    p.terms_ = merge(terms_, o.terms_, false);
    return p;
}

Poly Poly::operator-(const Poly& o) const {
    Poly p(common_n(*this, o));
    p.terms_ = merge(terms_, o.terms_, true);
    return p;
}

Poly Poly::operator-() const { return *this * Rational(-1); }

Poly Poly::operator*(const Poly& o) const {
    std::map<Monomial, Rational, GrevlexGreater> acc;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) acc[a.mono * b.mono] += a.coeff * b.coeff;
    Poly p(common_n(*this, o));
    for (auto& [m, c] : acc)
        if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::operator*(const Rational& c) const {
    Poly p(n_);
    if (c == 0) return p;
    p.terms_ = terms_;
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

Poly Poly::mul_term(const Monomial& m, const Rational& c) const {
    Poly p(n_);
    if (c == 0) return p;
    p.terms_.reserve(terms_.size());
    // Monomial orders are multiplicative, so the sort order is preserved.
    for (const auto& t : terms_) p.terms_.push_back({t.mono * m, t.coeff * c});
    return p;
}

Poly Poly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
    Poly r = constant(n_, 1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

Poly Poly::substitute_s0(const Rational& value) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        Monomial m = t.mono;
        Rational c = t.coeff;
        for (int i = 0; i < m.exp[0]; ++i) c *= value;
        m.exp[0] = 0;
        if (c != 0) out.push_back({m, c});
    }
    return Poly(n_, std::move(out));
}

Poly Poly::derivative(int slot) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        const auto e = t.mono.exp.at(static_cast<std::size_t>(slot));
        if (e == 0) continue;
        Monomial m = t.mono;
        m.exp[static_cast<std::size_t>(slot)] = static_cast<std::uint16_t>(e - 1);
        out.push_back({m, t.coeff * e});
    }
    return Poly(n_, std::move(out));
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

std::string Poly::to_string(char symbol) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coeff;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        std::string mono;
        for (int i = 0; i <= kMaxVars; ++i) {
            const auto e = t.mono.exp[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (!mono.empty()) mono += '*';
            mono += (i == 0 ? 's' : symbol);
            mono += std::to_string(i);
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty())
            os << c.get_str();
        else if (c == 1)
            os << mono;
        else
            os << c.get_str() << '*' << mono;
    }
    return os.str();
}

// ---------------------------------------------------------------- bases

long long binomial(long long m, long long k) {
    if (k < 0 || m < 0 || k > m) return 0;
    k = std::min(k, m - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (m - k + i) / i;
    return r;
}

namespace {

// Exponent tuples over `slots` with the given sum, lexicographically
// decreasing in the listed slot order.
void enumerate(const std::vector<int>& slots, std::size_t pos, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
    if (pos + 1 == slots.size()) {
        cur.exp[static_cast<std::size_t>(slots[pos])] = static_cast<std::uint16_t>(remaining);
        out.push_back(cur);
        cur.exp[static_cast<std::size_t>(slots[pos])] = 0;
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur.exp[static_cast<std::size_t>(slots[pos])] = static_cast<std::uint16_t>(e);
        enumerate(slots, pos + 1, remaining - e, cur, out);
    }
    cur.exp[static_cast<std::size_t>(slots[pos])] = 0;
}

}  // namespace

std::vector<MultiIndex> delta(int n, int k) {
    std::vector<MultiIndex> out;
    if (k < 0) return out;
    if (n == 0) {
        out.push_back(Monomial{});
        return out;
    }
    std::vector<int> slots;
    for (int i = 1; i <= n; ++i) slots.push_back(i);
    Monomial cur;
    for (int d = 0; d <= k; ++d) enumerate(slots, 0, d, cur, out);
    return out;
}

std::vector<Monomial> monomials_of_degree(int n, int d, bool with_s0) {
    std::vector<Monomial> out;
    if (d < 0) return out;
    std::vector<int> slots;
    for (int i = 1; i <= n; ++i) slots.push_back(i);
    if (with_s0) slots.push_back(0);
    if (slots.empty()) {
        if (d == 0) out.push_back(Monomial{});
        return out;
    }
    Monomial cur;
    enumerate(slots, 0, d, cur, out);
    std::sort(out.begin(), out.end(), GrevlexGreater{});
    return out;
}

MonomialIndex::MonomialIndex(std::vector<Monomial> basis) : basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
}

std::optional<std::size_t> MonomialIndex::find(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t MonomialIndex::at(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw std::out_of_range("MonomialIndex: monomial not in basis");
    return it->second;
}

// ---------------------------------------------------------------- phi

CoeffVector CoeffVector::zero(int n, int k) {
    return {n, k, std::vector<Rational>(static_cast<std::size_t>(binomial(n + k, k)))};
}

Poly phi(const CoeffVector& a) {
    const auto basis = delta(a.n, a.k);
    if (basis.size() != a.values.size()) throw DimensionError("phi: coefficient vector has wrong length");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (a.values[i] != 0) terms.push_back({basis[i], a.values[i]});
    return Poly(a.n, std::move(terms));
}

CoeffVector phi_inv(const Poly& f, int k) {
    if (f.uses_s0()) throw std::invalid_argument("phi_inv: polynomial uses s0");
    if (f.degree() > k) throw std::invalid_argument("phi_inv: degree exceeds bound");
    MonomialIndex idx(delta(f.n(), k));
    CoeffVector a = CoeffVector::zero(f.n(), k);
    for (const auto& t : f.terms()) a.values[idx.at(t.mono)] = t.coeff;
    return a;
}

CoeffVector forward_shift(const CoeffVector& a, int var) {
    if (var < 1 || var > a.n) throw std::invalid_argument("forward_shift: direction out of range");
    const auto src = delta(a.n, a.k);
    MonomialIndex dst(delta(a.n, a.k + 1));
    CoeffVector out = CoeffVector::zero(a.n, a.k + 1);
    for (std::size_t i = 0; i < src.size(); ++i)
        out.values[dst.at(src[i] * Monomial::var(var))] = a.values[i];
    return out;
}

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(int n, std::size_t rows, std::size_t cols)
    : n_(n), rows_(rows), cols_(cols), entries_(rows * cols, Poly(n)) {}

PolyMatrix::PolyMatrix(int n, std::size_t rows, std::size_t cols, std::vector<Poly> entries)
    : n_(n), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) throw DimensionError("PolyMatrix: entry count does not match shape");
}

PolyMatrix PolyMatrix::from_rows(int n, const std::vector<std::vector<Poly>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<Poly> e;
    for (const auto& r : rows) {
        if (r.size() != cols) throw DimensionError("PolyMatrix: ragged rows");
        e.insert(e.end(), r.begin(), r.end());
    }
    return PolyMatrix(n, rows.size(), cols, std::move(e));
}

PolyMatrix PolyMatrix::from_qmatrix(int n, const QMatrix& m) {
    PolyMatrix p(n, m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) p(r, c) = Poly::constant(n, m(r, c));
    return p;
}

std::vector<Poly> PolyMatrix::row(std::size_t r) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

int PolyMatrix::row_degree(std::size_t r) const {
    int d = -1;
    for (std::size_t c = 0; c < cols_; ++c) d = std::max(d, (*this)(r, c).degree());
    return d;
}

std::vector<int> PolyMatrix::exact_row_degrees() const {
    std::vector<int> d(rows_);
    for (std::size_t r = 0; r < rows_; ++r) d[r] = row_degree(r);
    return d;
}

bool PolyMatrix::is_row_zero(std::size_t r) const { return row_degree(r) < 0; }

bool PolyMatrix::uses_s0() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const Poly& p) { return p.uses_s0(); });
}

bool PolyMatrix::is_row_homogeneous(const std::vector<int>& degs) const {
    if (degs.size() != rows_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            for (const auto& t : (*this)(r, c).terms())
                if (t.mono.degree() != degs[r]) return false;
    return true;
}

PolyMatrix PolyMatrix::with_row_degrees(std::vector<int> degs) const {
    if (degs.size() != rows_) throw DimensionError("with_row_degrees: wrong number of degrees");
    for (std::size_t r = 0; r < rows_; ++r) {
        const int d = row_degree(r);
        if (d < 0) throw std::invalid_argument("with_row_degrees: zero row " + std::to_string(r));
        if (d > degs[r]) throw std::invalid_argument("with_row_degrees: row " + std::to_string(r) +
                                                     " exceeds its assigned degree");
    }
    PolyMatrix m(*this);
    m.row_degrees_ = std::move(degs);
    return m;
}

PolyMatrix PolyMatrix::transpose() const {
    PolyMatrix t(n_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("PolyMatrix: shape mismatch in *");
    PolyMatrix p(std::max(n_, o.n_), rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < o.cols_; ++c) {
            Poly acc(p.n_);
            for (std::size_t k = 0; k < cols_; ++k)
                if (!(*this)(r, k).is_zero() && !o(k, c).is_zero()) acc += (*this)(r, k) * o(k, c);
            p(r, c) = std::move(acc);
        }
    return p;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("PolyMatrix: shape mismatch in +");
    PolyMatrix p(std::max(n_, o.n_), rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) p.entries_[i] = entries_[i] + o.entries_[i];
    return p;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("PolyMatrix: shape mismatch in -");
    PolyMatrix p(std::max(n_, o.n_), rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) p.entries_[i] = entries_[i] - o.entries_[i];
    return p;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

bool PolyMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Poly& p) { return p.is_zero(); });
}

std::string PolyMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c) os << ", ";
            os << (*this)(r, c).to_string();
        }
        os << '\n';
    }
    return os.str();
}

PolyMatrix homogenize(const PolyMatrix& r, const std::vector<int>& a) {
    if (a.size() != r.rows()) throw DimensionError("homogenize: degree vector has wrong length");
    if (r.uses_s0()) throw std::invalid_argument("homogenize: input already uses s0");
    PolyMatrix h(r.n(), r.rows(), r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i) {
        if (r.row_degree(i) > a[i])
            throw std::invalid_argument("homogenize: row " + std::to_string(i) + " has degree above " +
                                        std::to_string(a[i]));
        for (std::size_t j = 0; j < r.cols(); ++j) {
            std::vector<Term> terms;
            for (const auto& t : r(i, j).terms()) {
                Monomial m = t.mono;
                m.exp[0] = static_cast<std::uint16_t>(a[i] - m.degree());
                terms.push_back({m, t.coeff});
            }
            h(i, j) = Poly(r.n(), std::move(terms));
        }
    }
    return h;
}

namespace {

PolyMatrix substitute_all(const PolyMatrix& q, const Rational& v) {
    PolyMatrix out(q.n(), q.rows(), q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j) out(i, j) = q(i, j).substitute_s0(v);
    return out;
}

}  // namespace

PolyMatrix dehomogenize(const PolyMatrix& q) { return substitute_all(q, 1); }
PolyMatrix substitute_s0_zero(const PolyMatrix& q) { return substitute_all(q, 0); }

// ---------------------------------------------------------------- trajectories

Trajectory Trajectory::zero(int n, std::size_t q) { return {n, std::vector<Poly>(q, Poly(n))}; }

int Trajectory::degree() const {
    int d = -1;
    for (const auto& c : components) d = std::max(d, c.degree());
    return d;
}

bool Trajectory::is_zero() const {
    return std::all_of(components.begin(), components.end(), [](const Poly& p) { return p.is_zero(); });
}

std::string Trajectory::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i) s += ", ";
        s += components[i].to_string('t');
    }
    return s + ")";
}

Poly apply_operator(const Poly& op, const Poly& w) {
    Poly out(w.n());
    for (const auto& t : op.terms()) {
        if (t.mono.exp[0] != 0) throw std::invalid_argument("apply_operator: operator uses s0");
        Poly d = w;
        for (int slot = 1; slot <= kMaxVars && !d.is_zero(); ++slot)
            for (int k = 0; k < t.mono.exp[static_cast<std::size_t>(slot)] && !d.is_zero(); ++k)
                d = d.derivative(slot);
        out += d * t.coeff;
    }
    return out;
}

Trajectory apply_diffop(const PolyMatrix& r, const Trajectory& w) {
    if (w.components.size() != r.cols())
        throw DimensionError("apply_diffop: trajectory has " + std::to_string(w.components.size()) +
                             " components, operator has " + std::to_string(r.cols()) + " columns");
    Trajectory out = Trajectory::zero(w.n, r.rows());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (!r(i, j).is_zero()) out.components[i] += apply_operator(r(i, j), w.components[j]);
    return out;
}

}  // namespace kwm
