#include "kwm/pencil.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace kwm {

Pencil::Pencil(int n, std::vector<QMatrix> k, QMatrix l) : n_(n), k_(std::move(k)), l_(std::move(l)) {
    if (n < 1 || n > kMaxVars) throw std::invalid_argument("Pencil: n out of range");
    if (k_.size() != static_cast<std::size_t>(n)) throw DimensionError("Pencil: need exactly n matrices K_i");
    for (const auto& m : k_)
        if (m.rows() != l_.rows() || m.cols() != l_.cols()) throw DimensionError("Pencil: K_i and L differ in shape");
}

Pencil Pencil::empty(int n) { return Pencil(n, std::vector<QMatrix>(static_cast<std::size_t>(n)), QMatrix()); }

PolyMatrix Pencil::affine_matrix() const {
    PolyMatrix p(n_, dim_y(), dim_x());
    for (std::size_t r = 0; r < dim_y(); ++r)
        for (std::size_t c = 0; c < dim_x(); ++c) {
            std::vector<Term> terms;
            for (int i = 1; i <= n_; ++i)
                if (k(i)(r, c) != 0) terms.push_back({Monomial::var(i), k(i)(r, c)});
            if (l_(r, c) != 0) terms.push_back({Monomial{}, -l_(r, c)});
            p(r, c) = Poly(n_, std::move(terms));
        }
    return p;
}

PolyMatrix Pencil::homogeneous_matrix() const {
    PolyMatrix p(n_, dim_y(), dim_x());
    for (std::size_t r = 0; r < dim_y(); ++r)
        for (std::size_t c = 0; c < dim_x(); ++c) {
            std::vector<Term> terms;
            for (int i = 1; i <= n_; ++i)
                if (k(i)(r, c) != 0) terms.push_back({Monomial::var(i), k(i)(r, c)});
            if (l_(r, c) != 0) terms.push_back({Monomial::var(0), -l_(r, c)});
            p(r, c) = Poly(n_, std::move(terms));
        }
    return p;
}

HomogeneousMap Pencil::homogeneous_map() const {
    GradedFreeModule src{Ring::T, n_, std::vector<int>(dim_x(), -1)};
    GradedFreeModule tgt = GradedFreeModule::free(Ring::T, n_, dim_y());
    return {src, tgt, homogeneous_matrix()};
}

Pencil Pencil::conjugate(const QMatrix& u, const QMatrix& v) const {
    auto vinv = inverse(v);
    if (!vinv || !is_invertible(u)) throw std::invalid_argument("Pencil::conjugate: U and V must be invertible");
    std::vector<QMatrix> k2;
    for (const auto& m : k_) k2.push_back(u * m * *vinv);
    return Pencil(n_, std::move(k2), u * l_ * *vinv);
}

// ---------------------------------------------------------------- Jordan pencils

std::pair<long long, long long> jordan_dims(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("jordan_dims: need n >= 1 and d >= 0");
    // n d C(n+d, d) / (d+1) = d C(n+d, d+1)
    return {static_cast<long long>(d) * binomial(n + d, d + 1), binomial(n + d, d)};
}

namespace {

// Matrix of tau_var from F^Delta(d) into F^Delta(target_k); coordinates
// that leave Delta(target_k) are dropped.
QMatrix shift_matrix(int n, int d, int target_k, int var) {
    const auto src = delta(n, d);
    MonomialIndex dst(delta(n, target_k));
    QMatrix s(dst.size(), src.size());
    for (std::size_t p = 0; p < src.size(); ++p)
        if (auto row = dst.find(src[p] * Monomial::var(var))) s(*row, p) = 1;
    return s;
}

QMatrix embedding_matrix(int n, int d, int target_k) {
    const auto src = delta(n, d);
    MonomialIndex dst(delta(n, target_k));
    QMatrix e(dst.size(), src.size());
    for (std::size_t p = 0; p < src.size(); ++p) e(dst.at(src[p]), p) = 1;
    return e;
}

}  // namespace

JordanPencil jordan_pencil(int n, int d) {
    if (n < 1 || n > kMaxVars || d < 0) throw std::invalid_argument("jordan_pencil: need 1 <= n <= 9 and d >= 0");
    const auto basis = delta(n, d);
    const std::size_t N = basis.size();
    // Constraint: the order-(d+1) part of tau_1 x_1 + ... + tau_n x_n vanishes.
    std::vector<Monomial> top;
    for (const auto& m : delta(n, d + 1))
        if (m.order() == d + 1) top.push_back(m);
    MonomialIndex top_idx(top);
    QMatrix c(top.size(), static_cast<std::size_t>(n) * N);
    for (int i = 1; i <= n; ++i)
        for (std::size_t p = 0; p < N; ++p)
            if (auto row = top_idx.find(basis[p] * Monomial::var(i)))
                c(*row, static_cast<std::size_t>(i - 1) * N + p) = 1;
    QMatrix x = kernel_basis(c);
    const std::size_t dim_x = x.cols();

    std::vector<QMatrix> k;
    QMatrix j(N, dim_x);
    for (int i = 1; i <= n; ++i) {
        QMatrix ii = x.block(static_cast<std::size_t>(i - 1) * N, 0, N, dim_x);
        j = j + shift_matrix(n, d, d, i) * ii;
        k.push_back(std::move(ii));
    }
    return {n, d, x, Pencil(n, std::move(k), std::move(j))};
}

bool verify_sequence4(int n, int d) {
    const JordanPencil jp = jordan_pencil(n, d);
    const std::size_t N = static_cast<std::size_t>(binomial(n + d, d));
    const std::size_t N1 = static_cast<std::size_t>(binomial(n + d + 1, d + 1));
    const std::size_t dim_x = jp.pencil.dim_x();
    const std::size_t blocks = static_cast<std::size_t>(n) + 1;

    QMatrix first(blocks * N, dim_x);
    first.set_block(0, 0, jp.pencil.l());
    for (int i = 1; i <= n; ++i) first.set_block(static_cast<std::size_t>(i) * N, 0, jp.pencil.k(i));

    QMatrix second(N1, blocks * N);
    second.set_block(0, 0, -embedding_matrix(n, d, d + 1));
    for (int i = 1; i <= n; ++i) second.set_block(0, static_cast<std::size_t>(i) * N, shift_matrix(n, d, d + 1, i));

    if (!(second * first).is_zero()) return false;
    if (rank(first) != dim_x) return false;
    const std::size_t r2 = rank(second);
    if (r2 != N1) return false;
    return blocks * N - r2 == dim_x && static_cast<long long>(dim_x) == jordan_dims(n, d).first;
}

DualSequenceReport dual_sequence_report(int n, int d, int max_degree) {
    const JordanPencil jp = jordan_pencil(n, d);
    const auto basis = delta(n, d);
    const std::size_t N = basis.size();

    PolyMatrix h(n, N, 1);
    for (std::size_t p = 0; p < N; ++p) {
        Monomial m = basis[p];
        m.exp[0] = static_cast<std::uint16_t>(d - m.order());
        h(p, 0) = Poly::monomial(n, m);
    }
    const HomogeneousMap first({Ring::T, n, {-d}}, GradedFreeModule::free(Ring::T, n, N), h);
    const HomogeneousMap second = jp.pencil.homogeneous_map().dual();

    auto check = [&](const HomogeneousMap& f, const HomogeneousMap& g) {
        if (!(g.matrix * f.matrix).is_zero()) return false;
        for (int j = 0; j <= max_degree; ++j) {
            const QMatrix a = component_matrix(f, j);
            const QMatrix b = component_matrix(g, j);
            const std::size_t ra = rank(a);
            if (ra != a.cols()) return false;              // injective
            if (b.cols() - rank(b) != ra) return false;    // kernel = image
        }
        return true;
    };
    return {check(first, second), check(first.to_s(), second.to_s())};
}

bool verify_dual_sequence(int n, int d, int max_degree) {
    const DualSequenceReport r = dual_sequence_report(n, d, max_degree);
    return r.over_t && r.over_s;
}

Pencil direct_sum(const std::vector<Pencil>& pencils) {
    if (pencils.empty()) throw std::invalid_argument("direct_sum: no pencils");
    const int n = pencils.front().n();
    std::vector<QMatrix> k;
    std::vector<QMatrix> ls;
    for (const auto& p : pencils) {
        if (p.n() != n) throw std::invalid_argument("direct_sum: pencils have different n");
        ls.push_back(p.l());
    }
    for (int i = 1; i <= n; ++i) {
        std::vector<QMatrix> ks;
        for (const auto& p : pencils) ks.push_back(p.k(i));
        k.push_back(block_diagonal(ks));
    }
    return Pencil(n, std::move(k), block_diagonal(ls));
}

Pencil kw_pencil(int n, const std::vector<int>& blocks) {
    if (blocks.empty()) return Pencil::empty(n);
    std::vector<Pencil> parts;
    for (int d : blocks) parts.push_back(jordan_pencil(n, d).pencil);
    return direct_sum(parts);
}

KroneckerIndices::KroneckerIndices(std::vector<int> v) : values(std::move(v)) {
    std::sort(values.begin(), values.end(), std::greater<>());
}

std::string KroneckerIndices::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(values[i]);
    }
    return s + ")";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Similar: return "SIMILAR";
        case Verdict::NotSimilar: return "NOT_SIMILAR";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

// ---------------------------------------------------------------- similarity

bool verify_witness(const Pencil& from, const Pencil& to, const SimilarityWitness& w) {
    if (w.u.rows() != to.dim_y() || w.u.cols() != from.dim_y()) return false;
    if (w.v.rows() != to.dim_x() || w.v.cols() != from.dim_x()) return false;
    if (!is_invertible(w.u) || !is_invertible(w.v)) return false;
    for (int i = 1; i <= from.n(); ++i)
        if (!(to.k(i) * w.v == w.u * from.k(i))) return false;
    return to.l() * w.v == w.u * from.l();
}

namespace {

std::vector<QMatrix> stacked_parts(const Pencil& p) {
    std::vector<QMatrix> out = p.k();
    out.push_back(p.l());
    return out;
}

// Unknown layout: U row-major (my x my), then V row-major (mx x mx).
SimilarityResult similarity_search(const Pencil& from, const Pencil& to, const QMatrix* from_m, const QMatrix* to_m,
                                   const SimilarityOptions& opts) {
    SimilarityResult res;
    if (from.n() != to.n()) throw std::invalid_argument("similar: pencils have different n");
    if (from.dim_x() != to.dim_x() || from.dim_y() != to.dim_y()) {
        res.verdict = Verdict::NotSimilar;
        res.reason = "dimension mismatch";
        return res;
    }
    const std::size_t my = from.dim_y(), mx = from.dim_x();
    const std::size_t q = from_m ? from_m->cols() : 0;
    const std::size_t nu = my * my, nv = mx * mx, nz = nu + nv;
    auto ui = [&](std::size_t a, std::size_t c) { return a * my + c; };
    auto vi = [&](std::size_t c, std::size_t b) { return nu + c * mx + b; };

    if (from_m && (from_m->rows() != my || to_m->rows() != my || to_m->cols() != q))
        throw DimensionError("similar: external maps have inconsistent shapes");
    if (nz == 0) {
        if (from_m && !to_m->is_zero()) {
            res.verdict = Verdict::NotSimilar;
            res.reason = "external maps differ";
            return res;
        }
        res.verdict = Verdict::Similar;
        res.witness = SimilarityWitness{QMatrix(0, 0), QMatrix(0, 0)};
        res.reason = "empty pencils";
        return res;
    }

    const std::vector<QMatrix> kf = stacked_parts(from), kt = stacked_parts(to);
    QMatrix stacked_to;
    for (const auto& m : kt) stacked_to = stacked_to.rows() == 0 ? m : vstack(stacked_to, m);
    const bool reduce = mx > 0 && rank(stacked_to) == mx;

    // Unknowns are the entries of U, plus those of V when V cannot be
    // eliminated.
    const std::size_t nunk = reduce ? nu : nz;
    QMatrix left_kernel, left_inverse;
    std::size_t nrows = my * q;
    if (reduce) {
        // [K';L'] V = (I (x) U)[K;L] is solvable iff N (I (x) U)[K;L] = 0 for
        // the left kernel N, and then V = P (I (x) U)[K;L].
        left_kernel = kernel_basis(stacked_to.transpose()).transpose();
        const QMatrix gram = stacked_to.transpose() * stacked_to;
        left_inverse = *inverse(gram) * stacked_to.transpose();
        nrows += left_kernel.rows() * mx;
    } else {
        nrows += kf.size() * my * mx;
    }
    QMatrix a(nrows, nunk);
    QMatrix rhs(nrows, 1);
    std::size_t row = 0;
    if (reduce) {
        for (std::size_t i = 0; i < left_kernel.rows(); ++i)
            for (std::size_t b = 0; b < mx; ++b, ++row)
                for (std::size_t k = 0; k < kf.size(); ++k)
                    for (std::size_t r = 0; r < my; ++r) {
                        const Rational& nk = left_kernel(i, k * my + r);
                        if (nk == 0) continue;
                        for (std::size_t c = 0; c < my; ++c)
                            if (kf[k](c, b) != 0) a(row, ui(r, c)) += nk * kf[k](c, b);
                    }
    } else {
        for (std::size_t k = 0; k < kf.size(); ++k)
            // kt V - U kf = 0
            for (std::size_t r = 0; r < my; ++r)
                for (std::size_t b = 0; b < mx; ++b, ++row) {
                    for (std::size_t c = 0; c < mx; ++c)
                        if (kt[k](r, c) != 0) a(row, vi(c, b)) += kt[k](r, c);
                    for (std::size_t c = 0; c < my; ++c)
                        if (kf[k](c, b) != 0) a(row, ui(r, c)) -= kf[k](c, b);
                }
    }
    if (from_m) {
        for (std::size_t r = 0; r < my; ++r)
            for (std::size_t b = 0; b < q; ++b, ++row) {
                for (std::size_t c = 0; c < my; ++c)
                    if ((*from_m)(c, b) != 0) a(row, ui(r, c)) = (*from_m)(c, b);
                rhs(row, 0) = (*to_m)(r, b);
            }
    }

    auto solved = solve(a, rhs);
    if (!solved) {
        res.verdict = Verdict::NotSimilar;
        res.reason = "intertwining constraints are inconsistent";
        return res;
    }
    QMatrix particular = *solved;
    QMatrix kernel = kernel_basis(a);
    if (reduce) {
        // V as a linear function of U: V(c,b) = sum P(c, k my + r) U(r,c') F_k(c',b).
        QMatrix g(nv, nu);
        for (std::size_t c = 0; c < mx; ++c)
            for (std::size_t k = 0; k < kf.size(); ++k)
                for (std::size_t r = 0; r < my; ++r) {
                    const Rational& pk = left_inverse(c, k * my + r);
                    if (pk == 0) continue;
                    for (std::size_t cc = 0; cc < my; ++cc)
                        for (std::size_t b = 0; b < mx; ++b)
                            if (kf[k](cc, b) != 0) g(c * mx + b, ui(r, cc)) += pk * kf[k](cc, b);
                }
        particular = vstack(particular, g * particular);
        kernel = vstack(kernel, g * kernel);
    }
    res.solution_dim = kernel.cols();

    // Sound obstruction: a row or column of U or V that vanishes on the
    // whole affine solution space forces singularity.
    auto coord_always_zero = [&](std::size_t idx) {
        if (particular(idx, 0) != 0) return false;
        for (std::size_t c = 0; c < kernel.cols(); ++c)
            if (kernel(idx, c) != 0) return false;
        return true;
    };
    auto line_zero = [&](std::size_t dim, auto index_of) {
        for (std::size_t line = 0; line < dim; ++line) {
            bool all_zero = true;
            for (std::size_t k = 0; k < dim && all_zero; ++k) all_zero = coord_always_zero(index_of(line, k));
            if (all_zero) return true;
        }
        return false;
    };
    if (line_zero(my, [&](std::size_t l, std::size_t k) { return ui(l, k); }) ||
        line_zero(my, [&](std::size_t l, std::size_t k) { return ui(k, l); }) ||
        line_zero(mx, [&](std::size_t l, std::size_t k) { return vi(l, k); }) ||
        line_zero(mx, [&](std::size_t l, std::size_t k) { return vi(k, l); })) {
        res.verdict = Verdict::NotSimilar;
        res.reason = "every solution has a zero row or column";
        return res;
    }

    std::mt19937_64 rng(opts.seed);
    const long long range = std::max(1, opts.trials);
    auto coeff = [&] {
        return static_cast<long long>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
    };
    for (int t = 0; t < std::max(1, opts.trials); ++t) {
        QMatrix z = particular;
        for (std::size_t c = 0; c < kernel.cols(); ++c) {
            const Rational w(static_cast<long>(coeff()));
            if (w == 0) continue;
            for (std::size_t r = 0; r < nz; ++r)
                if (kernel(r, c) != 0) z(r, 0) += w * kernel(r, c);
        }
        QMatrix u(my, my), v(mx, mx);
        for (std::size_t r = 0; r < my; ++r)
            for (std::size_t c = 0; c < my; ++c) u(r, c) = z(ui(r, c), 0);
        for (std::size_t r = 0; r < mx; ++r)
            for (std::size_t c = 0; c < mx; ++c) v(r, c) = z(vi(r, c), 0);
        if (!is_invertible(u) || !is_invertible(v)) continue;
        SimilarityWitness w{std::move(u), std::move(v)};
        if (!verify_witness(from, to, w)) throw std::logic_error("similar: witness failed verification");
        if (from_m && !(w.u * *from_m == *to_m)) throw std::logic_error("similar: witness fails M' = U M");
        res.verdict = Verdict::Similar;
        res.witness = std::move(w);
        res.reason = "invertible witness found in trial " + std::to_string(t);
        return res;
    }
    res.verdict = Verdict::Inconclusive;
    res.reason = "no invertible element found in " + std::to_string(opts.trials) + " trials";
    return res;
}

}  // namespace

SimilarityResult similar(const Pencil& from, const Pencil& to, const SimilarityOptions& opts) {
    return similarity_search(from, to, nullptr, nullptr, opts);
}

SimilarityResult similar_with_external(const Pencil& from, const QMatrix& from_m, const Pencil& to,
                                       const QMatrix& to_m, const SimilarityOptions& opts) {
    return similarity_search(from, to, &from_m, &to_m, opts);
}

// ---------------------------------------------------------------- indices

int index_bound(const Pencil& p) {
    int d = 0;
    while (binomial(p.n() + d + 1, d + 1) <= static_cast<long long>(p.dim_y())) ++d;
    return d;
}

namespace {

IndexExtraction extract_with(const Pencil& p, int dmax, const SimilarityOptions& opts, RankMode mode) {
    IndexExtraction out;
    const int n = p.n();
    std::vector<int> degrees;
    for (int j = 0; j <= dmax; ++j) degrees.push_back(j);
    const HomogeneousMap map = p.homogeneous_map();
    out.hilbert_coker = hilbert_function_coker(map, degrees, mode);
    out.hilbert_kernel = hilbert_function_ker(map.dual(), degrees, mode);

    // sum_{d <= j} m_d C(n + j - d, n) = H_ker(j): unit lower-triangular.
    for (int j = 0; j <= dmax; ++j) {
        long long v = out.hilbert_kernel[static_cast<std::size_t>(j)];
        for (int d = 0; d < j; ++d) v -= out.multiplicities[static_cast<std::size_t>(d)] * binomial(n + j - d, n);
        out.multiplicities.push_back(v);
    }
    std::vector<int> idx;
    for (int d = 0; d <= dmax; ++d) {
        const long long m = out.multiplicities[static_cast<std::size_t>(d)];
        if (m < 0) {
            out.reason = "negative multiplicity for index " + std::to_string(d);
            return out;
        }
        for (long long k = 0; k < m; ++k) idx.push_back(d);
    }
    out.indices = KroneckerIndices(idx);
    long long dx = 0, dy = 0;
    for (int d : idx) {
        auto [a, b] = jordan_dims(n, d);
        dx += a;
        dy += b;
    }
    if (dx != static_cast<long long>(p.dim_x()) || dy != static_cast<long long>(p.dim_y())) {
        out.reason = "indices up to " + std::to_string(dmax) + " do not account for the pencil dimensions";
        return out;
    }
    const SimilarityResult sim = similar(p, kw_pencil(n, out.indices.values), opts);
    if (sim.verdict != Verdict::Similar) {
        out.inconclusive = sim.verdict == Verdict::Inconclusive;
        out.reason = "similarity with KW" + out.indices.to_string() + " not established: " + sim.reason;
        return out;
    }
    out.is_kw = true;
    out.witness = sim.witness;
    out.reason = "verified by similarity";
    return out;
}

}  // namespace

IndexExtraction extract_indices(const Pencil& p, int dmax, const SimilarityOptions& opts) {
    if (dmax < 0) throw std::invalid_argument("extract_indices: dmax must be nonnegative");
    // Modular ranks propose the indices; a failed proposal is redone exactly.
    IndexExtraction fast = extract_with(p, dmax, opts, RankMode::Modular);
    if (fast.is_kw) {
        // The similarity certifies the indices; the Hilbert functions of
        // KW(d) then follow in closed form.
        const int n = p.n();
        for (int j = 0; j <= dmax; ++j) {
            long long coker = 0, ker = 0;
            for (int d : fast.indices.values) {
                coker += binomial(n + d + j, n);
                ker += binomial(n + j - d, n);
            }
            fast.hilbert_coker[static_cast<std::size_t>(j)] = coker;
            fast.hilbert_kernel[static_cast<std::size_t>(j)] = ker;
        }
        return fast;
    }
    return extract_with(p, dmax, opts, RankMode::Exact);
}

}  // namespace kwm
