#include "kwm/kw.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace kwm {

// ---------------------------------------------------------------- ARModel

ARModel::ARModel(PolyMatrix r) : r_(std::move(r)) {
    if (r_.n() < 1 || r_.n() > kMaxVars) throw std::invalid_argument("ARModel: n out of range");
    if (r_.uses_s0()) throw std::invalid_argument("ARModel: entries must not use s0");
    degrees_ = r_.exact_row_degrees();
    for (std::size_t i = 0; i < degrees_.size(); ++i)
        if (degrees_[i] < 0) throw std::invalid_argument("ARModel: row " + std::to_string(i + 1) + " is zero");
}

ARModel ARModel::free_behavior(int n, std::size_t q) { return ARModel(PolyMatrix(n, 0, q)); }

int ARModel::max_degree() const {
    return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

// ---------------------------------------------------------------- KWModel

KWModel::KWModel(Pencil pencil, QMatrix m, std::vector<int> blocks)
    : pencil_(std::move(pencil)), m_(std::move(m)), blocks_(std::move(blocks)) {
    long long dx = 0, dy = 0;
    for (int d : blocks_) {
        auto [a, b] = jordan_dims(pencil_.n(), d);
        dx += a;
        dy += b;
    }
    if (static_cast<std::size_t>(dx) != pencil_.dim_x() || static_cast<std::size_t>(dy) != pencil_.dim_y())
        throw DimensionError("KWModel: pencil dimensions do not match the indices");
    if (m_.rows() != pencil_.dim_y()) throw DimensionError("KWModel: M must have dim Y rows");
}

bool KWModel::is_canonical() const { return pencil_ == kw_pencil(n(), blocks_); }

KWModel model_from_pencil(const Pencil& pencil, const QMatrix& m, int dmax, const SimilarityOptions& opts) {
    IndexExtraction ext = extract_indices(pencil, dmax, opts);
    if (!ext.is_kw) throw NotKwError("not a KW pencil: " + ext.reason);
    return KWModel(pencil, m, ext.indices.values);
}

KWModel canonicalize(const KWModel& model, const SimilarityOptions& opts) {
    if (model.is_canonical()) return model;
    std::vector<int> sorted = model.blocks();
    std::sort(sorted.rbegin(), sorted.rend());
    Pencil target = kw_pencil(model.n(), sorted);
    SimilarityResult r = similar(model.pencil(), target, opts);
    if (r.verdict != Verdict::Similar) throw NotKwError("pencil is not similar to KW" + KroneckerIndices(sorted).to_string());
    return KWModel(target, r.witness->u * model.m(), sorted);
}

// ---------------------------------------------------------------- KW(R) and elimination

KWModel kw_of_ar(const ARModel& r, const std::optional<std::vector<int>>& degrees) {
    std::vector<int> a = degrees.value_or(r.row_degrees());
    if (a.size() != r.p()) throw DimensionError("kw_of_ar: one degree per row required");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < r.row_degrees()[i]) throw std::invalid_argument("kw_of_ar: degree below the row degree");

    const int n = r.n();
    Pencil pencil = a.empty() ? Pencil::empty(n) : kw_pencil(n, a);
    QMatrix m(pencil.dim_y(), r.q());
    std::size_t off = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t size = static_cast<std::size_t>(binomial(n + a[i], a[i]));
        for (std::size_t j = 0; j < r.q(); ++j) {
            CoeffVector cv = phi_inv(r.matrix()(i, j), a[i]);
            for (std::size_t p = 0; p < size; ++p) m(off + p, j) = cv.values[p];
        }
        off += size;
    }
    return KWModel(std::move(pencil), std::move(m), std::move(a));
}

namespace {

struct BlockRange {
    int d;
    std::size_t offset;
    std::size_t size;
};

std::vector<BlockRange> block_ranges(int n, const std::vector<int>& blocks) {
    std::vector<BlockRange> out;
    std::size_t off = 0;
    for (int d : blocks) {
        const auto size = static_cast<std::size_t>(binomial(n + d, d));
        out.push_back({d, off, size});
        off += size;
    }
    return out;
}

// phi of block k of column j of M.
Poly block_poly(const QMatrix& m, const BlockRange& b, std::size_t j, int n) {
    CoeffVector cv{n, b.d, {}};
    for (std::size_t p = 0; p < b.size; ++p) cv.values.push_back(m(b.offset + p, j));
    return phi(cv);
}

}  // namespace

ARModel eliminate(const KWModel& model, const SimilarityOptions& opts) {
    const KWModel c = canonicalize(model, opts);
    const int n = c.n();
    std::vector<std::vector<Poly>> rows;
    for (const auto& b : block_ranges(n, c.blocks())) {
        std::vector<Poly> row;
        bool zero = true;
        for (std::size_t j = 0; j < c.q(); ++j) {
            row.push_back(block_poly(c.m(), b, j, n));
            zero = zero && row.back().is_zero();
        }
        if (!zero) rows.push_back(std::move(row));
    }
    if (rows.empty()) return ARModel::free_behavior(n, c.q());
    return ARModel(PolyMatrix::from_rows(n, rows));
}

// ---------------------------------------------------------------- behaviors

BehaviorHandle behavior_handle(const ARModel& r) {
    GradedFreeModule ambient = GradedFreeModule::free(Ring::S, r.n(), r.q());
    std::vector<ModuleVector> gens;
    for (std::size_t i = 0; i < r.p(); ++i) gens.push_back(r.matrix().row(i));
    return {r.n(), r.q(), module_gb(gens, ambient)};
}

namespace {

// Coordinates (component, t-monomial) of trajectories of degree <= D.
struct TrajectoryCoords {
    int n;
    std::size_t q;
    MonomialIndex monos;

    TrajectoryCoords(int n_, std::size_t q_, int D) : n(n_), q(q_), monos(delta(n_, std::max(D, 0))) {
        if (D < 0) monos = MonomialIndex(std::vector<Monomial>{});
    }
    std::size_t size() const { return q * monos.size(); }
    std::size_t at(std::size_t comp, const Monomial& m) const { return comp * monos.size() + monos.at(m); }

    QMatrix coordinates(const Trajectory& w) const {
        QMatrix v(size(), 1);
        for (std::size_t j = 0; j < q; ++j)
            for (const auto& t : w.components[j].terms()) v(at(j, t.mono), 0) = t.coeff;
        return v;
    }

    Trajectory trajectory(const QMatrix& v, std::size_t col = 0) const {
        Trajectory w = Trajectory::zero(n, q);
        for (std::size_t j = 0; j < q; ++j) {
            std::vector<Term> terms;
            for (std::size_t p = 0; p < monos.size(); ++p) {
                const Rational& c = v(j * monos.size() + p, col);
                if (c != 0) terms.push_back({monos.basis()[p], c});
            }
            w.components[j] = Poly(n, std::move(terms));
        }
        return w;
    }
};

std::vector<Trajectory> columns_as_trajectories(const QMatrix& basis, const TrajectoryCoords& coords) {
    std::vector<Trajectory> out;
    for (std::size_t c = 0; c < basis.cols(); ++c) out.push_back(coords.trajectory(basis, c));
    return out;
}

void check_trajectory(const Trajectory& w, int n, std::size_t q) {
    if (w.n != n || w.components.size() != q) throw DimensionError("trajectory shape does not match the model");
}

}  // namespace

std::vector<Trajectory> poly_solutions(const ARModel& r, int D) {
    if (D < 0) throw std::invalid_argument("poly_solutions: D must be nonnegative");
    const TrajectoryCoords in(r.n(), r.q(), D);
    const TrajectoryCoords out(r.n(), r.p(), D);
    QMatrix a(out.size(), in.size());
    for (std::size_t j = 0; j < r.q(); ++j)
        for (const auto& beta : in.monos.basis()) {
            const Poly basis_poly = Poly::monomial(r.n(), beta);
            for (std::size_t i = 0; i < r.p(); ++i) {
                const Poly image = apply_operator(r.matrix()(i, j), basis_poly);
                for (const auto& t : image.terms()) a(out.at(i, t.mono), in.at(j, beta)) += t.coeff;
            }
        }
    return columns_as_trajectories(kernel_basis(a), in);
}

namespace {

// Connected pieces of the bipartite graph Y -- X given by the nonzero
// entries of K_1..K_n, L. The latent equations split along them.
struct Piece {
    std::vector<std::size_t> xs;
    std::vector<std::size_t> ys;
};

std::vector<Piece> pencil_pieces(const Pencil& p) {
    const std::size_t nx = p.dim_x(), ny = p.dim_y();
    std::vector<std::size_t> parent(nx + ny);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) {
            bool edge = p.l()(y, x) != 0;
            for (int i = 1; i <= p.n() && !edge; ++i) edge = p.k(i)(y, x) != 0;
            if (edge) parent[find(nx + y)] = find(x);
        }
    std::map<std::size_t, Piece> by_root;
    for (std::size_t x = 0; x < nx; ++x) by_root[find(x)].xs.push_back(x);
    for (std::size_t y = 0; y < ny; ++y) by_root[find(nx + y)].ys.push_back(y);
    std::vector<Piece> out;
    for (auto& [root, piece] : by_root)
        if (!piece.ys.empty()) out.push_back(std::move(piece));
    return out;
}

// Matrix of x -> K d(x) - L x on one piece: latent degree <= dx, equation
// coefficients indexed by (position in ys, monomial of degree <= e).
QMatrix latent_operator(const Pencil& p, const Piece& piece, const MonomialIndex& xm, const MonomialIndex& em) {
    QMatrix a(piece.ys.size() * em.size(), piece.xs.size() * xm.size());
    for (std::size_t yi = 0; yi < piece.ys.size(); ++yi)
        for (std::size_t xi = 0; xi < piece.xs.size(); ++xi) {
            const std::size_t y = piece.ys[yi], x = piece.xs[xi];
            const Rational& l = p.l()(y, x);
            for (std::size_t b = 0; b < xm.size(); ++b) {
                const Monomial& beta = xm.basis()[b];
                const std::size_t col = xi * xm.size() + b;
                if (l != 0) a(yi * em.size() + em.at(beta), col) -= l;
                for (int i = 1; i <= p.n(); ++i) {
                    const Rational& k = p.k(i)(y, x);
                    if (k == 0 || beta.exp[static_cast<std::size_t>(i)] == 0) continue;
                    const Monomial lower = beta / Monomial::var(i);
                    a(yi * em.size() + em.at(lower), col) += k * static_cast<long>(beta.exp[static_cast<std::size_t>(i)]);
                }
            }
        }
    return a;
}

// Coordinates of (M w) on one piece; w has degree <= e.
QMatrix forcing(const QMatrix& m, const Piece& piece, const Trajectory& w, const MonomialIndex& em) {
    QMatrix b(piece.ys.size() * em.size(), 1);
    for (std::size_t yi = 0; yi < piece.ys.size(); ++yi)
        for (std::size_t j = 0; j < w.components.size(); ++j) {
            const Rational& c = m(piece.ys[yi], j);
            if (c == 0) continue;
            for (const auto& t : w.components[j].terms()) b(yi * em.size() + em.at(t.mono), 0) += c * t.coeff;
        }
    return b;
}

}  // namespace

LatentMembership kw_behavior_membership(const KWModel& model, const Trajectory& w, int latent_bound) {
    check_trajectory(w, model.n(), model.q());
    const int n = model.n();
    LatentMembership out;
    if (w.is_zero()) {
        out.member = true;
        out.latent = Trajectory::zero(n, model.dim_x());
        out.latent_degree = -1;
        return out;
    }
    const int dw = w.degree();
    if (latent_bound < dw) throw std::invalid_argument("kw_behavior_membership: latent bound below deg w");

    Trajectory x = Trajectory::zero(n, model.dim_x());
    int reached = -1;
    for (const Piece& piece : pencil_pieces(model.pencil())) {
        bool solved = false;
        for (int dx = std::max(dw, 0); dx <= latent_bound && !solved; ++dx) {
            const MonomialIndex xm(delta(n, dx));
            const MonomialIndex em(delta(n, std::max(dx, dw)));
            const QMatrix b = forcing(model.m(), piece, w, em);
            if (b.is_zero()) {
                solved = true;
                break;
            }
            auto sol = solve(latent_operator(model.pencil(), piece, xm, em), b);
            if (!sol) continue;
            solved = true;
            for (std::size_t xi = 0; xi < piece.xs.size(); ++xi) {
                std::vector<Term> terms;
                for (std::size_t p = 0; p < xm.size(); ++p) {
                    const Rational& c = (*sol)(xi * xm.size() + p, 0);
                    if (c != 0) terms.push_back({xm.basis()[p], c});
                }
                x.components[piece.xs[xi]] = Poly(n, std::move(terms));
            }
        }
        if (!solved) return out;
    }
    for (const auto& c : x.components) reached = std::max(reached, c.degree());
    out.member = true;
    out.latent = std::move(x);
    out.latent_degree = reached;
    return out;
}

Trajectory latent_residual(const KWModel& model, const Trajectory& x, const Trajectory& w) {
    check_trajectory(w, model.n(), model.q());
    check_trajectory(x, model.n(), model.dim_x());
    const Pencil& p = model.pencil();
    const int n = model.n();
    Trajectory out = Trajectory::zero(n, model.dim_y());
    for (std::size_t y = 0; y < model.dim_y(); ++y) {
        Poly acc(n);
        for (std::size_t c = 0; c < model.dim_x(); ++c) {
            for (int i = 1; i <= n; ++i)
                if (p.k(i)(y, c) != 0) acc += x.components[c].derivative(i) * p.k(i)(y, c);
            if (p.l()(y, c) != 0) acc -= x.components[c] * p.l()(y, c);
        }
        for (std::size_t j = 0; j < model.q(); ++j)
            if (model.m()(y, j) != 0) acc -= w.components[j] * model.m()(y, j);
        out.components[y] = std::move(acc);
    }
    return out;
}

std::vector<Trajectory> manifest_solutions(const KWModel& model, int D, int latent_bound) {
    if (D < 0 || latent_bound < D) throw std::invalid_argument("manifest_solutions: need 0 <= D <= latent bound");
    const int n = model.n();
    const TrajectoryCoords wc(n, model.q(), D);
    const MonomialIndex xm(delta(n, latent_bound));
    const MonomialIndex& em = xm;

    // w is manifest iff on every piece M w lies in the image of the latent
    // operator. Eliminating [A | B] leaves rows with zero A-part: those
    // constrain w.
    QMatrix constraints(0, wc.size());
    for (const Piece& piece : pencil_pieces(model.pencil())) {
        const QMatrix a = latent_operator(model.pencil(), piece, xm, em);
        QMatrix b(a.rows(), wc.size());
        for (std::size_t yi = 0; yi < piece.ys.size(); ++yi)
            for (std::size_t j = 0; j < model.q(); ++j) {
                const Rational& c = model.m()(piece.ys[yi], j);
                if (c == 0) continue;
                for (const auto& mono : wc.monos.basis()) b(yi * em.size() + em.at(mono), wc.at(j, mono)) -= c;
            }
        const RrefResult r = rref(hstack(a, b));
        std::size_t first = 0;
        while (first < r.pivots.size() && r.pivots[first] < a.cols()) ++first;
        const std::size_t count = r.pivots.size() - first;
        if (count > 0) constraints = vstack(constraints, r.matrix.block(first, a.cols(), count, wc.size()));
    }
    return columns_as_trajectories(kernel_basis(constraints), wc);
}

Theorem1Report theorem1_check(const ARModel& r, int D, std::optional<int> latent_bound) {
    Theorem1Report rep;
    rep.degree_bound = D;
    const KWModel m = kw_of_ar(r);
    rep.latent_bound = latent_bound.value_or(D + r.max_degree() + 1);
    if (rep.latent_bound < D) throw std::invalid_argument("theorem1_check: latent bound below D");

    const auto sols = poly_solutions(r, D);
    rep.solutions = sols.size();
    for (const auto& w : sols) {
        const LatentMembership mem = kw_behavior_membership(m, w, rep.latent_bound);
        if (!mem.member) {
            rep.failure = "no latent trajectory for w = " + w.to_string();
            return rep;
        }
        if (!latent_residual(m, *mem.latent, w).is_zero()) {
            rep.failure = "latent witness does not verify for w = " + w.to_string();
            return rep;
        }
        ++rep.witnesses_verified;
    }
    const auto manifest = manifest_solutions(m, D, rep.latent_bound);
    for (const auto& w : manifest) {
        if (!apply_diffop(r.matrix(), w).is_zero()) {
            rep.failure = "manifest trajectory violates R: w = " + w.to_string();
            return rep;
        }
        ++rep.manifest_checked;
    }
    if (manifest.size() != sols.size()) {
        rep.failure = "manifest and kernel dimensions differ";
        return rep;
    }
    rep.passed = true;
    return rep;
}

// ---------------------------------------------------------------- properness

HomogeneousMap m_tilde(const KWModel& model, const SimilarityOptions& opts) {
    const KWModel c = canonicalize(model, opts);
    const int n = c.n();
    const auto ranges = block_ranges(n, c.blocks());
    PolyMatrix mt(n, ranges.size(), c.q());
    std::vector<int> shifts;
    for (std::size_t k = 0; k < ranges.size(); ++k) {
        const auto basis = delta(n, ranges[k].d);
        for (std::size_t j = 0; j < c.q(); ++j) {
            std::vector<Term> terms;
            for (std::size_t p = 0; p < basis.size(); ++p) {
                const Rational& coef = c.m()(ranges[k].offset + p, j);
                if (coef == 0) continue;
                Monomial mono = basis[p];
                mono.exp[0] = static_cast<std::uint16_t>(ranges[k].d - basis[p].order());
                terms.push_back({mono, coef});
            }
            mt(k, j) = Poly(n, std::move(terms));
        }
        shifts.push_back(ranges[k].d);
    }
    return {GradedFreeModule::free(Ring::T, n, c.q()), GradedFreeModule{Ring::T, n, std::move(shifts)}, std::move(mt)};
}

HomogeneousMap properness_map(const KWModel& model) {
    const int n = model.n();
    const std::size_t dx = model.dim_x(), dy = model.dim_y(), q = model.q();
    const PolyMatrix h = model.pencil().homogeneous_matrix();
    PolyMatrix big(n, dy, dx + q);
    for (std::size_t y = 0; y < dy; ++y) {
        for (std::size_t x = 0; x < dx; ++x) big(y, x) = h(y, x);
        for (std::size_t j = 0; j < q; ++j) big(y, dx + j) = Poly::constant(n, model.m()(y, j));
    }
    std::vector<int> src(dx, -1);
    src.resize(dx + q, 0);
    return {GradedFreeModule{Ring::T, n, std::move(src)}, GradedFreeModule::free(Ring::T, n, dy), std::move(big)};
}

ProperReport properness_routes(const KWModel& model, const SimilarityOptions& opts) {
    ProperReport rep;
    rep.direct = regular_at_infinity(properness_map(model));
    rep.reduced = regular_at_infinity(m_tilde(model, opts));
    rep.proper = rep.direct;
    return rep;
}

ProperReport is_proper(const KWModel& model, const SimilarityOptions& opts) {
    ProperReport rep = properness_routes(model, opts);
    if (rep.direct != rep.reduced)
        throw InternalConsistencyError("is_proper: direct and reduced routes disagree");
    return rep;
}

bool is_proper_ar(const ARModel& r) {
    if (r.is_free()) return true;
    GradedFreeModule target{Ring::T, r.n(), r.row_degrees()};
    return regular_at_infinity(
        HomogeneousMap(GradedFreeModule::free(Ring::T, r.n(), r.q()), target, homogenize(r.matrix(), r.row_degrees())));
}

// ---------------------------------------------------------------- minimality

long long GammaFunction::operator()(int d) const {
    auto it = counts.find(d);
    return it == counts.end() ? 0 : it->second;
}

GammaFunction gamma_of_ar(const ARModel& r) {
    GammaFunction g;
    for (int d : r.row_degrees()) ++g.counts[d];
    return g;
}

std::pair<long long, long long> mu_nu(const GammaFunction& g, int n) {
    long long mu = 0, nu = 0;
    for (const auto& [d, count] : g.counts) {
        if (count < 0) throw std::invalid_argument("mu_nu: negative count");
        auto [a, b] = jordan_dims(n, d);
        mu += count * a;
        nu += count * b;
    }
    return {mu, nu};
}

namespace {

// Echelon basis of the span of s^alpha * row_k with total degree <= budget,
// restricted to elements of degree <= max_degree, lowest degree first.
std::vector<std::vector<Poly>> low_degree_elements(const ARModel& r, int budget, int max_degree) {
    const int n = r.n();
    const std::size_t q = r.q();
    std::vector<Monomial> monos = delta(n, budget);
    std::reverse(monos.begin(), monos.end());  // highest degree first
    const MonomialIndex idx(monos);

    std::vector<std::vector<Rational>> gens;
    for (std::size_t k = 0; k < r.p(); ++k) {
        const int dk = r.row_degrees()[k];
        for (const auto& alpha : delta(n, budget - dk)) {
            std::vector<Rational> v(monos.size() * q);
            for (std::size_t j = 0; j < q; ++j)
                for (const auto& t : r.matrix()(k, j).terms()) v[idx.at(t.mono * alpha) * q + j] = t.coeff;
            gens.push_back(std::move(v));
        }
    }
    if (gens.empty()) return {};
    QMatrix g(gens.size(), monos.size() * q);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t c = 0; c < g.cols(); ++c) g(i, c) = gens[i][c];
    const RrefResult e = rref(g);

    std::vector<std::vector<Poly>> out;
    for (std::size_t row = e.pivots.size(); row-- > 0;) {
        if (monos[e.pivots[row] / q].degree() > max_degree) break;
        std::vector<std::vector<Term>> terms(q);
        for (std::size_t c = e.pivots[row]; c < g.cols(); ++c)
            if (e.matrix(row, c) != 0) terms[c % q].push_back({monos[c / q], e.matrix(row, c)});
        std::vector<Poly> element;
        for (auto& t : terms) element.emplace_back(n, std::move(t));
        out.push_back(std::move(element));
    }
    return out;
}

ARModel replace_row(const ARModel& r, std::size_t i, const std::vector<Poly>& row) {
    PolyMatrix m = r.matrix();
    for (std::size_t j = 0; j < r.q(); ++j) m(i, j) = row[j];
    return ARModel(std::move(m));
}

ARModel drop_row(const ARModel& r, std::size_t drop) {
    std::vector<std::vector<Poly>> rows;
    for (std::size_t i = 0; i < r.p(); ++i)
        if (i != drop) rows.push_back(r.matrix().row(i));
    return ARModel(PolyMatrix::from_rows(r.n(), rows));
}

}  // namespace

MinimizeResult minimize_ar(const ARModel& r, std::optional<int> degree_budget) {
    if (!is_proper_ar(r)) throw ImproperError("minimize_ar: input is not proper");
    MinimizeResult res{r, "HEURISTIC_MINIMUM", 0};
    if (r.is_free()) return res;
    const int budget = degree_budget.value_or(r.max_degree());
    const BehaviorHandle handle = behavior_handle(r);

    bool improved = true;
    while (improved) {
        improved = false;
        const ARModel& cur = res.model;
        std::vector<std::size_t> order(cur.p());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cur.row_degrees()[a] > cur.row_degrees()[b]; });
        if (cur.p() > 1) {
            for (std::size_t i : order) {
                ARModel next = drop_row(cur, i);
                if (behavior_handle(next) == handle && is_proper_ar(next)) {
                    res.model = std::move(next);
                    ++res.removals;
                    improved = true;
                    break;
                }
            }
            if (improved) continue;
        }
        for (std::size_t i : order) {
            const int di = cur.row_degrees()[i];
            if (di == 0) continue;
            for (const auto& cand : low_degree_elements(cur, budget, di - 1)) {
                ARModel next = replace_row(cur, i, cand);
                if (behavior_handle(next) == handle && is_proper_ar(next)) {
                    res.model = std::move(next);
                    ++res.replacements;
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
    }
    return res;
}

Theorem2Report theorem2_check(const ARModel& r_ref, const KWModel& model, bool require_proper,
                              const SimilarityOptions& opts) {
    Theorem2Report rep;
    const ProperReport routes = properness_routes(model, opts);
    rep.proper = routes.proper;
    rep.routes_agree = routes.direct == routes.reduced;
    if (require_proper && !rep.proper) throw ImproperError("theorem2_check: model is not proper");
    const ARModel eliminated = eliminate(model, opts);
    if (!(behavior_handle(eliminated) == behavior_handle(r_ref)))
        throw BehaviorMismatchError("theorem2_check: model and reference describe different behaviors");

    const ARModel* reference = nullptr;
    if (is_proper_ar(r_ref)) {
        reference = &r_ref;
        rep.reference = "reference";
    } else if (is_proper_ar(eliminated)) {
        reference = &eliminated;
        rep.reference = "eliminated model";
    } else {
        throw ImproperError("theorem2_check: no proper representation available");
    }
    const MinimizeResult min = minimize_ar(*reference);
    rep.gamma = gamma_of_ar(min.model);
    std::tie(rep.mu_hat, rep.nu_hat) = mu_nu(rep.gamma, model.n());
    rep.dim_x = static_cast<long long>(model.dim_x());
    rep.dim_y = static_cast<long long>(model.dim_y());
    rep.mu_bound = rep.mu_hat <= rep.dim_x;
    rep.nu_bound = rep.nu_hat <= rep.dim_y;
    const bool mu_eq = rep.mu_hat == rep.dim_x;
    const bool nu_eq = rep.nu_hat == rep.dim_y;
    rep.equivalence = mu_eq == nu_eq;
    rep.minimal = mu_eq && nu_eq;
    return rep;
}

SimilarityResult models_similar(const KWModel& from, const KWModel& to, const SimilarityOptions& opts) {
    if (from.n() != to.n() || from.q() != to.q()) throw DimensionError("models_similar: n and q must agree");
    return similar_with_external(from.pencil(), from.m(), to.pencil(), to.m(), opts);
}

}  // namespace kwm
