#include "kwm/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace kwm::oracle {

namespace {

std::vector<Monomial> monomials_up_to(Ring ring, int n, int D) {
    std::vector<Monomial> out;
    for (int d = 0; d <= D; ++d)
        for (const auto& m : monomials_of_degree(n, d, ring == Ring::T)) out.push_back(m);
    return out;
}

Rational falling_factorial(int b, int a) {
    Rational r = 1;
    for (int k = 0; k < a; ++k) r *= b - k;
    return r;
}

int vector_degree(const ModuleVector& v) {
    int d = -1;
    for (const auto& p : v) d = std::max(d, p.degree());
    return d;
}

}  // namespace

QMatrix TruncatedSpan::coordinates(const ModuleVector& v) const {
    if (v.size() != rank) throw DimensionError("TruncatedSpan: rank mismatch");
    std::map<Monomial, std::size_t, MonomialLess> pos;
    for (std::size_t i = 0; i < monomials.size(); ++i) pos[monomials[i]] = i;
    QMatrix c(rank * monomials.size(), 1);
    for (std::size_t j = 0; j < rank; ++j)
        for (const auto& t : v[j].terms()) {
            auto it = pos.find(t.mono);
            if (it == pos.end()) throw std::invalid_argument("TruncatedSpan: vector exceeds the degree bound");
            c(j * monomials.size() + it->second, 0) = t.coeff;
        }
    return c;
}

TruncatedSpan truncated_span(const std::vector<ModuleVector>& gens, Ring ring, int n, std::size_t rank, int D) {
    TruncatedSpan span{rank, D, monomials_up_to(ring, n, D), {}};
    std::vector<QMatrix> cols;
    for (const auto& g : gens) {
        const int dg = vector_degree(g);
        if (dg < 0) continue;
        for (const auto& m : monomials_up_to(ring, n, D - dg)) {
            ModuleVector mg;
            for (const auto& p : g) mg.push_back(p.mul_term(m, 1));
            cols.push_back(span.coordinates(mg));
        }
    }
    span.basis = QMatrix(rank * span.monomials.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) span.basis.set_block(0, c, cols[c]);
    return span;
}

bool truncated_membership(const ModuleVector& v, const std::vector<ModuleVector>& gens, Ring ring, int n, int D) {
    if (v.empty()) throw DimensionError("truncated_membership: empty vector");
    if (vector_degree(v) > D) return false;
    const TruncatedSpan span = truncated_span(gens, ring, n, v.size(), D);
    return solve(span.basis, span.coordinates(v)).has_value();
}

RegularityReport truncated_s0_regularity(const std::vector<ModuleVector>& gens, const std::vector<int>& shifts, int n,
                                         int D) {
    const std::size_t r = shifts.size();
    // Coordinates of the degree-j component: (summand i, monomial of degree j + a_i).
    auto component = [&](int j) {
        std::vector<std::pair<std::size_t, Monomial>> basis;
        for (std::size_t i = 0; i < r; ++i)
            if (j + shifts[i] >= 0)
                for (const auto& m : monomials_of_degree(n, j + shifts[i], true)) basis.emplace_back(i, m);
        return basis;
    };
    auto coords = [](const std::vector<std::pair<std::size_t, Monomial>>& basis, const ModuleVector& v) {
        QMatrix c(basis.size(), 1);
        for (std::size_t k = 0; k < basis.size(); ++k) c(k, 0) = v[basis[k].first].coefficient(basis[k].second);
        return c;
    };
    // Degree of a homogeneous generator in T^r(shifts).
    auto gen_degree = [&](const ModuleVector& g) -> std::optional<int> {
        for (std::size_t i = 0; i < r; ++i)
            if (!g[i].is_zero()) return g[i].degree() - shifts[i];
        return std::nullopt;
    };
    // Span of N_j.
    auto sub_component = [&](int j, const std::vector<std::pair<std::size_t, Monomial>>& basis) {
        std::vector<QMatrix> cols;
        for (const auto& g : gens) {
            if (g.size() != r) throw DimensionError("truncated_s0_regularity: generator rank mismatch");
            auto dg = gen_degree(g);
            if (!dg || j - *dg < 0) continue;
            for (const auto& m : monomials_of_degree(n, j - *dg, true)) {
                ModuleVector mg;
                for (const auto& p : g) mg.push_back(p.mul_term(m, 1));
                cols.push_back(coords(basis, mg));
            }
        }
        QMatrix s(basis.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) s.set_block(0, c, cols[c]);
        return s;
    };

    const int lowest = shifts.empty() ? 0 : -*std::max_element(shifts.begin(), shifts.end());
    for (int j = lowest + 1; j <= D; ++j) {
        const auto prev = component(j - 1);
        const auto cur = component(j);
        if (prev.empty()) continue;
        const QMatrix n_prev = sub_component(j - 1, prev);
        const QMatrix n_cur = sub_component(j, cur);
        QMatrix s0_prev(cur.size(), prev.size());
        for (std::size_t k = 0; k < prev.size(); ++k) {
            Monomial m = prev[k].second * Monomial::var(0);
            for (std::size_t row = 0; row < cur.size(); ++row)
                if (cur[row].first == prev[k].first && cur[row].second == m) s0_prev(row, k) = 1;
        }
        // dim {v in F_{j-1} : s0 v in N_j} versus dim N_{j-1}.
        const long long preimage = static_cast<long long>(prev.size() + rank(n_cur)) -
                                   static_cast<long long>(rank(hstack(n_cur, s0_prev)));
        if (preimage > static_cast<long long>(rank(n_prev))) return {RegularityVerdict::ZeroDivisorFound, j - 1};
    }
    return {RegularityVerdict::RegularUpToD, D};
}

std::vector<Trajectory> dense_diff_kernel(const ARModel& r, int D) {
    const int n = r.n();
    const std::size_t q = r.q(), p = r.p();
    const std::vector<Monomial> monos = monomials_up_to(Ring::S, n, D);
    std::map<Monomial, std::size_t, MonomialLess> pos;
    for (std::size_t i = 0; i < monos.size(); ++i) pos[monos[i]] = i;

    QMatrix a(p * monos.size(), q * monos.size());
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
            for (const auto& term : r.matrix()(i, j).terms())
                for (std::size_t b = 0; b < monos.size(); ++b) {
                    const Monomial& beta = monos[b];
                    if (!term.mono.divides(beta)) continue;
                    Rational c = term.coeff;
                    for (int v = 1; v <= n; ++v) c *= falling_factorial(beta.exp[v], term.mono.exp[v]);
                    a(i * monos.size() + pos.at(beta / term.mono), j * monos.size() + b) += c;
                }
    const QMatrix k = kernel_basis(a);
    std::vector<Trajectory> out;
    for (std::size_t c = 0; c < k.cols(); ++c) {
        Trajectory w = Trajectory::zero(n, q);
        for (std::size_t j = 0; j < q; ++j) {
            std::vector<Term> terms;
            for (std::size_t b = 0; b < monos.size(); ++b)
                if (k(j * monos.size() + b, c) != 0) terms.push_back({monos[b], k(j * monos.size() + b, c)});
            w.components[j] = Poly(n, std::move(terms));
        }
        out.push_back(std::move(w));
    }
    return out;
}

bool same_span(const std::vector<Trajectory>& a, const std::vector<Trajectory>& b, int n, std::size_t q) {
    int D = 0;
    for (const auto* list : {&a, &b})
        for (const auto& w : *list) {
            if (w.n != n || w.components.size() != q) throw DimensionError("same_span: shape mismatch");
            D = std::max(D, w.degree());
        }
    const std::vector<Monomial> monos = monomials_up_to(Ring::S, n, D);
    std::map<Monomial, std::size_t, MonomialLess> pos;
    for (std::size_t i = 0; i < monos.size(); ++i) pos[monos[i]] = i;
    auto matrix = [&](const std::vector<Trajectory>& list) {
        QMatrix m(q * monos.size(), list.size());
        for (std::size_t c = 0; c < list.size(); ++c)
            for (std::size_t j = 0; j < q; ++j)
                for (const auto& t : list[c].components[j].terms()) m(j * monos.size() + pos.at(t.mono), c) = t.coeff;
        return m;
    };
    const QMatrix ma = matrix(a), mb = matrix(b);
    const std::size_t ra = rank(ma), rb = rank(mb);
    return ra == rb && rank(hstack(ma, mb)) == ra;
}

}  // namespace kwm::oracle
