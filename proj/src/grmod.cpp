#include "kwm/grmod.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kwm {

// ---------------------------------------------------------------- modules

GradedFreeModule GradedFreeModule::dual() const {
    GradedFreeModule d = *this;
    for (auto& a : d.shifts) a = -a;
    return d;
}

std::size_t GradedFreeModule::component_dim(int d) const {
    const int nvars = ring == Ring::T ? n + 1 : n;
    std::size_t dim = 0;
    for (int a : shifts) {
        const int e = d + a;
        if (e < 0) continue;
        dim += static_cast<std::size_t>(binomial(e + nvars - 1, nvars - 1));
    }
    return dim;
}

ModuleVector zero_vector(int n, std::size_t rank) { return ModuleVector(rank, Poly(n)); }

bool is_zero(const ModuleVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

ModuleVector operator+(const ModuleVector& a, const ModuleVector& b) {
    if (a.size() != b.size()) throw DimensionError("module vectors of different rank");
    ModuleVector s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
    return s;
}

ModuleVector operator-(const ModuleVector& a, const ModuleVector& b) {
    if (a.size() != b.size()) throw DimensionError("module vectors of different rank");
    ModuleVector s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] - b[i];
    return s;
}

ModuleVector operator*(const Poly& c, const ModuleVector& v) {
    ModuleVector s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = c * v[i];
    return s;
}

std::optional<int> homogeneous_degree(const ModuleVector& v, const GradedFreeModule& m) {
    std::optional<int> deg;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (const auto& t : v[i].terms()) {
            const int d = t.mono.degree() - m.shifts.at(i);
            if (deg && *deg != d) return std::nullopt;
            deg = d;
        }
    return deg;
}

HomogeneousMap::HomogeneousMap(GradedFreeModule src, GradedFreeModule tgt, PolyMatrix q)
    : source(std::move(src)), target(std::move(tgt)), matrix(std::move(q)) {
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank())
        throw std::invalid_argument("HomogeneousMap: matrix shape does not match modules");
    if (source.ring != target.ring || source.n != target.n)
        throw std::invalid_argument("HomogeneousMap: modules over different rings");
    for (std::size_t i = 0; i < matrix.rows(); ++i)
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            const int want = target.shifts[i] - source.shifts[j];
            for (const auto& t : matrix(i, j).terms()) {
                if (t.mono.degree() != want)
                    throw std::invalid_argument("HomogeneousMap: entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is not of degree " + std::to_string(want));
                if (source.ring == Ring::S && t.mono.exp[0] != 0)
                    throw std::invalid_argument("HomogeneousMap: s0 in a map over S");
            }
        }
}

HomogeneousMap HomogeneousMap::dual() const { return {target.dual(), source.dual(), matrix.transpose()}; }

HomogeneousMap HomogeneousMap::to_s() const {
    GradedFreeModule s = source, t = target;
    s.ring = Ring::S;
    t.ring = Ring::S;
    return {s, t, substitute_s0_zero(matrix)};
}

bool SubmoduleGB::same_submodule(const SubmoduleGB& o) const {
    if (ambient_.rank() != o.ambient_.rank() || basis_.size() != o.basis_.size()) return false;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i] != o.basis_[i]) return false;
    return true;
}

std::string to_string(const ModuleVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].to_string();
    }
    return s + ")";
}

// ---------------------------------------------------------------- engine

namespace {

struct MTerm {
    std::uint32_t pos;
    Monomial mono;
    Rational coeff;
};

using MVec = std::vector<MTerm>;

// Position over term: a lower position ranks higher.
int pot_compare(std::uint32_t pa, const Monomial& ma, std::uint32_t pb, const Monomial& mb) {
    if (pa != pb) return pa < pb ? 1 : -1;
    return grevlex_compare(ma, mb);
}

MVec to_mvec(const ModuleVector& v, std::uint32_t offset = 0) {
    MVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (const auto& t : v[i].terms()) out.push_back({static_cast<std::uint32_t>(i) + offset, t.mono, t.coeff});
    // Per-position polys are already sorted and positions are increasing.
    return out;
}

ModuleVector from_mvec(const MVec& v, int n, std::size_t rank, std::uint32_t offset = 0) {
    std::vector<std::vector<Term>> parts(rank);
    for (const auto& t : v)
        if (t.pos >= offset && t.pos - offset < rank) parts[t.pos - offset].push_back({t.mono, t.coeff});
    ModuleVector out;
    out.reserve(rank);
    for (auto& p : parts) out.emplace_back(n, std::move(p));
    return out;
}

// a[from..] - c * m * g
MVec sub_scaled(const MVec& a, std::size_t from, const Rational& c, const Monomial& m, const MVec& g) {
    MVec out;
    out.reserve(a.size() - from + g.size());
    std::size_t i = from, j = 0;
    Monomial gm;
    while (i < a.size() || j < g.size()) {
        int cmp;
        if (j < g.size()) gm = g[j].mono * m;
        if (i == a.size())
            cmp = -1;
        else if (j == g.size())
            cmp = 1;
        else
            cmp = pot_compare(a[i].pos, a[i].mono, g[j].pos, gm);
        if (cmp > 0) {
            out.push_back(a[i++]);
        } else if (cmp < 0) {
            out.push_back({g[j].pos, gm, -c * g[j].coeff});
            ++j;
        } else {
            Rational v = a[i].coeff - c * g[j].coeff;
            if (v != 0) out.push_back({a[i].pos, gm, std::move(v)});
            ++i;
            ++j;
        }
    }
    return out;
}

void make_monic(MVec& v) {
    if (v.empty() || v.front().coeff == 1) return;
    Rational inv = 1 / v.front().coeff;
    for (auto& t : v) t.coeff *= inv;
}

const MVec* find_reducer(const MTerm& lt, const std::vector<MVec>& basis, const MVec* skip = nullptr) {
    for (const auto& g : basis) {
        if (&g == skip || g.empty()) continue;
        if (g.front().pos == lt.pos && g.front().mono.divides(lt.mono)) return &g;
    }
    return nullptr;
}

// Full reduction: leading terms that cannot be reduced are moved to the
// remainder and reduction continues on the tail.
MVec reduce(MVec f, const std::vector<MVec>& basis, const MVec* skip = nullptr) {
    MVec rem;
    std::size_t start = 0;
    while (start < f.size()) {
        const MTerm& lt = f[start];
        const MVec* g = find_reducer(lt, basis, skip);
        if (!g) {
            rem.push_back(lt);
            ++start;
            continue;
        }
        Rational c = lt.coeff / g->front().coeff;
        Monomial m = lt.mono / g->front().mono;
        f = sub_scaled(f, start, c, m, *g);
        start = 0;
    }
    return rem;
}

class Buchberger {
public:
    explicit Buchberger(std::vector<int> shifts) : shifts_(std::move(shifts)) {}

    void add_generator(MVec g) {
        g = reduce(std::move(g), basis_);
        if (g.empty()) return;
        make_monic(g);
        insert(std::move(g));
    }

    void run() {
        while (!pairs_.empty()) {
            auto best = std::min_element(pairs_.begin(), pairs_.end(), [](const Pair& a, const Pair& b) {
                if (a.deg != b.deg) return a.deg < b.deg;
                return pot_compare(a.pos, a.lcm, b.pos, b.lcm) < 0;
            });
            Pair p = *best;
            pairs_.erase(best);
            MVec s = spoly(basis_[p.i], basis_[p.j], p.lcm);
            s = reduce(std::move(s), basis_);
            if (s.empty()) continue;
            make_monic(s);
            insert(std::move(s));
        }
    }

    std::vector<MVec> reduced_basis() const {
        std::vector<MVec> minimal;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            bool redundant = false;
            for (std::size_t j = 0; j < basis_.size() && !redundant; ++j) {
                if (i == j) continue;
                const auto& a = basis_[i].front();
                const auto& b = basis_[j].front();
                if (a.pos != b.pos || !b.mono.divides(a.mono)) continue;
                // Equal leading terms: keep the earliest.
                redundant = !(a.mono == b.mono) || j < i;
            }
            if (!redundant) minimal.push_back(basis_[i]);
        }
        std::vector<MVec> out;
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            MVec r = reduce(minimal[i], minimal, &minimal[i]);
            make_monic(r);
            out.push_back(std::move(r));
        }
        std::sort(out.begin(), out.end(), [](const MVec& a, const MVec& b) {
            return pot_compare(a.front().pos, a.front().mono, b.front().pos, b.front().mono) > 0;
        });
        return out;
    }

private:
    struct Pair {
        std::size_t i, j;
        std::uint32_t pos;
        Monomial lcm;
        int deg;
    };

    int shift(std::uint32_t pos) const { return pos < shifts_.size() ? shifts_[pos] : 0; }

    static MVec spoly(const MVec& a, const MVec& b, const Monomial& lcm) {
        MVec left;
        left.reserve(a.size());
        const Monomial ma = lcm / a.front().mono;
        for (const auto& t : a) left.push_back({t.pos, t.mono * ma, t.coeff / a.front().coeff});
        return sub_scaled(left, 0, 1 / b.front().coeff, lcm / b.front().mono, b);
    }

    void insert(MVec h) {
        const std::size_t k = basis_.size();
        const auto& lh = h.front();
        // Old pairs made redundant by the new leading term.
        std::erase_if(pairs_, [&](const Pair& p) {
            if (p.pos != lh.pos || !lh.mono.divides(p.lcm)) return false;
            const Monomial li = Monomial::lcm(basis_[p.i].front().mono, lh.mono);
            const Monomial lj = Monomial::lcm(basis_[p.j].front().mono, lh.mono);
            return !(li == p.lcm) && !(lj == p.lcm);
        });
        std::vector<Pair> fresh;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& li = basis_[i].front();
            if (li.pos != lh.pos) continue;
            Monomial l = Monomial::lcm(li.mono, lh.mono);
            fresh.push_back({i, k, lh.pos, l, l.degree() - shift(lh.pos)});
        }
        // Drop a fresh pair when another fresh pair's lcm divides it properly;
        // among equal lcms keep the first.
        std::vector<Pair> kept;
        for (std::size_t a = 0; a < fresh.size(); ++a) {
            bool drop = false;
            for (std::size_t b = 0; b < fresh.size() && !drop; ++b) {
                if (a == b || !fresh[b].lcm.divides(fresh[a].lcm)) continue;
                drop = !(fresh[b].lcm == fresh[a].lcm) || b < a;
            }
            if (!drop) kept.push_back(fresh[a]);
        }
        pairs_.insert(pairs_.end(), kept.begin(), kept.end());
        basis_.push_back(std::move(h));
    }

    std::vector<int> shifts_;
    std::vector<MVec> basis_;
    std::vector<Pair> pairs_;
};

std::vector<MVec> groebner(const std::vector<MVec>& gens, const std::vector<int>& shifts) {
    Buchberger b(shifts);
    for (const auto& g : gens) b.add_generator(g);
    b.run();
    return b.reduced_basis();
}

int max_n(const std::vector<ModuleVector>& gens, int fallback) {
    int n = fallback;
    for (const auto& g : gens)
        for (const auto& p : g) n = std::max(n, p.n());
    return n;
}

// Generators g_i are lifted to (g_i, e_{track[i]}) in an enlarged free
// module. A Groebner basis under position-over-term eliminates the first
// block; what survives lies in 0 + T^k and spans the tracked projection of
// the syzygy module of the g_i.
std::vector<ModuleVector> tracked_syzygies(const std::vector<ModuleVector>& gens, const GradedFreeModule& ambient,
                                           const std::vector<std::optional<std::size_t>>& track,
                                           const std::vector<int>& track_shifts) {
    const std::size_t r = ambient.rank();
    const std::size_t k = track_shifts.size();
    std::vector<int> shifts = ambient.shifts;
    shifts.insert(shifts.end(), track_shifts.begin(), track_shifts.end());
    std::vector<MVec> lifted;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        MVec v = to_mvec(gens[i]);
        if (track[i]) v.push_back({static_cast<std::uint32_t>(r + *track[i]), Monomial{}, 1});
        lifted.push_back(std::move(v));
    }
    const auto gb = groebner(lifted, shifts);
    std::vector<ModuleVector> out;
    const int n = max_n(gens, ambient.n);
    for (const auto& g : gb)
        if (g.front().pos >= r) out.push_back(from_mvec(g, n, k, static_cast<std::uint32_t>(r)));
    return out;
}

}  // namespace

SubmoduleGB module_gb(const std::vector<ModuleVector>& gens, const GradedFreeModule& ambient) {
    std::vector<MVec> mv;
    for (const auto& g : gens) {
        if (g.size() != ambient.rank()) throw DimensionError("module_gb: generator rank differs from ambient");
        mv.push_back(to_mvec(g));
    }
    const auto gb = groebner(mv, ambient.shifts);
    std::vector<ModuleVector> basis;
    const int n = max_n(gens, ambient.n);
    for (const auto& g : gb) basis.push_back(from_mvec(g, n, ambient.rank()));
    return {ambient, gens, std::move(basis)};
}

ModuleVector normal_form(const ModuleVector& v, const SubmoduleGB& gb) {
    std::vector<MVec> basis;
    for (const auto& g : gb.reduced_basis()) basis.push_back(to_mvec(g));
    return from_mvec(reduce(to_mvec(v), basis), std::max(gb.ambient().n, max_n({v}, 0)), gb.ambient().rank());
}

Membership membership(const ModuleVector& v, const SubmoduleGB& gb, bool want_certificate) {
    if (v.size() != gb.ambient().rank()) throw DimensionError("membership: vector rank differs from ambient");
    Membership m;
    m.member = is_zero(normal_form(v, gb));
    if (!m.member || !want_certificate) return m;
    const auto& gens = gb.generators();
    const std::size_t r = gb.ambient().rank();
    const int n = max_n(gens, max_n({v}, gb.ambient().n));
    std::vector<int> shifts = gb.ambient().shifts;
    for (const auto& g : gens) shifts.push_back(-homogeneous_degree(g, gb.ambient()).value_or(0));
    std::vector<MVec> lifted;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        MVec g = to_mvec(gens[i]);
        g.push_back({static_cast<std::uint32_t>(r + i), Monomial{}, 1});
        lifted.push_back(std::move(g));
    }
    const auto ext = groebner(lifted, shifts);
    MVec rest = reduce(to_mvec(v), ext);
    for (const auto& t : rest)
        if (t.pos < r) throw std::logic_error("membership: certificate reduction left a nonzero remainder");
    std::vector<Poly> cof = from_mvec(rest, n, gens.size(), static_cast<std::uint32_t>(r));
    for (auto& c : cof) c = -c;
    m.cofactors = std::move(cof);
    return m;
}

SubmoduleGB syzygies(const std::vector<ModuleVector>& gens, const GradedFreeModule& ambient) {
    GradedFreeModule syz{ambient.ring, ambient.n, {}};
    std::vector<std::optional<std::size_t>> track;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        syz.shifts.push_back(-homogeneous_degree(gens[i], ambient).value_or(0));
        track.emplace_back(i);
    }
    auto parts = tracked_syzygies(gens, ambient, track, syz.shifts);
    return module_gb(parts, syz);
}

SubmoduleGB colon_s0(const SubmoduleGB& nsub) {
    const auto& amb = nsub.ambient();
    if (amb.ring != Ring::T) throw std::invalid_argument("colon_s0: ambient ring must be T");
    const std::size_t r = amb.rank();
    std::vector<ModuleVector> gens = nsub.reduced_basis();
    std::vector<std::optional<std::size_t>> track(gens.size());
    std::vector<int> track_shifts;
    for (std::size_t k = 0; k < r; ++k) {
        ModuleVector e = zero_vector(amb.n, r);
        e[k] = Poly::variable(amb.n, 0);
        gens.push_back(std::move(e));
        track.emplace_back(k);
        track_shifts.push_back(amb.shifts[k] - 1);
    }
    // Syzygies sum c_i g_i + sum v_k s0 e_k = 0 give s0 (-v) in N.
    auto parts = tracked_syzygies(gens, amb, track, track_shifts);
    std::vector<ModuleVector> colon = nsub.reduced_basis();
    colon.insert(colon.end(), parts.begin(), parts.end());
    return module_gb(colon, amb);
}

SubmoduleGB dual_image(const HomogeneousMap& phi) {
    const GradedFreeModule fdual = phi.source.dual();
    std::vector<ModuleVector> gens;
    for (std::size_t i = 0; i < phi.matrix.rows(); ++i)
        if (!phi.matrix.is_row_zero(i)) gens.push_back(phi.matrix.row(i));
    return module_gb(gens, fdual);
}

bool regular_at_infinity(const HomogeneousMap& phi) {
    if (phi.source.ring != Ring::T) throw std::invalid_argument("regular_at_infinity: map must be over T");
    const SubmoduleGB image = dual_image(phi);
    return colon_s0(image).same_submodule(image);
}

// ---------------------------------------------------------------- graded components

namespace {

struct PosMonoLess {
    bool operator()(const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return a.second.exp < b.second.exp;
    }
};

using ComponentIndex = std::map<std::pair<std::size_t, Monomial>, std::size_t, PosMonoLess>;

ComponentIndex index_of(const std::vector<std::pair<std::size_t, Monomial>>& basis) {
    ComponentIndex idx;
    for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
    return idx;
}

}  // namespace

std::vector<std::pair<std::size_t, Monomial>> component_basis(const GradedFreeModule& m, int d) {
    std::vector<std::pair<std::size_t, Monomial>> out;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (const auto& mono : monomials_of_degree(m.n, d + m.shifts[i], m.ring == Ring::T))
            out.emplace_back(i, mono);
    return out;
}

QMatrix component_matrix(const HomogeneousMap& phi, int d) {
    const auto src = component_basis(phi.source, d);
    const auto tgt = component_basis(phi.target, d);
    const auto tidx = index_of(tgt);
    QMatrix a(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        const auto& [k, m] = src[c];
        for (std::size_t i = 0; i < phi.matrix.rows(); ++i)
            for (const auto& t : phi.matrix(i, k).terms()) a(tidx.at({i, t.mono * m}), c) += t.coeff;
    }
    return a;
}

QMatrix multiplication_matrix(const GradedFreeModule& m, const Poly& lambda, int d) {
    if (!lambda.is_homogeneous() || lambda.is_zero())
        throw std::invalid_argument("multiplication_matrix: lambda must be a nonzero homogeneous polynomial");
    const int e = lambda.degree();
    const auto src = component_basis(m, d - e);
    const auto tgt = component_basis(m, d);
    const auto tidx = index_of(tgt);
    QMatrix a(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
        for (const auto& t : lambda.terms()) a(tidx.at({src[c].first, t.mono * src[c].second}), c) += t.coeff;
    return a;
}

QMatrix component_coordinates(const ModuleVector& v, const GradedFreeModule& m, int d) {
    const auto basis = component_basis(m, d);
    const auto idx = index_of(basis);
    QMatrix x(basis.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (const auto& t : v[i].terms()) {
            auto it = idx.find({i, t.mono});
            if (it == idx.end()) throw std::invalid_argument("component_coordinates: term outside component");
            x(it->second, 0) = t.coeff;
        }
    return x;
}

namespace {

int lowest_degree(const GradedFreeModule& m) {
    int lo = 0;
    bool any = false;
    for (int a : m.shifts) {
        lo = any ? std::min(lo, -a) : -a;
        any = true;
    }
    return lo;
}

}  // namespace

int default_exactness_bound(const std::vector<HomogeneousMap>& complex) {
    int shift = 0, deg = 0;
    for (const auto& phi : complex) {
        for (int a : phi.source.shifts) shift = std::max(shift, std::abs(a));
        for (int a : phi.target.shifts) shift = std::max(shift, std::abs(a));
        for (std::size_t i = 0; i < phi.matrix.rows(); ++i) deg = std::max(deg, phi.matrix.row_degree(i));
    }
    return shift + deg + 4;
}

bool exactness_mod_lambda(const std::vector<HomogeneousMap>& complex, const Poly& lambda, int D) {
    if (complex.empty()) return true;
    for (std::size_t i = 0; i + 1 < complex.size(); ++i) {
        if (!(complex[i].target == complex[i + 1].source))
            throw std::invalid_argument("exactness_mod_lambda: maps do not chain");
        if (!(complex[i + 1].matrix * complex[i].matrix).is_zero())
            throw std::invalid_argument("exactness_mod_lambda: consecutive maps do not compose to zero");
    }
    int lo = 0;
    for (const auto& phi : complex) lo = std::min({lo, lowest_degree(phi.source), lowest_degree(phi.target)});
    for (int d = lo; d <= D; ++d) {
        for (std::size_t i = 0; i < complex.size(); ++i) {
            const auto& psi = complex[i];
            const QMatrix p = component_matrix(psi, d);
            const QMatrix lam_src = multiplication_matrix(psi.source, lambda, d);
            const QMatrix lam_tgt = multiplication_matrix(psi.target, lambda, d);
            // dim {b : psi(b) in lambda*C}
            const std::size_t ker = p.cols() - rank(hstack(p, lam_tgt)) + rank(lam_tgt);
            std::size_t img;
            if (i == 0)
                img = rank(lam_src);
            else
                img = rank(hstack(component_matrix(complex[i - 1], d), lam_src));
            if (ker != img) return false;
        }
    }
    return true;
}

namespace {

std::size_t component_rank(const QMatrix& a, RankMode mode) {
    if (mode == RankMode::Modular)
        if (auto r = rank_mod_p(a)) return *r;
    return rank(a);
}

}  // namespace

std::vector<long long> hilbert_function_coker(const HomogeneousMap& phi, const std::vector<int>& degrees,
                                              RankMode mode) {
    std::vector<long long> h;
    for (int j : degrees) {
        const QMatrix a = component_matrix(phi, j);
        h.push_back(static_cast<long long>(a.rows()) - static_cast<long long>(component_rank(a, mode)));
    }
    return h;
}

std::vector<long long> hilbert_function_ker(const HomogeneousMap& phi, const std::vector<int>& degrees,
                                            RankMode mode) {
    std::vector<long long> h;
    for (int j : degrees) {
        const QMatrix a = component_matrix(phi, j);
        h.push_back(static_cast<long long>(a.cols()) - static_cast<long long>(component_rank(a, mode)));
    }
    return h;
}

}  // namespace kwm
