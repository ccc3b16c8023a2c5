#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kwm/poly.hpp"

namespace kwm {

enum class Ring { S, T };

/// T^l(a) (or S^l(a)): component d of summand i is the homogeneous
/// polynomials of degree d + a_i.
struct GradedFreeModule {
    Ring ring = Ring::T;
    int n = 0;
    std::vector<int> shifts;

    static GradedFreeModule free(Ring ring, int n, std::size_t rank) {
        return {ring, n, std::vector<int>(rank, 0)};
    }

    std::size_t rank() const { return shifts.size(); }
    /// T(k)^* = T(-k) summandwise.
    GradedFreeModule dual() const;
    std::size_t component_dim(int d) const;
    bool operator==(const GradedFreeModule&) const = default;
};

/// An element of a free module, one polynomial per summand.
using ModuleVector = std::vector<Poly>;

ModuleVector zero_vector(int n, std::size_t rank);
bool is_zero(const ModuleVector& v);
ModuleVector operator+(const ModuleVector& a, const ModuleVector& b);
ModuleVector operator-(const ModuleVector& a, const ModuleVector& b);
ModuleVector operator*(const Poly& c, const ModuleVector& v);
/// Degree of a homogeneous element of `m`, nullopt for zero or inhomogeneous v.
std::optional<int> homogeneous_degree(const ModuleVector& v, const GradedFreeModule& m);

/// Degree-preserving map given by a target.rank() x source.rank() matrix:
/// deg Q_ij = target.shifts[i] - source.shifts[j] for every nonzero entry.
struct HomogeneousMap {
    GradedFreeModule source;
    GradedFreeModule target;
    PolyMatrix matrix;

    /// Validates shapes and degree compatibility; throws std::invalid_argument.
    HomogeneousMap(GradedFreeModule source, GradedFreeModule target, PolyMatrix matrix);

    /// Transposed matrix between the dual modules.
    HomogeneousMap dual() const;
    /// Tensor with S = T/s0T.
    HomogeneousMap to_s() const;
};

/// Reduced Groebner basis of a submodule, position-over-term with grevlex
/// inside each position and lower positions ranking first.
class SubmoduleGB {
public:
    SubmoduleGB(GradedFreeModule ambient, std::vector<ModuleVector> generators,
                std::vector<ModuleVector> reduced_basis)
        : ambient_(std::move(ambient)), generators_(std::move(generators)), basis_(std::move(reduced_basis)) {}

    const GradedFreeModule& ambient() const { return ambient_; }
    const std::vector<ModuleVector>& generators() const { return generators_; }
    const std::vector<ModuleVector>& reduced_basis() const { return basis_; }
    bool is_zero() const { return basis_.empty(); }
    /// Submodule equality: identical reduced bases.
    bool same_submodule(const SubmoduleGB& o) const;

private:
    GradedFreeModule ambient_;
    std::vector<ModuleVector> generators_;
    std::vector<ModuleVector> basis_;
};

SubmoduleGB module_gb(const std::vector<ModuleVector>& gens, const GradedFreeModule& ambient);

ModuleVector normal_form(const ModuleVector& v, const SubmoduleGB& gb);

struct Membership {
    bool member = false;
    /// v = sum cofactors[i] * generators[i] when member.
    std::optional<std::vector<Poly>> cofactors;
};

Membership membership(const ModuleVector& v, const SubmoduleGB& gb, bool want_certificate = true);

/// Syzygy module {c : sum c_i gens_i = 0} inside T^m, graded so that e_i has
/// the degree of gens_i when the generators are homogeneous.
SubmoduleGB syzygies(const std::vector<ModuleVector>& gens, const GradedFreeModule& ambient);

/// (N : s0) = {v : s0 v in N}.
SubmoduleGB colon_s0(const SubmoduleGB& nsub);

/// Image of the dual map inside the dual of the source.
SubmoduleGB dual_image(const HomogeneousMap& phi);

/// s0 is a nonzerodivisor on F^* / phi^*(G^*).
bool regular_at_infinity(const HomogeneousMap& phi);

/// Monomial basis of a graded component: (summand, monomial) pairs.
std::vector<std::pair<std::size_t, Monomial>> component_basis(const GradedFreeModule& m, int d);
/// Matrix of phi restricted to degree-d components, in component_basis order.
QMatrix component_matrix(const HomogeneousMap& phi, int d);
/// Multiplication by homogeneous lambda from m_{d - deg lambda} into m_d.
QMatrix multiplication_matrix(const GradedFreeModule& m, const Poly& lambda, int d);
/// Coordinates of a homogeneous element of degree d in component_basis(m, d).
QMatrix component_coordinates(const ModuleVector& v, const GradedFreeModule& m, int d);

/// `complex` lists F_l -> F_{l-1}, ..., F_1 -> F_0 in that order. Checks
/// exactness of the complex reduced modulo lambda at F_l, ..., F_1 in every
/// graded degree up to D. Throws std::invalid_argument if consecutive maps
/// do not compose to zero or do not chain.
bool exactness_mod_lambda(const std::vector<HomogeneousMap>& complex, const Poly& lambda, int D);
/// Max shift magnitude plus max entry degree plus 4.
int default_exactness_bound(const std::vector<HomogeneousMap>& complex);

/// Modular ranks are fast but may undercount; callers must verify.
enum class RankMode { Exact, Modular };

/// dim G_j - rank(phi_j) for each requested degree j.
std::vector<long long> hilbert_function_coker(const HomogeneousMap& phi, const std::vector<int>& degrees,
                                              RankMode mode = RankMode::Exact);
/// dim F_j - rank(phi_j) for each requested degree j.
std::vector<long long> hilbert_function_ker(const HomogeneousMap& phi, const std::vector<int>& degrees,
                                            RankMode mode = RankMode::Exact);

std::string to_string(const ModuleVector& v);

}  // namespace kwm
