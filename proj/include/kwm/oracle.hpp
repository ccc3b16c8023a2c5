#pragma once

#include <vector>

#include "kwm/grmod.hpp"
#include "kwm/kw.hpp"

namespace kwm::oracle {

/// Columns are coefficient vectors of every monomial multiple m*g of the
/// generators with deg(m*g) <= D, in the coordinates of (ring_{<=D})^rank.
struct TruncatedSpan {
    std::size_t rank = 0;
    int degree_bound = 0;
    std::vector<Monomial> monomials;
    QMatrix basis;

    QMatrix coordinates(const ModuleVector& v) const;
};

TruncatedSpan truncated_span(const std::vector<ModuleVector>& gens, Ring ring, int n, std::size_t rank, int D);

/// v is a rational combination of monomial multiples (degree <= D) of gens.
/// `true` is a certificate; `false` is exact only for large enough D.
bool truncated_membership(const ModuleVector& v, const std::vector<ModuleVector>& gens, Ring ring, int n, int D);

enum class RegularityVerdict { RegularUpToD, ZeroDivisorFound };

struct RegularityReport {
    RegularityVerdict verdict = RegularityVerdict::RegularUpToD;
    /// Degree whose quotient component receives a nonzero s0-multiple of zero.
    int degree = 0;
};

/// Multiplication by s0 on (T^r(shifts)/N)_j, checked for injectivity in
/// every degree j <= D. N is generated by homogeneous gens.
RegularityReport truncated_s0_regularity(const std::vector<ModuleVector>& gens, const std::vector<int>& shifts, int n,
                                         int D);

/// Kernel of R(d) on trajectories of degree <= D from one dense system
/// built with the factorial formula for d^alpha t^beta.
std::vector<Trajectory> dense_diff_kernel(const ARModel& r, int D);

/// Both lists span the same space of trajectories.
bool same_span(const std::vector<Trajectory>& a, const std::vector<Trajectory>& b, int n, std::size_t q);

}  // namespace kwm::oracle
