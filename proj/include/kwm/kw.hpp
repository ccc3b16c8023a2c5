#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwm/grmod.hpp"
#include "kwm/pencil.hpp"
#include "kwm/poly.hpp"

namespace kwm {

class NotKwError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ImproperError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BehaviorMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when two routes that must agree do not.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// AR representation R(d) w = 0 over S. Rows are nonzero; an ARModel with
/// no rows stands for the free behavior (every trajectory).
class ARModel {
public:
    ARModel() = default;
    explicit ARModel(PolyMatrix r);
    static ARModel free_behavior(int n, std::size_t q);

    int n() const { return r_.n(); }
    std::size_t q() const { return r_.cols(); }
    std::size_t p() const { return r_.rows(); }
    bool is_free() const { return r_.rows() == 0; }
    const PolyMatrix& matrix() const { return r_; }
    const std::vector<int>& row_degrees() const { return degrees_; }
    int max_degree() const;

    bool operator==(const ARModel& o) const { return r_.n() == o.r_.n() && r_ == o.r_; }

private:
    PolyMatrix r_;
    std::vector<int> degrees_;
};

/// X --(K,L)--> Y <--M-- F^q with a KW pencil. `blocks` lists the Jordan
/// indices; when the pencil equals kw_pencil(n, blocks) the model is in
/// canonical form.
class KWModel {
public:
    KWModel() = default;
    /// Checks the dimension formulas for `blocks` and the shape of M.
    KWModel(Pencil pencil, QMatrix m, std::vector<int> blocks);

    const Pencil& pencil() const { return pencil_; }
    const QMatrix& m() const { return m_; }
    const std::vector<int>& blocks() const { return blocks_; }
    KroneckerIndices indices() const { return KroneckerIndices(blocks_); }
    int n() const { return pencil_.n(); }
    std::size_t q() const { return m_.cols(); }
    std::size_t dim_x() const { return pencil_.dim_x(); }
    std::size_t dim_y() const { return pencil_.dim_y(); }
    bool is_canonical() const;

    bool operator==(const KWModel&) const = default;

private:
    Pencil pencil_;
    QMatrix m_;
    std::vector<int> blocks_;
};

/// Builds a model from an arbitrary pencil, recovering its indices.
KWModel model_from_pencil(const Pencil& pencil, const QMatrix& m, int dmax, const SimilarityOptions& opts = {});

/// Returns an equivalent canonical model (pencil = KW(sorted indices),
/// M transported by the similarity U). Throws NotKwError.
KWModel canonicalize(const KWModel& model, const SimilarityOptions& opts = {});

/// KW(R) = (KW(a), H^0(R)). `degrees` may raise the row degrees above the
/// exact ones.
KWModel kw_of_ar(const ARModel& r, const std::optional<std::vector<int>>& degrees = std::nullopt);

/// Row k of R is phi applied to block k of M. Zero rows are dropped; if
/// nothing is left the free behavior is returned.
ARModel eliminate(const KWModel& model, const SimilarityOptions& opts = {});

/// Canonical handle of a behavior: the reduced Groebner basis of the row
/// module of R in S^q.
struct BehaviorHandle {
    int n = 0;
    std::size_t q = 0;
    SubmoduleGB rowmodule;

    bool operator==(const BehaviorHandle& o) const {
        return n == o.n && q == o.q && rowmodule.same_submodule(o.rowmodule);
    }
};

BehaviorHandle behavior_handle(const ARModel& r);

/// Basis of {w : deg w <= D, R(d) w = 0}.
std::vector<Trajectory> poly_solutions(const ARModel& r, int D);

struct LatentMembership {
    bool member = false;
    /// Latent trajectory with dim_x components solving K d(x) - L x = M w.
    std::optional<Trajectory> latent;
    int latent_degree = -1;
};

/// Searches for a polynomial latent trajectory of degree <= latent_bound,
/// trying increasing degrees.
LatentMembership kw_behavior_membership(const KWModel& model, const Trajectory& w, int latent_bound);

/// K d(x) - L x - M w, evaluated symbolically.
Trajectory latent_residual(const KWModel& model, const Trajectory& x, const Trajectory& w);

/// Basis of the manifest trajectories {w : deg w <= D, exists x with
/// deg x <= latent_bound and K d(x) - L x = M w}.
std::vector<Trajectory> manifest_solutions(const KWModel& model, int D, int latent_bound);

struct Theorem1Report {
    bool passed = false;
    int degree_bound = 0;
    int latent_bound = 0;
    std::size_t solutions = 0;       ///< dim of poly_solutions(r, D)
    std::size_t witnesses_verified = 0;
    std::size_t manifest_checked = 0;  ///< manifest basis elements checked against R
    std::string failure;
};

/// Both inclusions between ker R(d) and the manifest behavior of KW(R) on
/// polynomial trajectories of degree <= D. latent_bound defaults to
/// D + max index + 1.
Theorem1Report theorem1_check(const ARModel& r, int D, std::optional<int> latent_bound = std::nullopt);

/// T^q -> (+) T(d_k), row k homogenizing block k of M to degree d_k.
HomogeneousMap m_tilde(const KWModel& model, const SimilarityOptions& opts = {});

/// [sK - s0 L | M] : T(-1) (x) X (+) T^q -> T (x) Y.
HomogeneousMap properness_map(const KWModel& model);

struct ProperReport {
    bool proper = false;
    bool direct = false;   ///< regular_at_infinity of properness_map
    bool reduced = false;  ///< regular_at_infinity of m_tilde
};

/// Both routes, without asserting agreement. `proper` follows the direct
/// route, which is the definition.
ProperReport properness_routes(const KWModel& model, const SimilarityOptions& opts = {});

/// Evaluates both routes and throws InternalConsistencyError if they differ.
ProperReport is_proper(const KWModel& model, const SimilarityOptions& opts = {});

/// homogenize(R, exact degrees) is regular at infinity.
bool is_proper_ar(const ARModel& r);

/// d -> number of rows of degree d.
struct GammaFunction {
    std::map<int, long long> counts;
    long long operator()(int d) const;
    bool operator==(const GammaFunction&) const = default;
};

GammaFunction gamma_of_ar(const ARModel& r);
/// (sum gamma(d) dimX^(d), sum gamma(d) C(n+d, d)).
std::pair<long long, long long> mu_nu(const GammaFunction& g, int n);

struct MinimizeResult {
    ARModel model;
    std::string status = "HEURISTIC_MINIMUM";
    int replacements = 0;
    int removals = 0;
};

/// Greedy reduction inside the row module: drops redundant rows and swaps
/// rows for lower-degree ones, keeping the behavior handle and properness. Throws ImproperError on improper input.
/// degree_budget defaults to the max row degree of r.
MinimizeResult minimize_ar(const ARModel& r, std::optional<int> degree_budget = std::nullopt);

struct Theorem2Report {
    long long mu_hat = 0;
    long long nu_hat = 0;
    long long dim_x = 0;
    long long dim_y = 0;
    bool proper = false;        ///< direct route
    bool routes_agree = true;   ///< direct and reduced properness routes agree
    bool mu_bound = false;    ///< mu_hat <= dim_x
    bool nu_bound = false;    ///< nu_hat <= dim_y
    bool equivalence = false; ///< (mu_hat == dim_x) <=> (nu_hat == dim_y)
    bool minimal = false;     ///< both equalities
    std::string reference;    ///< which AR model was minimized
    GammaFunction gamma;
    /// mu_hat and nu_hat come from a heuristic minimizer: upper bounds on
    /// the true mu(B), nu(B).
    bool heuristic = true;
};

/// Compares the model against the best known minimal proper representation
/// of the behavior of r_ref. Throws ImproperError if the model is improper
/// (unless require_proper is false) and BehaviorMismatchError if the model
/// does not realize the behavior of r_ref.
Theorem2Report theorem2_check(const ARModel& r_ref, const KWModel& model, bool require_proper = true,
                              const SimilarityOptions& opts = {});

/// Similarity of models: (sK' - L')V = U(sK - L) and M' = U M.
SimilarityResult models_similar(const KWModel& from, const KWModel& to, const SimilarityOptions& opts = {});

}  // namespace kwm
