#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kwm/exactq.hpp"
#include "kwm/grmod.hpp"
#include "kwm/poly.hpp"

namespace kwm {

/// Linear data X --(K_1..K_n, L)--> Y. Every matrix is dim_y x dim_x.
class Pencil {
public:
    Pencil() = default;
    Pencil(int n, std::vector<QMatrix> k, QMatrix l);
    /// The pencil with dim_x = dim_y = 0.
    static Pencil empty(int n);

    int n() const { return n_; }
    std::size_t dim_x() const { return l_.cols(); }
    std::size_t dim_y() const { return l_.rows(); }
    const std::vector<QMatrix>& k() const { return k_; }
    const QMatrix& k(int i) const { return k_.at(static_cast<std::size_t>(i - 1)); }
    const QMatrix& l() const { return l_; }

    /// sK - L over S.
    PolyMatrix affine_matrix() const;
    /// sK - s0 L over T.
    PolyMatrix homogeneous_matrix() const;
    /// X (x) T(-1) -> Y (x) T given by sK - s0 L.
    HomogeneousMap homogeneous_map() const;

    /// (K', L') = (U K V^-1, U L V^-1).
    Pencil conjugate(const QMatrix& u, const QMatrix& v) const;

    bool operator==(const Pencil&) const = default;

private:
    int n_ = 0;
    std::vector<QMatrix> k_;
    QMatrix l_;
};

/// Jordan pencil of index d. basis_x holds the basis of X^(d) as columns in
/// (F^Delta(d))^n coordinates, block i for the i-th component.
struct JordanPencil {
    int n = 0;
    int d = 0;
    QMatrix basis_x;
    Pencil pencil;
};

JordanPencil jordan_pencil(int n, int d);

/// (n d / (d+1)) C(n+d, d) and C(n+d, d).
std::pair<long long, long long> jordan_dims(int n, int d);

/// 0 -> X^(d) -> (S_{<=d})^{n+1} -> S_{<=d+1} -> 0 is exact.
bool verify_sequence4(int n, int d);

struct DualSequenceReport {
    bool over_t = false;
    bool over_s = false;
};

/// 0 -> T(-d) -> F^Delta(d) (x) T -> X^(d)* (x) T(1) is exact in degrees
/// <= max_degree, and the same after tensoring with S.
DualSequenceReport dual_sequence_report(int n, int d, int max_degree);
bool verify_dual_sequence(int n, int d, int max_degree);

Pencil direct_sum(const std::vector<Pencil>& pencils);
/// KW(blocks): direct sum of Jordan pencils in the given order.
Pencil kw_pencil(int n, const std::vector<int>& blocks);

/// Multiset of Kronecker indices, sorted descending.
struct KroneckerIndices {
    std::vector<int> values;

    KroneckerIndices() = default;
    explicit KroneckerIndices(std::vector<int> v);
    std::size_t size() const { return values.size(); }
    bool operator==(const KroneckerIndices&) const = default;
    std::string to_string() const;
};

enum class Verdict { Similar, NotSimilar, Inconclusive };
std::string to_string(Verdict v);

/// (sK' - L') V = U (sK - L); for models additionally M' = U M.
struct SimilarityWitness {
    QMatrix u;
    QMatrix v;
};

struct SimilarityResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<SimilarityWitness> witness;
    std::string reason;
    /// Dimension of the solution space of the linear intertwining constraints.
    std::size_t solution_dim = 0;
};

struct SimilarityOptions {
    int trials = 50;
    std::uint64_t seed = 0;
};

SimilarityResult similar(const Pencil& from, const Pencil& to, const SimilarityOptions& opts = {});

/// Similarity with an extra external map: to_m = U from_m.
SimilarityResult similar_with_external(const Pencil& from, const QMatrix& from_m, const Pencil& to,
                                       const QMatrix& to_m, const SimilarityOptions& opts = {});

bool verify_witness(const Pencil& from, const Pencil& to, const SimilarityWitness& w);

struct IndexExtraction {
    bool is_kw = false;
    /// The candidate indices fit but the similarity search ran out of trials.
    bool inconclusive = false;
    KroneckerIndices indices;
    std::vector<long long> hilbert_coker;   ///< of sK - s0L, degrees 0..dmax
    std::vector<long long> hilbert_kernel;  ///< of its dual, degrees 0..dmax
    std::vector<long long> multiplicities;  ///< m_0..m_dmax
    /// Maps the input pencil onto kw_pencil(n, indices.values).
    std::optional<SimilarityWitness> witness;
    std::string reason;
};

/// Reads the Kronecker indices off the kernel of the dual homogeneous map
/// (a free module with one generator of degree d per index-d block) and
/// confirms them by exhibiting a similarity with the canonical direct sum.
/// Largest index a block of the pencil can have: max d with C(n+d, d) <= dim Y.
int index_bound(const Pencil& p);

IndexExtraction extract_indices(const Pencil& p, int dmax, const SimilarityOptions& opts = {});

}  // namespace kwm
