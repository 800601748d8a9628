#pragma once

#include <utpc/matrix.hpp>

#include <span>
#include <string>
#include <vector>

namespace utpc {

// Exact matrix identities behind the extraction and construction arguments,
// each evaluated with no tolerance. All index arguments are 1-based and the
// ranges are the ones under which the identities are claimed.

/// [t_{1i}(-1), a] = t_{1i}(-1)(e + a_{*1} a'_{i*}) and
/// [[t_{1i}(-1), a], t_{j,j+1}(1)] = t_{1,j+1}(a'_{ij}), for 2 <= i, j <= n-1.
bool check_first_column_extraction(const UTElement & a, int i, int j);

/// [t_{jn}(-1), a] = t_{jn}(-1)(e + a_{*j} a'_{n*}) and
/// [t_{i-1,i}(1), [t_{jn}(-1), a]] = t_{i-1,n}(a_{ij}), for 2 <= i, j <= n-1.
bool check_last_row_extraction(const UTElement & a, int i, int j);

/// With y = t_{k+1,k+2}(beta) prod_{i<k} t_{ik}(alpha_i), the commutator
/// [t_{j,j+1}(-1), y] equals t_{k+1,k+3}(beta) when j = k+2 and e for every
/// other j > k. Needs k <= n-3, k < j <= n-1, alphas of length k-1.
bool check_superdiagonal_collapse(int n, const Field & f, int k, const FieldElem & beta,
    std::span<const FieldElem> alphas, int j);

/// [y, t_{k,k+1}(-1)] = prod_{i<k} (t_{i,k+1}(-alpha_i) t_{i,k+2}(alpha_i beta)) t_{k,k+2}(beta)
/// and its commutator with t_{k+2,k+3}(1) equals
/// prod_{i<k} t_{i,k+3}(alpha_i beta) t_{k,k+3}(beta). Needs 2 <= k <= n-3.
bool check_column_product_construction(int n, const Field & f, int k, const FieldElem & beta,
    std::span<const FieldElem> alphas);

/// Substituting beta = gamma_k, alpha_i = gamma_i / gamma_k above reproduces
/// the target prod_{i<=k} t_{i,k+3}(gamma_i) exactly. Needs gamma_k != 0.
bool check_column_product_target(int n, const Field & f, int k, std::span<const FieldElem> gammas);

/// [a, t_{k+1,k+2}(1)] = (e + a_{*,k+1} a'_{k+2,*}) t_{k+1,k+2}(-1), the
/// containment of that commutator in prod_i t_{i,k+2}(a_{i,k+1}) UP_{k+2},
/// and [[a, t_{k+1,k+2}(1)], t_{k+2,k+3}(1)] = prod_{i<=k} t_{i,k+3}(a_{i,k+1}).
/// Needs 1 <= k <= n-3.
bool check_column_extraction(const UTElement & a, int k);

/// For a = (1 u; 0 e) and any b, the commutator [a, b] is (1 u(e - B^{-1}); 0 e)
/// with B the lower-right block of b. Needs n >= 4, u of length n-1.
bool check_first_row_block_commutator(int n, const Field & f, std::span<const FieldElem> u,
    const UTElement & b);

/// For u with u_1 = u_2 = 0,
/// [t_{12}(1), [t_{23}(1), prod_{i=4}^n t_{3i}(u_{i-1})]] = (1 u; 0 e).
bool check_first_row_double_commutator(int n, const Field & f, std::span<const FieldElem> u);

/// b t_{2n}(alpha b_{23}) t_{1,n-1}(beta b_{n-2,n-1}) is center-congruent to
/// the conjugate of b by t_{3n}(alpha) t_{1,n-2}(-beta). Needs n >= 4.
bool check_subcentral_conjugation_congruence(int n, const Field & f, const FieldElem & alpha,
    const FieldElem & beta, const UTElement & b);

/// [t_{12}(1), a] = t_{13}(a_{23}) in dimension 3.
bool check_dim3_extraction(const UTElement & a);

struct IdentityCheckReport {
    std::string name;
    long long instances = 0;
    long long failures = 0;
    bool passed() const { return failures == 0 && instances > 0; }
};

/// Runs every applicable identity check at the given (n, q). Exhaustive mode
/// sweeps all elements and parameter tuples (the group order must stay
/// within the bound); otherwise `samples` seeded random instances per check.
std::vector<IdentityCheckReport> run_identity_sweep(int n, const Field & f, bool exhaustive,
    int samples = 1000, uint64_t seed = 0);

/// Re-evaluates seeded random instances of every check after embedding all
/// matrix arguments into each larger dimension up to max_dim; reports
/// whether every truth value stayed true.
std::vector<IdentityCheckReport> run_embed_stability_sweep(int n, const Field & f, int samples,
    uint64_t seed, int max_dim = 12);

}
