#pragma once

#include <utpc/field.hpp>

#include <cstdint>
#include <vector>

namespace utpc {

/// An element of UT(n, F_q): n x n upper unitriangular matrix with exact
/// field entries. Only the n(n-1)/2 strictly-upper entries are stored, row
/// major; the diagonal is implicitly 1. All index arguments are 1-based.
class UTElement {
public:
    UTElement(int n, const Field & f);  // identity

    static UTElement identity(int n, const Field & f) { return UTElement(n, f); }
    /// t_{ij}(alpha) = e + alpha e_{ij}, 1 <= i < j <= n.
    static UTElement transvection(int n, int i, int j, const FieldElem & alpha);

    int dim() const { return n_; }
    const Field & field() const { return *field_; }

    /// Entry (i, j) for any 1 <= i, j <= n (0 below the diagonal, 1 on it).
    FieldElem entry(int i, int j) const { return FieldElem(*field_, entry_idx(i, j)); }
    int entry_idx(int i, int j) const;
    void set_entry(int i, int j, const FieldElem & v);
    void set_entry_idx(int i, int j, int v);

    UTElement operator*(const UTElement & o) const;
    /// Exact inverse via the Neumann series of the nilpotent part:
    /// a^{-1} = sum_{k=0}^{n-1} (e-a)^k.
    UTElement inverse() const;

    bool is_identity() const;
    bool operator==(const UTElement & o) const;
    bool operator!=(const UTElement & o) const { return !(*this == o); }
    /// Lexicographic order on the row-major entry vector.
    bool operator<(const UTElement & o) const;

    const std::vector<uint8_t> & entries() const { return entries_; }
    int storage_size() const { return int(entries_.size()); }

private:
    int n_;
    const Field * field_;
    std::vector<uint8_t> entries_;

    int slot(int i, int j) const { return (i - 1) * n_ - i * (i - 1) / 2 + (j - i - 1); }
    void check_same(const UTElement & o) const;
};

UTElement commutator(const UTElement & a, const UTElement & b);

/// a_{i,i+1} = 0 for all i: membership in the derived subgroup.
bool in_derived(const UTElement & a);
/// First and second superdiagonals vanish: the double-commutator shape.
bool in_second_derived_shape(const UTElement & a);

/// a == b off position (1, n).
bool center_congruent(const UTElement & a, const UTElement & b);
/// a == b off positions (1, n-1), (1, n), (2, n).
bool second_center_congruent(const UTElement & a, const UTElement & b);

/// Membership in the m-th term of the upper central series, m >= 1, by the
/// positional criterion a_{ij} = 0 whenever j - i <= n - 1 - m. The
/// recursive quotient-center definition is the normative one; agreement is
/// established by brute force on small groups in the test suite.
bool higher_center_member(const UTElement & a, int m);

/// Rows below index k agree with the identity (block from (e_k *; 0 e)).
bool in_UP_k(const UTElement & a, int k);
/// Last column equals the last column of the identity.
bool in_UT_last_col_trivial(const UTElement & a);

/// Pad with identity rows/columns up to dimension n2 >= n. A group
/// homomorphism; realizes finitely supported elements of the
/// infinite-dimensional group.
UTElement embed(const UTElement & a, int n2);

/// An invertible upper triangular matrix T(n, F_q), stored as d * u with d
/// diagonal and u unitriangular. Acts on UT(n, F_q) by conjugation.
class TriangularInvertible {
public:
    TriangularInvertible(std::vector<FieldElem> diag, UTElement unipotent);
    static TriangularInvertible diagonal(const Field & f, const std::vector<FieldElem> & diag);
    static TriangularInvertible from_unipotent(const UTElement & u);

    int dim() const { return unipotent_.dim(); }
    const Field & field() const { return unipotent_.field(); }
    const std::vector<uint8_t> & diag() const { return diag_; }
    FieldElem diag_entry(int i) const { return FieldElem(field(), diag_[i - 1]); }
    const UTElement & unipotent() const { return unipotent_; }

    /// t a t^{-1}; the result is again unitriangular.
    UTElement conjugate(const UTElement & a) const;
    TriangularInvertible inverse() const;
    TriangularInvertible operator*(const TriangularInvertible & o) const;

private:
    std::vector<uint8_t> diag_;
    UTElement unipotent_;
};

/// Read-only view of the inverse of a fixed element, for formulas phrased
/// in terms of the primed entries a'_{ij}. The product source * source^{-1}
/// is recomputed and checked at construction.
class InverseView {
public:
    explicit InverseView(const UTElement & source);

    const UTElement & source() const { return source_; }
    const UTElement & inverse() const { return inverse_; }
    FieldElem entry(int i, int j) const { return inverse_.entry(i, j); }
    int entry_idx(int i, int j) const { return inverse_.entry_idx(i, j); }

private:
    UTElement source_, inverse_;
};

}
