#pragma once

#include <utpc/error.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace utpc {

class FieldElem;

/// A small Galois field F_q, q = p^k <= 256, with exact table-driven
/// arithmetic.
///
/// Elements are identified with their index in [0, q): the index is the
/// base-p encoding of the coefficient vector of the representative
/// polynomial, constant term fastest-varying. For prime fields the index is
/// the canonical residue itself.
///
/// The defining modulus is pinned per (p, k): the first monic irreducible
/// polynomial of degree k in index order. This yields x^2+x+1 for F_4,
/// x^3+x+1 for F_8 and x^2+1 for F_9, so serialized element indices mean the
/// same thing everywhere.
class Field {
public:
    Field(int p, int k);

    int characteristic() const { return p_; }
    int degree() const { return k_; }
    int order() const { return q_; }

    /// Monic defining polynomial, k+1 coefficients, constant term first.
    /// For k == 1 this is just x.
    const std::vector<int> & modulus() const { return modulus_; }

    FieldElem element(int index) const;
    FieldElem zero() const;
    FieldElem one() const;
    /// A fixed generator of the multiplicative group (smallest index).
    FieldElem generator() const;
    FieldElem from_int(long long value) const;  // canonical image of an integer

    // Index-level arithmetic used by hot loops; all arguments in [0, q).
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
    int neg(int a) const { return neg_[a]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int inv(int a) const;
    int frobenius(int a, int power) const;
    int pow(int a, long long e) const;

    bool operator==(const Field & other) const { return p_ == other.p_ && k_ == other.k_; }
    bool operator!=(const Field & other) const { return !(*this == other); }

private:
    int p_, k_, q_;
    std::vector<int> modulus_;
    std::vector<uint8_t> add_, mul_;   // q*q tables
    std::vector<uint8_t> neg_, inv_;   // q tables (inv_[0] unused)
    std::vector<uint8_t> exp_;         // g^i for i in [0, q-1)
    std::vector<int> log_;             // discrete log base g, log_[0] = -1
    int generator_ = 0;

    void check_axioms() const;
};

/// An element of a Field; an immutable value. Operations on elements of
/// different fields throw.
class FieldElem {
public:
    FieldElem() : field_(nullptr), idx_(0) {}
    FieldElem(const Field & f, int index) : field_(&f), idx_(index)
    {
        require(index >= 0 && index < f.order(), "field element index out of range");
    }

    int index() const { return idx_; }
    const Field & field() const
    {
        require(field_ != nullptr, "use of default-constructed FieldElem");
        return *field_;
    }

    bool is_zero() const { return idx_ == 0; }

    FieldElem operator+(const FieldElem & o) const { return make(field().add(idx_, same(o))); }
    FieldElem operator-(const FieldElem & o) const { return make(field().sub(idx_, same(o))); }
    FieldElem operator*(const FieldElem & o) const { return make(field().mul(idx_, same(o))); }
    FieldElem operator/(const FieldElem & o) const { return make(field().mul(idx_, field().inv(same(o)))); }
    FieldElem operator-() const { return make(field().neg(idx_)); }
    FieldElem inverse() const { return make(field().inv(idx_)); }
    FieldElem pow(long long e) const { return make(field().pow(idx_, e)); }

    bool operator==(const FieldElem & o) const { return idx_ == same(o); }
    bool operator!=(const FieldElem & o) const { return !(*this == o); }

private:
    const Field * field_;
    int idx_;

    FieldElem make(int idx) const { return FieldElem(field(), idx); }
    int same(const FieldElem & o) const
    {
        require(o.field_ != nullptr && *field_ == *o.field_, "operands belong to different fields");
        return o.idx_;
    }
};

/// x^(p^i), the i-th Frobenius power. i is reduced mod k.
FieldElem frobenius(const FieldElem & x, int power);

/// Shared, cached field instances keyed by (p, k).
std::shared_ptr<const Field> get_field(int p, int k);

/// Factor q into (p, k) with p prime; throws if q is not a prime power.
std::pair<int, int> prime_power(int q);

}
