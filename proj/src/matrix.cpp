#include <utpc/matrix.hpp>

namespace utpc {

UTElement::UTElement(int n, const Field & f) : n_(n), field_(&f)
{
    require(n >= 2, "dimension must be >= 2");
    entries_.assign(n * (n - 1) / 2, 0);
}

UTElement UTElement::transvection(int n, int i, int j, const FieldElem & alpha)
{
    require(i >= 1 && i < j && j <= n, "transvection needs 1 <= i < j <= n");
    UTElement t(n, alpha.field());
    t.set_entry(i, j, alpha);
    return t;
}

int UTElement::entry_idx(int i, int j) const
{
    require(i >= 1 && i <= n_ && j >= 1 && j <= n_, "entry index out of range");
    if (i == j)
        return 1;
    if (i > j)
        return 0;
    return entries_[slot(i, j)];
}

void UTElement::set_entry(int i, int j, const FieldElem & v)
{
    require(v.field() == *field_, "entry from a different field");
    set_entry_idx(i, j, v.index());
}

void UTElement::set_entry_idx(int i, int j, int v)
{
    require(i >= 1 && i < j && j <= n_, "only strictly-upper entries are settable");
    entries_[slot(i, j)] = uint8_t(v);
}

void UTElement::check_same(const UTElement & o) const
{
    require(n_ == o.n_, "dimension mismatch");
    require(*field_ == *o.field_, "field mismatch");
}

UTElement UTElement::operator*(const UTElement & o) const
{
    check_same(o);
    const Field & f = *field_;
    UTElement r(n_, f);
    for (int i = 1; i <= n_; ++i)
        for (int j = i + 1; j <= n_; ++j) {
            int acc = f.add(entries_[slot(i, j)], o.entries_[slot(i, j)]);
            for (int l = i + 1; l < j; ++l)
                acc = f.add(acc, f.mul(entries_[slot(i, l)], o.entries_[slot(l, j)]));
            r.entries_[r.slot(i, j)] = uint8_t(acc);
        }
    return r;
}

UTElement UTElement::inverse() const
{
    const Field & f = *field_;
    // nil = e - a, strictly upper and nilpotent
    UTElement nil(n_, f);
    for (size_t t = 0; t < entries_.size(); ++t)
        nil.entries_[t] = uint8_t(f.neg(entries_[t]));

    UTElement acc = nil;  // will hold sum_{k>=1} nil^k
    UTElement term = nil;
    for (int k = 2; k < n_; ++k) {
        // term <- term * nil, strictly-upper product without diagonal mixing
        UTElement next(n_, f);
        for (int i = 1; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j) {
                int v = 0;
                for (int l = i + 1; l < j; ++l)
                    v = f.add(v, f.mul(term.entries_[slot(i, l)], nil.entries_[slot(l, j)]));
                next.entries_[next.slot(i, j)] = uint8_t(v);
            }
        term = next;
        for (size_t t = 0; t < entries_.size(); ++t)
            acc.entries_[t] = uint8_t(f.add(acc.entries_[t], term.entries_[t]));
    }
    return acc;  // e + acc, with e implicit
}

bool UTElement::is_identity() const
{
    for (uint8_t e : entries_)
        if (e != 0)
            return false;
    return true;
}

bool UTElement::operator==(const UTElement & o) const
{
    return n_ == o.n_ && *field_ == *o.field_ && entries_ == o.entries_;
}

bool UTElement::operator<(const UTElement & o) const
{
    check_same(o);
    return entries_ < o.entries_;
}

UTElement commutator(const UTElement & a, const UTElement & b)
{
    return a * b * a.inverse() * b.inverse();
}

bool in_derived(const UTElement & a)
{
    for (int i = 1; i < a.dim(); ++i)
        if (a.entry_idx(i, i + 1) != 0)
            return false;
    return true;
}

bool in_second_derived_shape(const UTElement & a)
{
    if (!in_derived(a))
        return false;
    for (int i = 1; i + 2 <= a.dim(); ++i)
        if (a.entry_idx(i, i + 2) != 0)
            return false;
    return true;
}

bool center_congruent(const UTElement & a, const UTElement & b)
{
    require(a.dim() == b.dim() && a.field() == b.field(), "operand mismatch");
    int n = a.dim();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (!(i == 1 && j == n) && a.entry_idx(i, j) != b.entry_idx(i, j))
                return false;
    return true;
}

bool second_center_congruent(const UTElement & a, const UTElement & b)
{
    require(a.dim() == b.dim() && a.field() == b.field(), "operand mismatch");
    int n = a.dim();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            bool off = (i == 1 && j == n - 1) || (i == 1 && j == n) || (i == 2 && j == n);
            if (!off && a.entry_idx(i, j) != b.entry_idx(i, j))
                return false;
        }
    return true;
}

bool higher_center_member(const UTElement & a, int m)
{
    require(m >= 1, "center level must be >= 1");
    int n = a.dim();
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (j - i <= n - 1 - m && a.entry_idx(i, j) != 0)
                return false;
    return true;
}

bool in_UP_k(const UTElement & a, int k)
{
    require(k >= 1 && k < a.dim(), "block index must satisfy 1 <= k < n");
    for (int i = k + 1; i <= a.dim(); ++i)
        for (int j = i + 1; j <= a.dim(); ++j)
            if (a.entry_idx(i, j) != 0)
                return false;
    return true;
}

bool in_UT_last_col_trivial(const UTElement & a)
{
    int n = a.dim();
    for (int i = 1; i < n; ++i)
        if (a.entry_idx(i, n) != 0)
            return false;
    return true;
}

UTElement embed(const UTElement & a, int n2)
{
    require(n2 >= a.dim(), "cannot embed into a smaller dimension");
    UTElement r(n2, a.field());
    for (int i = 1; i <= a.dim(); ++i)
        for (int j = i + 1; j <= a.dim(); ++j)
            r.set_entry_idx(i, j, a.entry_idx(i, j));
    return r;
}

TriangularInvertible::TriangularInvertible(std::vector<FieldElem> diag, UTElement unipotent) :
    unipotent_(std::move(unipotent))
{
    require(int(diag.size()) == unipotent_.dim(), "diagonal length must equal the dimension");
    diag_.reserve(diag.size());
    for (const FieldElem & d : diag) {
        require(d.field() == unipotent_.field(), "diagonal entry from a different field");
        require(!d.is_zero(), "diagonal entries must be nonzero");
        diag_.push_back(uint8_t(d.index()));
    }
}

TriangularInvertible TriangularInvertible::diagonal(const Field & f, const std::vector<FieldElem> & diag)
{
    return TriangularInvertible(diag, UTElement(int(diag.size()), f));
}

TriangularInvertible TriangularInvertible::from_unipotent(const UTElement & u)
{
    std::vector<FieldElem> diag(u.dim(), u.field().one());
    return TriangularInvertible(diag, u);
}

UTElement TriangularInvertible::conjugate(const UTElement & a) const
{
    require(a.dim() == dim() && a.field() == field(), "operand mismatch");
    const Field & f = field();
    UTElement inner = unipotent_ * a * unipotent_.inverse();
    UTElement r(dim(), f);
    for (int i = 1; i <= dim(); ++i)
        for (int j = i + 1; j <= dim(); ++j)
            r.set_entry_idx(i, j, f.mul(f.mul(diag_[i - 1], inner.entry_idx(i, j)), f.inv(diag_[j - 1])));
    return r;
}

TriangularInvertible TriangularInvertible::inverse() const
{
    const Field & f = field();
    // (d u)^{-1} = u^{-1} d^{-1} = d^{-1} * (d u^{-1} d^{-1})
    std::vector<FieldElem> dinv;
    dinv.reserve(diag_.size());
    for (uint8_t d : diag_)
        dinv.push_back(FieldElem(f, f.inv(d)));
    UTElement ui = unipotent_.inverse();
    UTElement conj(dim(), f);
    for (int i = 1; i <= dim(); ++i)
        for (int j = i + 1; j <= dim(); ++j)
            conj.set_entry_idx(i, j, f.mul(f.mul(diag_[i - 1], ui.entry_idx(i, j)), f.inv(diag_[j - 1])));
    return TriangularInvertible(dinv, conj);
}

TriangularInvertible TriangularInvertible::operator*(const TriangularInvertible & o) const
{
    const Field & f = field();
    require(dim() == o.dim() && f == o.field(), "operand mismatch");
    // (d1 u1)(d2 u2) = (d1 d2) (d2^{-1} u1 d2) u2
    std::vector<FieldElem> d;
    d.reserve(diag_.size());
    for (size_t i = 0; i < diag_.size(); ++i)
        d.push_back(FieldElem(f, f.mul(diag_[i], o.diag_[i])));
    UTElement mid(dim(), f);
    for (int i = 1; i <= dim(); ++i)
        for (int j = i + 1; j <= dim(); ++j)
            mid.set_entry_idx(i, j, f.mul(f.mul(f.inv(o.diag_[i - 1]), unipotent_.entry_idx(i, j)), o.diag_[j - 1]));
    return TriangularInvertible(d, mid * o.unipotent());
}

InverseView::InverseView(const UTElement & source) : source_(source), inverse_(source.inverse())
{
    require((source_ * inverse_).is_identity(), "inverse verification failed");
}

}
