#include <utpc/field.hpp>

#include <algorithm>
#include <map>
#include <mutex>

namespace utpc {

namespace {

bool is_prime(int p)
{
    if (p < 2)
        return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

// Polynomials over F_p, coefficient vectors with constant term first,
// possibly with trailing zeros.
using Poly = std::vector<int>;

int poly_deg(const Poly & a)
{
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0)
            return i;
    return -1;
}

// Remainder of a by monic b.
Poly poly_mod(Poly a, const Poly & b, int p)
{
    int db = poly_deg(b);
    for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
        int c = a[da];
        for (int i = 0; i <= db; ++i) {
            int & t = a[da - db + i];
            t = ((t - c * b[i]) % p + p) % p;
        }
    }
    return a;
}

Poly poly_mul(const Poly & a, const Poly & b, int p)
{
    Poly r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
}

Poly index_to_poly(int idx, int p, int len)
{
    Poly c(len, 0);
    for (int i = 0; i < len; ++i) {
        c[i] = idx % p;
        idx /= p;
    }
    return c;
}

int poly_to_index(const Poly & c, int p, int len)
{
    int idx = 0;
    for (int i = len - 1; i >= 0; --i)
        idx = idx * p + (i < int(c.size()) ? c[i] : 0);
    return idx;
}

// Trial division by every monic polynomial of degree 1..k/2.
bool is_irreducible(const Poly & m, int p, int k)
{
    for (int d = 1; 2 * d <= k; ++d) {
        int count = 1;
        for (int i = 0; i < d; ++i)
            count *= p;
        for (int idx = 0; idx < count; ++idx) {
            Poly div = index_to_poly(idx, p, d + 1);
            div[d] = 1;
            if (poly_deg(poly_mod(m, div, p)) < 0)
                return false;
        }
    }
    return true;
}

}

Field::Field(int p, int k) : p_(p), k_(k)
{
    require(is_prime(p), "field characteristic must be prime, got " + std::to_string(p));
    require(k >= 1, "extension degree must be >= 1");
    long long q = 1;
    for (int i = 0; i < k; ++i) {
        q *= p;
        require(q <= 256, "field order p^k exceeds 256");
    }
    q_ = int(q);

    // First monic irreducible of degree k in index order.
    modulus_.assign(k + 1, 0);
    modulus_[k] = 1;
    if (k > 1) {
        int lower = 1;
        for (int i = 0; i < k; ++i)
            lower *= p;
        bool found = false;
        for (int idx = 0; idx < lower; ++idx) {
            Poly m = index_to_poly(idx, p, k + 1);
            m[k] = 1;
            if (is_irreducible(m, p, k)) {
                modulus_ = m;
                found = true;
                break;
            }
        }
        require(found, "no irreducible modulus found");  // cannot happen
    }

    // Raw add/neg/mul from polynomial arithmetic.
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a) {
        Poly pa = index_to_poly(a, p_, k_);
        Poly na(k_);
        for (int i = 0; i < k_; ++i)
            na[i] = (p_ - pa[i]) % p_;
        neg_[a] = uint8_t(poly_to_index(na, p_, k_));
        for (int b = 0; b < q_; ++b) {
            Poly pb = index_to_poly(b, p_, k_);
            Poly s(k_);
            for (int i = 0; i < k_; ++i)
                s[i] = (pa[i] + pb[i]) % p_;
            add_[a * q_ + b] = uint8_t(poly_to_index(s, p_, k_));
            Poly m = poly_mod(poly_mul(pa, pb, p_), modulus_, p_);
            mul_[a * q_ + b] = uint8_t(poly_to_index(m, p_, k_));
        }
    }

    // Smallest-index generator of the multiplicative group.
    generator_ = 0;
    for (int g = 1; g < q_ && generator_ == 0; ++g) {
        int x = g, ord = 1;
        while (x != 1) {
            x = mul_[x * q_ + g];
            ++ord;
        }
        if (ord == q_ - 1)
            generator_ = g;
    }
    require(generator_ != 0, "multiplicative group is not cyclic");  // cannot happen

    exp_.resize(q_ - 1);
    log_.assign(q_, -1);
    int x = 1;
    for (int e = 0; e < q_ - 1; ++e) {
        exp_[e] = uint8_t(x);
        log_[x] = e;
        x = mul_[x * q_ + generator_];
    }
    for (int a = 1; a < q_; ++a)
        inv_[a] = exp_[(q_ - 1 - log_[a]) % (q_ - 1)];

    check_axioms();
}

void Field::check_axioms() const
{
    // Exhaustive for q <= 16, sampled diagonal slices above that.
    int step = q_ <= 16 ? 1 : 3;
    for (int a = 0; a < q_; a += step)
        for (int b = 0; b < q_; b += step) {
            require(add(a, b) == add(b, a) && mul(a, b) == mul(b, a), "commutativity failed");
            for (int c = 0; c < q_; c += step) {
                require(add(add(a, b), c) == add(a, add(b, c)), "additive associativity failed");
                require(mul(mul(a, b), c) == mul(a, mul(b, c)), "multiplicative associativity failed");
                require(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), "distributivity failed");
            }
        }
    for (int a = 1; a < q_; ++a)
        require(mul(a, inv_[a]) == 1 && pow(a, q_ - 1) == 1, "multiplicative structure failed");
}

int Field::inv(int a) const
{
    require(a != 0, "inverse of zero");
    return inv_[a];
}

int Field::pow(int a, long long e) const
{
    if (a == 0) {
        require(e > 0, "0^e undefined for e <= 0");
        return 0;
    }
    long long r = (static_cast<long long>(log_[a]) * (e % (q_ - 1)) % (q_ - 1) + (q_ - 1)) % (q_ - 1);
    return exp_[r];
}

int Field::frobenius(int a, int power) const
{
    power = ((power % k_) + k_) % k_;
    if (a == 0 || power == 0)
        return a;
    long long pe = 1;
    for (int i = 0; i < power; ++i)
        pe = pe * p_ % (q_ - 1);
    return exp_[(static_cast<long long>(log_[a]) * pe) % (q_ - 1)];
}

FieldElem Field::element(int index) const
{
    return FieldElem(*this, index);
}

FieldElem Field::zero() const
{
    return FieldElem(*this, 0);
}

FieldElem Field::one() const
{
    return FieldElem(*this, 1);
}

FieldElem Field::generator() const
{
    return FieldElem(*this, generator_);
}

FieldElem Field::from_int(long long value) const
{
    long long r = ((value % p_) + p_) % p_;
    return FieldElem(*this, int(r));  // prime subfield embeds as constant polynomials
}

FieldElem frobenius(const FieldElem & x, int power)
{
    return FieldElem(x.field(), x.field().frobenius(x.index(), power));
}

std::shared_ptr<const Field> get_field(int p, int k)
{
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::shared_ptr<const Field>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    auto f = std::make_shared<const Field>(p, k);
    cache.emplace(key, f);
    return f;
}

std::pair<int, int> prime_power(int q)
{
    require(q >= 2, "field order must be >= 2");
    int p = 2;
    while (q % p != 0)
        ++p;
    int k = 0, rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    require(rest == 1, std::to_string(q) + " is not a prime power");
    return {p, k};
}

}
