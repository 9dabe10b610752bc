#pragma once

#include "faberlab/big_rational.hpp"
#include "faberlab/numeric.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace faberlab {

inline bool is_zero_coeff(const BigRational& c) { return c.is_zero(); }
inline bool is_zero_coeff(const ExactComplex& c) { return c.is_zero(); }
template <typename Scalar>
bool is_zero_coeff(const Complex<Scalar>& c)
{
    return c.real() == 0 && c.imag() == 0;
}
inline bool is_zero_coeff(double c) { return c == 0; }

/// Converts an exact or floating coefficient to Complex<Scalar>.
template <typename Scalar>
Complex<Scalar> to_complex(const BigRational& c)
{
    return {c.to<Scalar>(), Scalar(0)};
}
template <typename Scalar>
Complex<Scalar> to_complex(const ExactComplex& c)
{
    return c.to<Scalar>();
}
template <typename Scalar>
Complex<Scalar> to_complex(const Complex<Scalar>& c)
{
    return c;
}

/// Finite Laurent series sum_e c_e z^e with e in Z. Zero coefficients are
/// never stored.
template <typename Coeff>
class Laurent
{
public:
    using Terms = std::map<int, Coeff>;

    Laurent() = default;
    explicit Laurent(Terms terms) : terms_(std::move(terms)) { prune(); }
    Laurent(std::initializer_list<std::pair<const int, Coeff>> init) : terms_(init) { prune(); }

    static Laurent monomial(int exponent, Coeff c) { return Laurent(Terms{{exponent, std::move(c)}}); }
    static Laurent one() { return monomial(0, Coeff(1)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Coeff coeff(int exponent) const
    {
        const auto it = terms_.find(exponent);
        return it == terms_.end() ? Coeff(0) : it->second;
    }
    int max_exponent() const
    {
        if (terms_.empty())
            throw std::logic_error("Laurent::max_exponent of zero series");
        return terms_.rbegin()->first;
    }
    int min_exponent() const
    {
        if (terms_.empty())
            throw std::logic_error("Laurent::min_exponent of zero series");
        return terms_.begin()->first;
    }

    Laurent& operator+=(const Laurent& rhs)
    {
        for (const auto& [e, c] : rhs.terms_)
            accumulate(e, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& rhs)
    {
        for (const auto& [e, c] : rhs.terms_)
            accumulate(e, -c);
        return *this;
    }
    Laurent& operator*=(const Coeff& s)
    {
        if (is_zero_coeff(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }

    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(Laurent a, const Coeff& s) { return a *= s; }
    friend Laurent operator*(const Laurent& a, const Laurent& b)
    {
        Laurent out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                out.accumulate(ea + eb, ca * cb);
        return out;
    }
    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

    /// Multiplies by z^k.
    Laurent shifted(int k) const
    {
        Terms t;
        for (const auto& [e, c] : terms_)
            t.emplace(e + k, c);
        return Laurent(std::move(t));
    }

    Laurent derivative() const
    {
        Terms t;
        for (const auto& [e, c] : terms_)
            if (e != 0)
                t.emplace(e - 1, c * Coeff(e));
        return Laurent(std::move(t));
    }

    Laurent pow(unsigned n) const
    {
        Laurent result = one();
        Laurent base = *this;
        while (n > 0) {
            if (n & 1u)
                result = result * base;
            n >>= 1;
            if (n > 0)
                base = base * base;
        }
        return result;
    }

    template <typename Other, typename F>
    Laurent<Other> map_coeffs(F&& f) const
    {
        typename Laurent<Other>::Terms t;
        for (const auto& [e, c] : terms_)
            t.emplace(e, f(c));
        return Laurent<Other>(std::move(t));
    }

    /// Value at z != 0 in Complex<Scalar> arithmetic.
    template <typename Scalar>
    Complex<Scalar> evaluate(const Complex<Scalar>& z) const
    {
        Complex<Scalar> pos(0), neg(0);
        if (terms_.empty())
            return pos;
        // Horner separately over exponents >= 0 and < 0.
        int e = std::max(max_exponent(), 0);
        for (; e >= 0; --e)
            pos = pos * z + to_complex<Scalar>(coeff(e));
        if (min_exponent() < 0) {
            const Complex<Scalar> w = Complex<Scalar>(1) / z;
            for (int k = min_exponent(); k < 0; ++k)
                neg = (neg + to_complex<Scalar>(coeff(k))) * w;
        }
        return pos + neg;
    }

private:
    void prune()
    {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = is_zero_coeff(it->second) ? terms_.erase(it) : std::next(it);
    }
    void accumulate(int e, const Coeff& c)
    {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted)
            it->second += c;
        if (is_zero_coeff(it->second))
            terms_.erase(it);
    }

    Terms terms_;
};

/// Polynomial: a Laurent series with no negative exponents.
template <typename Coeff>
struct SparsePolynomial
{
    Laurent<Coeff> series;

    SparsePolynomial() = default;
    explicit SparsePolynomial(Laurent<Coeff> s) : series(std::move(s))
    {
        if (!series.is_zero() && series.min_exponent() < 0)
            throw std::invalid_argument("SparsePolynomial: negative exponent");
    }
    int degree() const { return series.is_zero() ? -1 : series.max_exponent(); }
    Coeff coeff(int e) const { return series.coeff(e); }
    friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;
};

/// Principal part at infinity: only exponents <= -1.
template <typename Coeff>
struct TailSeries
{
    Laurent<Coeff> series;

    TailSeries() = default;
    explicit TailSeries(Laurent<Coeff> s) : series(std::move(s))
    {
        if (!series.is_zero() && series.max_exponent() >= 0)
            throw std::invalid_argument("TailSeries: nonnegative exponent");
    }
    Coeff coeff(int e) const { return series.coeff(e); }
    friend bool operator==(const TailSeries&, const TailSeries&) = default;
};

/// Splits f into its polynomial part (exponents >= 0) and tail (exponents < 0).
template <typename Coeff>
std::pair<SparsePolynomial<Coeff>, TailSeries<Coeff>> polynomial_part(const Laurent<Coeff>& f)
{
    typename Laurent<Coeff>::Terms poly, tail;
    for (const auto& [e, c] : f.terms())
        (e >= 0 ? poly : tail).emplace(e, c);
    return {SparsePolynomial<Coeff>(Laurent<Coeff>(std::move(poly))), TailSeries<Coeff>(Laurent<Coeff>(std::move(tail)))};
}

} // namespace faberlab
