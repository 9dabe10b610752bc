#pragma once

#include "faberlab/numeric.hpp"

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace faberlab {

using BigInt = mpz_class;

/// Exact rational number, always in lowest terms with a positive denominator.
class BigRational
{
public:
    BigRational() = default;
    BigRational(long value) : value_(value) {}
    BigRational(const BigInt& value) : value_(value) {}
    BigRational(const BigInt& numerator, const BigInt& denominator);
    explicit BigRational(const mpq_class& value);

    /// Accepts "p/q", integers, and finite decimals such as "-1.25" or "3e-4".
    /// Decimals are converted exactly.
    static BigRational parse(std::string_view text);

    const BigInt& numerator() const { return value_.get_num(); }
    const BigInt& denominator() const { return value_.get_den(); }
    const mpq_class& raw() const { return value_; }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }

    /// Always "p/q", including q = 1.
    std::string to_string() const;

    double to_double() const { return value_.get_d(); }
    Real to_real() const;

    template <typename Scalar>
    Scalar to() const
    {
        if constexpr (std::is_same_v<Scalar, double>)
            return to_double();
        else
            return to_real();
    }

    BigRational& operator+=(const BigRational& rhs);
    BigRational& operator-=(const BigRational& rhs);
    BigRational& operator*=(const BigRational& rhs);
    BigRational& operator/=(const BigRational& rhs);

    friend BigRational operator+(BigRational lhs, const BigRational& rhs) { return lhs += rhs; }
    friend BigRational operator-(BigRational lhs, const BigRational& rhs) { return lhs -= rhs; }
    friend BigRational operator*(BigRational lhs, const BigRational& rhs) { return lhs *= rhs; }
    friend BigRational operator/(BigRational lhs, const BigRational& rhs) { return lhs /= rhs; }
    BigRational operator-() const;

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    mpq_class value_;
};

BigRational pow(const BigRational& base, unsigned exponent);
BigRational abs(const BigRational& x);

/// Binomial coefficient C(n, k) as a big integer.
BigInt binomial(unsigned long n, unsigned long k);

/// Exact complex number with rational parts; the coefficient type of exactly
/// specified conformal maps.
struct ExactComplex
{
    BigRational re;
    BigRational im;

    ExactComplex() = default;
    ExactComplex(long r) : re(r) {}
    ExactComplex(BigRational r) : re(std::move(r)) {}
    ExactComplex(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    ExactComplex& operator+=(const ExactComplex& rhs)
    {
        re += rhs.re;
        im += rhs.im;
        return *this;
    }
    ExactComplex& operator-=(const ExactComplex& rhs)
    {
        re -= rhs.re;
        im -= rhs.im;
        return *this;
    }
    ExactComplex& operator*=(const ExactComplex& rhs)
    {
        BigRational r = re * rhs.re - im * rhs.im;
        im = re * rhs.im + im * rhs.re;
        re = std::move(r);
        return *this;
    }
    ExactComplex& operator/=(const ExactComplex& rhs);

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
    ExactComplex operator-() const { return {-re, -im}; }
    friend bool operator==(const ExactComplex&, const ExactComplex&) = default;

    template <typename Scalar>
    Complex<Scalar> to() const
    {
        return {re.to<Scalar>(), im.to<Scalar>()};
    }
};

inline ExactComplex conj(const ExactComplex& z) { return {z.re, -z.im}; }

} // namespace faberlab
