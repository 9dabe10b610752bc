#pragma once

#include "faberlab/big_rational.hpp"

#include <string>
#include <string_view>

namespace faberlab {

/// Exact number q*pi + r with rational q and r. Closed under addition and
/// rational scaling; equality is componentwise (pi is irrational).
class PiLinear
{
public:
    PiLinear() = default;
    PiLinear(BigRational pi_coeff, BigRational const_coeff)
        : pi_coeff_(std::move(pi_coeff)), const_coeff_(std::move(const_coeff))
    {
    }
    static PiLinear rational(BigRational value) { return {BigRational(0), std::move(value)}; }

    const BigRational& pi_coeff() const { return pi_coeff_; }
    const BigRational& const_coeff() const { return const_coeff_; }

    /// "(p/q)*pi+(r/s)"
    std::string to_string() const;
    static PiLinear parse(std::string_view text);

    /// Value rounded to nearest at the given MPFR precision.
    Real to_real(unsigned precision_bits) const;
    double to_double() const;

    PiLinear& operator+=(const PiLinear& rhs)
    {
        pi_coeff_ += rhs.pi_coeff_;
        const_coeff_ += rhs.const_coeff_;
        return *this;
    }
    PiLinear& operator-=(const PiLinear& rhs)
    {
        pi_coeff_ -= rhs.pi_coeff_;
        const_coeff_ -= rhs.const_coeff_;
        return *this;
    }
    PiLinear& operator*=(const BigRational& s)
    {
        pi_coeff_ *= s;
        const_coeff_ *= s;
        return *this;
    }

    friend PiLinear operator+(PiLinear a, const PiLinear& b) { return a += b; }
    friend PiLinear operator-(PiLinear a, const PiLinear& b) { return a -= b; }
    friend PiLinear operator*(PiLinear a, const BigRational& s) { return a *= s; }
    friend PiLinear operator*(const BigRational& s, PiLinear a) { return a *= s; }
    friend PiLinear operator/(PiLinear a, const BigRational& s) { return a *= BigRational(1) / s; }
    PiLinear operator-() const { return {-pi_coeff_, -const_coeff_}; }

    friend bool operator==(const PiLinear&, const PiLinear&) = default;

private:
    BigRational pi_coeff_;
    BigRational const_coeff_;
};

/// A floating result that left the exact ring (e.g. after division by pi),
/// tagged with the precision it was computed at.
struct TaggedFloat
{
    Real value;
    unsigned precision_bits = 0;
};

} // namespace faberlab
