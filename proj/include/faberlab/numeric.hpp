#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace faberlab {

namespace mp = boost::multiprecision;

/// Variable-precision binary floating point (MPFR). The working precision of
/// newly created values is controlled by ScopedPrecision.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

template <typename Scalar>
using Complex = std::complex<Scalar>;

inline constexpr unsigned kDefaultPrecisionBits = 256;

inline unsigned bits_to_digits(unsigned bits)
{
    // one guard digit so that printing round-trips
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// Sets the MPFR working precision for the lifetime of the guard and restores
/// the previous one on exit.
class ScopedPrecision
{
public:
    explicit ScopedPrecision(unsigned bits) : saved_(Real::default_precision())
    {
        Real::default_precision(bits_to_digits(bits));
    }
    ~ScopedPrecision() { Real::default_precision(saved_); }

    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

inline unsigned current_precision_bits()
{
    return static_cast<unsigned>(mpfr_get_default_prec());
}

// ---------------------------------------------------------------------------
// Scalar traits. Everything templated on a real scalar goes through these so
// that double and Real share one code path.

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double>
{
    static double pi() { return 3.14159265358979323846264338327950288; }
    static double epsilon() { return std::numeric_limits<double>::epsilon(); }
    static unsigned bits() { return 53; }
};

template <>
struct ScalarTraits<Real>
{
    static Real pi()
    {
        Real r;
        mpfr_const_pi(r.backend().data(), MPFR_RNDN);
        return r;
    }
    static Real epsilon()
    {
        Real r(1);
        return ldexp(r, 1 - static_cast<int>(bits()));
    }
    static unsigned bits() { return static_cast<unsigned>(mpfr_get_prec(Real().backend().data())); }
};

template <typename Scalar>
Scalar pi()
{
    return ScalarTraits<Scalar>::pi();
}

template <typename Scalar>
Scalar epsilon()
{
    return ScalarTraits<Scalar>::epsilon();
}

inline double to_double(double x) { return x; }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline std::string to_decimal(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Decimal string carrying every significant digit of the working precision.
inline std::string to_decimal(const Real& x)
{
    const unsigned digits = bits_to_digits(static_cast<unsigned>(mpfr_get_prec(x.backend().data())));
    return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

/// e^{i theta}
template <typename Scalar>
Complex<Scalar> unit_phasor(const Scalar& theta)
{
    using std::cos;
    using std::sin;
    return {cos(theta), sin(theta)};
}

template <typename Scalar>
Scalar norm2(const Complex<Scalar>& z)
{
    return z.real() * z.real() + z.imag() * z.imag();
}

template <typename Scalar>
Scalar modulus(const Complex<Scalar>& z)
{
    using std::sqrt;
    return sqrt(norm2(z));
}

} // namespace faberlab
