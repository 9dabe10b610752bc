#include "faberlab/big_rational.hpp"

#include <cctype>
#include <stdexcept>

namespace faberlab {

BigRational::BigRational(const BigInt& numerator, const BigInt& denominator) : value_(numerator, denominator)
{
    if (denominator == 0)
        throw std::domain_error("BigRational: zero denominator");
    value_.canonicalize();
}

BigRational::BigRational(const mpq_class& value) : value_(value)
{
    if (value_.get_den() == 0)
        throw std::domain_error("BigRational: zero denominator");
    value_.canonicalize();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole)
{
    if (text.empty())
        throw std::invalid_argument("BigRational::parse: malformed number '" + std::string(whole) + "'");
    std::size_t i = 0;
    if (text[0] == '+' || text[0] == '-')
        ++i;
    if (i == text.size())
        throw std::invalid_argument("BigRational::parse: malformed number '" + std::string(whole) + "'");
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            throw std::invalid_argument("BigRational::parse: malformed number '" + std::string(whole) + "'");
    std::string s(text[0] == '+' ? text.substr(1) : text);
    return BigInt(s, 10);
}

BigInt pow10(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

} // namespace

BigRational BigRational::parse(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    const std::string_view whole = text;

    if (const auto slash = text.find('/'); slash != std::string_view::npos)
        return BigRational(parse_integer(text.substr(0, slash), whole), parse_integer(text.substr(slash + 1), whole));

    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        const BigInt ex = parse_integer(text.substr(e + 1), whole);
        if (!ex.fits_slong_p() || abs(ex) > 100000)
            throw std::invalid_argument("BigRational::parse: exponent out of range in '" + std::string(whole) + "'");
        exponent = ex.get_si();
        text = text.substr(0, e);
    }

    std::string digits(text);
    if (const auto dot = digits.find('.'); dot != std::string::npos) {
        exponent -= static_cast<long>(digits.size() - dot - 1);
        digits.erase(dot, 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("BigRational::parse: malformed number '" + std::string(whole) + "'");
    }
    BigInt mantissa = parse_integer(digits, whole);
    if (exponent >= 0)
        return BigRational(BigInt(mantissa * pow10(static_cast<unsigned long>(exponent))));
    return BigRational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
}

std::string BigRational::to_string() const
{
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Real BigRational::to_real() const
{
    Real r;
    mpfr_set_q(r.backend().data(), value_.get_mpq_t(), MPFR_RNDN);
    return r;
}

BigRational& BigRational::operator+=(const BigRational& rhs)
{
    value_ += rhs.value_;
    return *this;
}

BigRational& BigRational::operator-=(const BigRational& rhs)
{
    value_ -= rhs.value_;
    return *this;
}

BigRational& BigRational::operator*=(const BigRational& rhs)
{
    value_ *= rhs.value_;
    return *this;
}

BigRational& BigRational::operator/=(const BigRational& rhs)
{
    if (rhs.is_zero())
        throw std::domain_error("BigRational: division by zero");
    value_ /= rhs.value_;
    return *this;
}

BigRational BigRational::operator-() const
{
    return BigRational(mpq_class(-value_));
}

BigRational pow(const BigRational& base, unsigned exponent)
{
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exponent);
    return BigRational(num, den);
}

BigRational abs(const BigRational& x)
{
    return x.sign() < 0 ? -x : x;
}

BigInt binomial(unsigned long n, unsigned long k)
{
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& rhs)
{
    const BigRational d = rhs.re * rhs.re + rhs.im * rhs.im;
    if (d.is_zero())
        throw std::domain_error("ExactComplex: division by zero");
    BigRational r = (re * rhs.re + im * rhs.im) / d;
    im = (im * rhs.re - re * rhs.im) / d;
    re = std::move(r);
    return *this;
}

} // namespace faberlab
