#include "faberlab/pi_linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace faberlab {

std::string PiLinear::to_string() const
{
    return "(" + pi_coeff_.to_string() + ")*pi+(" + const_coeff_.to_string() + ")";
}

PiLinear PiLinear::parse(std::string_view text)
{
    // (p/q)*pi+(r/s)
    const auto fail = [&] { return std::invalid_argument("PiLinear::parse: expected '(p/q)*pi+(r/s)', got '" + std::string(text) + "'"); };
    const auto mid = text.find(")*pi+(");
    if (text.size() < 10 || text.front() != '(' || text.back() != ')' || mid == std::string_view::npos)
        throw fail();
    const auto q = text.substr(1, mid - 1);
    const auto r = text.substr(mid + 6, text.size() - mid - 7);
    return {BigRational::parse(q), BigRational::parse(r)};
}

Real PiLinear::to_real(unsigned precision_bits) const
{
    // Evaluate with guard bits, widening them until the cancellation between
    // the two terms is covered, then round once to the requested precision.
    Real result;
    mpfr_set_prec(result.backend().data(), precision_bits);
    unsigned guard = 64;
    for (;;) {
        ScopedPrecision scope(precision_bits + guard);
        const Real a = pi<Real>() * pi_coeff_.to_real();
        const Real b = const_coeff_.to_real();
        const Real value = a + b;
        if (value == 0 && !(a == 0 && b == 0)) {
            guard *= 2;
            continue;
        }
        long lost = 0;
        if (a != 0 && b != 0) {
            const long top = std::max(mpfr_get_exp(a.backend().data()), mpfr_get_exp(b.backend().data()));
            lost = top - mpfr_get_exp(value.backend().data());
        }
        if (lost + 8 < static_cast<long>(guard)) {
            mpfr_set(result.backend().data(), value.backend().data(), MPFR_RNDN);
            return result;
        }
        guard *= 2;
    }
}

double PiLinear::to_double() const
{
    ScopedPrecision guard(128);
    return to_real(128).convert_to<double>();
}

} // namespace faberlab
