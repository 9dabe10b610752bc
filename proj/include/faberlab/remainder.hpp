#pragma once

// ||E_n'||^2 over the exterior domain for any supported map: the closed-form
// tail for phi given as a Laurent polynomial, or phi^n - F_n evaluated on a
// psi-image boundary where phi is known pointwise.

#include "faberlab/quadrature.hpp"

namespace faberlab {

template <typename Coeff, typename Scalar>
SparsePolynomial<Complex<Scalar>> to_complex_poly(const SparsePolynomial<Coeff>& p)
{
    return SparsePolynomial<Complex<Scalar>>(
        p.series.template map_coeffs<Complex<Scalar>>([](const Coeff& c) { return to_complex<Scalar>(c); }));
}

template <typename Scalar>
Estimate<Scalar> remainder_norm(unsigned n, const ExteriorMap& map, const BoundaryPath& path,
                                const QuadratureRule& rule)
{
    if (map.kind() == MapKind::closed_form_phi)
        return green_deriv_norm<Scalar>(e_tail(n, map), path, rule);
    const auto fn = to_complex_poly<ExactComplex, Scalar>(faber(n, map));
    return green_deriv_norm<Scalar>(psi_remainder_function<Scalar>(n, fn), path, rule);
}

} // namespace faberlab
