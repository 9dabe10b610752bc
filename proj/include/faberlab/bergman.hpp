#pragma once

// Bergman orthonormal polynomials over the interior G of a boundary path,
// built by Arnoldi in coefficient space: p_{k+1} is z p_k orthogonalized
// (twice) against p_0..p_k and normalized, with every inner product taken
// through the area-moment matrix, <a, b> = a^T M conj(b).

#include "faberlab/exact_lens.hpp"
#include "faberlab/remainder.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

namespace faberlab {

class BergmanError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Orthogonalization lost more bits than the precision can spare, or the Gram
/// matrix missed the tolerance; `degree` is where it first happened.
class IllConditioned : public BergmanError
{
public:
    IllConditioned(const std::string& what, unsigned degree) : BergmanError(what), degree(degree) {}
    unsigned degree;
};

/// alpha_n = 1 - r_n cancelled away every significant bit of r_n.
class PrecisionInsufficient : public BergmanError
{
public:
    PrecisionInsufficient(const std::string& what, unsigned n) : BergmanError(what), n(n) {}
    unsigned n;
};

template <typename Scalar>
using CoeffMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CoeffVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
struct OrthoBasis
{
    BoundaryPath path;
    CoeffMatrix<Scalar> coeffs;  // column k: coefficients of p_k, upper triangular
    std::vector<Scalar> lambda;  // leading coefficients, all > 0
    std::vector<double> bits_lost; // cancellation in the norm of each p_k
    Scalar gram_residual;
    MomentMatrix<Scalar> moments;
    Scalar moment_error;
    unsigned precision_bits;

    unsigned max_degree() const { return static_cast<unsigned>(lambda.size() - 1); }

    SparsePolynomial<Complex<Scalar>> polynomial(unsigned k) const
    {
        typename Laurent<Complex<Scalar>>::Terms t;
        for (unsigned j = 0; j <= k; ++j)
            t.emplace(static_cast<int>(j), coeffs(j, k));
        return SparsePolynomial<Complex<Scalar>>(Laurent<Complex<Scalar>>(std::move(t)));
    }
};

/// Coefficient vector of length `size` (exponent j at row j).
template <typename Scalar>
CoeffVector<Scalar> coefficient_vector(const SparsePolynomial<Complex<Scalar>>& p, Eigen::Index size)
{
    CoeffVector<Scalar> v = CoeffVector<Scalar>::Zero(size);
    for (const auto& [e, c] : p.series.terms()) {
        if (e >= size)
            throw BergmanError("polynomial degree exceeds the moment matrix");
        v(e) = c;
    }
    return v;
}

/// \int_G a conj(b) dA for coefficient vectors.
template <typename Scalar, typename A, typename B>
Complex<Scalar> area_inner(const MomentMatrix<Scalar>& m, const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b)
{
    const Eigen::Index n = a.size();
    return (a.transpose() * (m.topLeftCorner(n, n) * b.conjugate()))(0, 0);
}

/// The same quadratic form with every term replaced by its modulus; the ratio
/// to the true value measures cancellation.
template <typename Scalar, typename A>
Scalar area_magnitude(const MomentMatrix<Scalar>& m, const Eigen::MatrixBase<A>& a)
{
    const Eigen::Index n = a.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> abs_a(n);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> abs_m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        abs_a(i) = modulus(Complex<Scalar>(a(i)));
        for (Eigen::Index j = 0; j < n; ++j)
            abs_m(i, j) = modulus(Complex<Scalar>(m(i, j)));
    }
    return abs_a.dot(abs_m * abs_a);
}

/// Quadrature target for the moments: tight enough that moment error does
/// not dominate the orthogonalization at the working precision.
template <typename Scalar>
double moment_tolerance(double tol)
{
    const double half_precision = std::ldexp(1.0, -static_cast<int>(ScalarTraits<Scalar>::bits() / 2));
    const double floor = 64 * to_double(epsilon<Scalar>());
    return std::max(std::min(tol, half_precision), floor);
}

/// Bergman polynomials p_0..p_N of the interior of `path`. For Scalar = Real
/// the computation runs at `precision_bits`; callers should hold the same
/// ScopedPrecision while using the result.
template <typename Scalar>
OrthoBasis<Scalar> build_basis(const BoundaryPath& path, unsigned N, unsigned precision_bits, double tol,
                               QuadratureRule rule = {})
{
    using std::log2;
    using std::sqrt;
    std::optional<ScopedPrecision> scope;
    if constexpr (!std::is_same_v<Scalar, double>)
        scope.emplace(precision_bits);
    const unsigned bits = ScalarTraits<Scalar>::bits();

    rule.target_tolerance = moment_tolerance<Scalar>(tol);
    const MomentEstimate<Scalar> me = area_moments<Scalar>(path, rule, N);
    const MomentMatrix<Scalar>& m = me.moments;
    const Eigen::Index size = N + 1;

    OrthoBasis<Scalar> basis{path, CoeffMatrix<Scalar>::Zero(size, size), {}, {}, Scalar(0), m, me.error, bits};
    const Scalar m00 = m(0, 0).real();
    if (!(m00 > 0))
        throw IllConditioned("build_basis: nonpositive area", 0);
    basis.coeffs(0, 0) = Complex<Scalar>(Scalar(1) / sqrt(m00));
    basis.lambda.push_back(Scalar(1) / sqrt(m00));
    basis.bits_lost.push_back(0.0);

    for (Eigen::Index k = 0; k < N; ++k) {
        CoeffVector<Scalar> v = CoeffVector<Scalar>::Zero(size);
        v.segment(1, k + 1) = basis.coeffs.col(k).head(k + 1);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j <= k; ++j) {
                const Complex<Scalar> h = area_inner<Scalar>(m, v.head(k + 2), basis.coeffs.col(j).head(k + 2));
                v -= h * basis.coeffs.col(j);
            }
        const Scalar norm_sq = area_inner<Scalar>(m, v.head(k + 2), v.head(k + 2)).real();
        const Scalar magnitude = area_magnitude<Scalar>(m, v.head(k + 2));
        const unsigned degree = static_cast<unsigned>(k + 1);
        if (!(norm_sq > 0))
            throw IllConditioned("build_basis: norm vanished at degree " + std::to_string(degree), degree);
        const double lost = to_double(log2(magnitude / norm_sq));
        if (lost > bits / 2.0)
            throw IllConditioned("build_basis: lost " + std::to_string(static_cast<int>(lost)) + " of " +
                                     std::to_string(bits) + " bits at degree " + std::to_string(degree),
                                 degree);
        const Scalar norm = sqrt(norm_sq);
        v /= Complex<Scalar>(norm);
        // the leading coefficient is lambda_k / norm, real and positive by construction
        v(k + 1) = Complex<Scalar>(v(k + 1).real());
        basis.coeffs.col(k + 1) = v;
        basis.lambda.push_back(v(k + 1).real());
        basis.bits_lost.push_back(lost);
    }

    const CoeffMatrix<Scalar> gram = basis.coeffs.transpose() * m * basis.coeffs.conjugate();
    Scalar worst(0);
    unsigned worst_col = 0;
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = 0; j < size; ++j) {
            const Scalar d = modulus(Complex<Scalar>(gram(i, j) - Complex<Scalar>(i == j ? 1 : 0)));
            if (d > worst) {
                worst = d;
                worst_col = static_cast<unsigned>(std::max(i, j));
            }
        }
    basis.gram_residual = worst;
    if (worst > Scalar(tol))
        throw IllConditioned("build_basis: Gram residual " + to_decimal(to_double(worst)) + " exceeds " +
                                 to_decimal(tol),
                             worst_col);
    return basis;
}

template <typename Scalar>
struct AlphaRow
{
    unsigned n = 0;
    Scalar lambda;
    Scalar alpha;
    Scalar n_alpha;
    Scalar alpha_error; // propagated from the moment error and the bits lost
    std::optional<Scalar> lower_bound;            // ||E'_{n+1}||^2 / (pi (n+1))
    std::optional<Scalar> decomposition_residual; // from check_decomposition
};

/// alpha_n = 1 - (n+1) gamma^(2n+2) / (pi lambda_n^2) for every degree of the
/// basis.
template <typename Scalar>
std::vector<AlphaRow<Scalar>> alpha_table(const OrthoBasis<Scalar>& basis, const Scalar& gamma)
{
    using std::abs;
    using std::pow;
    std::vector<AlphaRow<Scalar>> rows;
    const Scalar pi_value = pi<Scalar>();
    const Scalar unit = std::max(basis.moment_error, epsilon<Scalar>());
    double lost = 0;
    for (unsigned n = 0; n <= basis.max_degree(); ++n) {
        lost = std::max(lost, basis.bits_lost[n]);
        const Scalar lambda = basis.lambda[n];
        const Scalar ratio = Scalar(n + 1) * pow(gamma, 2 * n + 2) / (pi_value * lambda * lambda);
        AlphaRow<Scalar> row;
        row.n = n;
        row.lambda = lambda;
        row.alpha = Scalar(1) - ratio;
        row.n_alpha = Scalar(n) * row.alpha;
        // relative error of lambda^2 grows with the cancellation in every
        // norm it was built from
        const Scalar ratio_error =
            unit * Scalar(std::ldexp(1.0, static_cast<int>(std::ceil(lost)) + 2)) * Scalar(n + 1);
        if (!(ratio_error < Scalar(0.5)))
            throw PrecisionInsufficient("alpha_table: gamma^(2n+2)/lambda_n^2 has no significant bits at n = " +
                                            std::to_string(n),
                                        n);
        row.alpha_error = ratio * ratio_error;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Terms of the decomposition
///   alpha_n = (n+1)/pi ||F'_{n+1}/(n+1) - gamma^{n+1}/lambda_n p_n||^2_G
///             + ||E'_{n+1}||^2 / (pi (n+1)).
template <typename Scalar>
struct DecompositionTerms
{
    Scalar alpha;
    Scalar interior_term;
    Scalar exterior_term;
    Scalar residual; // |alpha - interior_term - exterior_term|
};

/// ||E'_{n+1}||^2 / (pi (n+1)): exact for the lens, by quadrature otherwise.
template <typename Scalar>
Scalar exterior_term(const ExteriorMap& map, const BoundaryPath& path, unsigned n, double tol, bool exact_lens)
{
    const Scalar denom = pi<Scalar>() * Scalar(n + 1);
    if (exact_lens) {
        const PiLinear v = lens::i_diag_closed(n);
        if constexpr (std::is_same_v<Scalar, double>)
            return v.to_double() / denom;
        else
            return v.to_real(ScalarTraits<Scalar>::bits()) / denom;
    }
    QuadratureRule rule;
    rule.target_tolerance = moment_tolerance<Scalar>(tol);
    return remainder_norm<Scalar>(n + 1, map, path, rule).value / denom;
}


template <typename Scalar>
DecompositionTerms<Scalar> check_decomposition(const OrthoBasis<Scalar>& basis, const ExteriorMap& map, unsigned n,
                                               double tol, std::optional<Scalar> exterior = std::nullopt)
{
    using std::abs;
    using std::pow;
    if (n > basis.max_degree())
        throw BergmanError("check_decomposition: n exceeds the basis degree");
    std::optional<ScopedPrecision> scope;
    if constexpr (!std::is_same_v<Scalar, double>)
        scope.emplace(basis.precision_bits);

    const Scalar gamma = map.gamma().template to<Scalar>();
    const Scalar pi_value = pi<Scalar>();
    const Eigen::Index size = basis.coeffs.rows();

    const auto faber_next = to_complex_poly<ExactComplex, Scalar>(faber(n + 1, map));
    CoeffVector<Scalar> d = coefficient_vector<Scalar>(
        SparsePolynomial<Complex<Scalar>>(faber_next.series.derivative() * Complex<Scalar>(Scalar(1) / Scalar(n + 1))),
        size);
    const Scalar scale = pow(gamma, n + 1) / basis.lambda[n];
    d -= Complex<Scalar>(scale) * basis.coeffs.col(n);

    const Scalar lambda = basis.lambda[n];
    DecompositionTerms<Scalar> out;
    out.alpha = Scalar(1) - Scalar(n + 1) * pow(gamma, 2 * n + 2) / (pi_value * lambda * lambda);
    out.interior_term = Scalar(n + 1) / pi_value * area_inner<Scalar>(basis.moments, d, d).real();
    const bool exact = map == lens_map() && basis.path == lens_boundary();
    out.exterior_term = exterior ? *exterior : exterior_term<Scalar>(map, basis.path, n, tol, exact);
    out.residual = abs(out.alpha - out.interior_term - out.exterior_term);
    return out;
}

} // namespace faberlab

namespace faberlab {

struct AlphaOptions
{
    unsigned precision_bits = kDefaultPrecisionBits;
    unsigned max_precision_bits = 2048;
    double tol = 1e-10;
    /// check_decomposition is evaluated for n <= decomposition_max (none if unset)
    std::optional<unsigned> decomposition_max;
};

struct AlphaRun
{
    unsigned precision_bits = 0; // precision that finally succeeded
    unsigned attempts = 0;
    Real gram_residual;
    Real moment_error;
    std::vector<AlphaRow<Real>> rows;
};

/// Basis, alpha table, lower bounds and decomposition residuals for n <= N,
/// doubling the precision and retrying while orthogonalization or the alpha
/// cancellation eats more than half of the bits.
AlphaRun run_alpha(const BoundaryPath& path, const ExteriorMap& map, unsigned N, const AlphaOptions& options = {});

} // namespace faberlab
