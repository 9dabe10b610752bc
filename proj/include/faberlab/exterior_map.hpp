#pragma once

#include "faberlab/laurent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace faberlab {

enum class MapKind { closed_form_phi, psi_series };

/// Truncated inverse map psi(w) = scale*w + c_0 + c_1/w + ... + c_M/w^M.
struct PsiSeries
{
    BigRational scale; // > 0
    std::vector<ExactComplex> coeffs; // c_0 .. c_M

    unsigned truncation() const { return coeffs.empty() ? 0 : static_cast<unsigned>(coeffs.size() - 1); }
    friend bool operator==(const PsiSeries&, const PsiSeries&) = default;
};

class MapError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class TruncationError : public MapError
{
public:
    using MapError::MapError;
};

/// Exterior conformal map data: either phi itself as a Laurent polynomial or
/// a truncated series for its inverse. gamma = phi'(infinity) = 1/capacity.
class ExteriorMap
{
public:
    /// phi must have leading term gamma*z with gamma real positive and no
    /// higher powers.
    static ExteriorMap from_phi(Laurent<ExactComplex> phi);
    static ExteriorMap from_psi(PsiSeries psi);

    MapKind kind() const { return kind_; }
    const Laurent<ExactComplex>& phi() const;
    const PsiSeries& psi() const;
    const BigRational& gamma() const { return gamma_; }

    friend bool operator==(const ExteriorMap&, const ExteriorMap&) = default;

private:
    MapKind kind_ = MapKind::closed_form_phi;
    std::optional<Laurent<ExactComplex>> phi_;
    std::optional<PsiSeries> psi_;
    BigRational gamma_;
};

/// phi(z) = (z + 1/z)/2.
ExteriorMap lens_map();
/// phi(z) = z.
ExteriorMap circle_map();
/// phi(z) = z + eps/z, exterior map of a smooth curve close to the unit circle.
ExteriorMap perturbed_circle_map(const BigRational& eps);
/// Inverse Zhoukowsky series psi(w) = w + sqrt(w^2 - 1) through w^-M,
/// generated exactly from the binomial series of sqrt(1 - w^-2).
PsiSeries lens_psi_series(unsigned M);
/// psi(w) = (w + sqrt(w^2 - 4 eps))/2 through w^-M, inverse of z + eps/z.
PsiSeries perturbed_circle_psi_series(const BigRational& eps, unsigned M);

/// Returns gamma = phi'(infinity), the reciprocal of the logarithmic capacity.
BigRational capacity(const ExteriorMap& map);

/// F_n as the polynomial part of phi^n (closed_form_phi), or through the
/// inverse-map recurrence run in exact arithmetic (psi_series). Throws
/// TruncationError if a psi series has M < n.
SparsePolynomial<ExactComplex> faber(unsigned n, const ExteriorMap& map);

/// E_n = phi^n - F_n, the principal part of phi^n at infinity. Only for
/// closed_form_phi maps; a psi series has no finite tail.
TailSeries<ExactComplex> e_tail(unsigned n, const ExteriorMap& map);

/// Faber polynomials F_0..F_n from inverse-map coefficients, by the
/// classical recurrence obtained from the generating function
///   psi'(w) / (psi(w) - z) = sum_n F_n(z) w^{-n-1}   (Curtiss; Suetin),
/// i.e.
///   F_{n+1} = ((z - c_0) F_n - sum_{k=1}^{n} c_k F_{n-k} - n c_n) / scale.
template <typename Coeff>
std::vector<SparsePolynomial<Coeff>> faber_sequence_psi(const Coeff& scale, const std::vector<Coeff>& c, unsigned n)
{
    if (c.empty() || c.size() - 1 < n)
        throw TruncationError("faber: psi series truncated at M = " +
                              std::to_string(c.empty() ? 0 : c.size() - 1) + " < n = " + std::to_string(n));
    std::vector<Laurent<Coeff>> f;
    f.reserve(n + 1);
    f.push_back(Laurent<Coeff>::one());
    const Coeff inv_scale = Coeff(1) / scale;
    const Laurent<Coeff> z = Laurent<Coeff>::monomial(1, Coeff(1));
    for (unsigned m = 0; m < n; ++m) {
        Laurent<Coeff> next = z * f[m] - f[m] * c[0];
        for (unsigned k = 1; k <= m; ++k)
            next -= f[m - k] * c[k];
        if (m >= 1)
            next -= Laurent<Coeff>::monomial(0, c[m] * Coeff(static_cast<long>(m)));
        next *= inv_scale;
        f.push_back(std::move(next));
    }
    std::vector<SparsePolynomial<Coeff>> out;
    out.reserve(f.size());
    for (auto& p : f)
        out.emplace_back(std::move(p));
    return out;
}

/// F_n from a psi series in Complex<Scalar> arithmetic, with a bound on the
/// accumulated rounding (truncation does not enter while M >= n).
template <typename Scalar>
struct FaberApprox
{
    SparsePolynomial<Complex<Scalar>> poly;
    Scalar error_bound;
};

template <typename Scalar>
FaberApprox<Scalar> faber_float(unsigned n, const PsiSeries& psi)
{
    std::vector<Complex<Scalar>> c;
    c.reserve(psi.coeffs.size());
    for (const auto& x : psi.coeffs)
        c.push_back(x.to<Scalar>());
    const Complex<Scalar> scale(psi.scale.to<Scalar>(), Scalar(0));
    auto seq = faber_sequence_psi<Complex<Scalar>>(scale, c, n);
    Scalar mass(0);
    for (const auto& [e, v] : seq[n].series.terms())
        mass += modulus(v);
    // Each step of the recurrence mixes at most m+2 terms; a first-order
    // bound of (n+1)^2 unit roundoffs per unit of coefficient mass.
    const Scalar bound = mass * Scalar((n + 1) * (n + 1)) * epsilon<Scalar>();
    return {std::move(seq[n]), bound};
}

std::string to_string(MapKind kind);
MapKind parse_map_kind(const std::string& text);

} // namespace faberlab
