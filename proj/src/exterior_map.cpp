#include "faberlab/exterior_map.hpp"

namespace faberlab {

ExteriorMap ExteriorMap::from_phi(Laurent<ExactComplex> phi)
{
    if (phi.is_zero() || phi.max_exponent() != 1)
        throw MapError("closed-form phi must have leading term gamma*z");
    const ExactComplex lead = phi.coeff(1);
    if (!lead.is_real() || lead.re.sign() <= 0)
        throw MapError("closed-form phi must have a real positive leading coefficient");
    ExteriorMap m;
    m.kind_ = MapKind::closed_form_phi;
    m.gamma_ = lead.re;
    m.phi_ = std::move(phi);
    return m;
}

ExteriorMap ExteriorMap::from_psi(PsiSeries psi)
{
    if (psi.scale.sign() <= 0)
        throw MapError("psi series scale must be positive");
    if (psi.coeffs.empty())
        psi.coeffs.emplace_back(0);
    ExteriorMap m;
    m.kind_ = MapKind::psi_series;
    m.gamma_ = BigRational(1) / psi.scale;
    m.psi_ = std::move(psi);
    return m;
}

const Laurent<ExactComplex>& ExteriorMap::phi() const
{
    if (!phi_)
        throw MapError("map has no closed-form phi");
    return *phi_;
}

const PsiSeries& ExteriorMap::psi() const
{
    if (!psi_)
        throw MapError("map has no psi series");
    return *psi_;
}

ExteriorMap lens_map()
{
    const BigRational half(BigInt(1), BigInt(2));
    return ExteriorMap::from_phi(Laurent<ExactComplex>{{1, ExactComplex(half)}, {-1, ExactComplex(half)}});
}

ExteriorMap circle_map()
{
    return ExteriorMap::from_phi(Laurent<ExactComplex>{{1, ExactComplex(1)}});
}

ExteriorMap perturbed_circle_map(const BigRational& eps)
{
    return ExteriorMap::from_phi(Laurent<ExactComplex>{{1, ExactComplex(1)}, {-1, ExactComplex(eps)}});
}

namespace {

// c_k = (-1)^k binom(1/2, k), so sqrt(1 - x) = sum_k c_k x^k.
std::vector<BigRational> sqrt_one_minus_coeffs(unsigned count)
{
    std::vector<BigRational> c;
    c.reserve(count);
    c.emplace_back(1);
    for (unsigned k = 1; k < count; ++k)
        c.push_back(c.back() * BigRational(BigInt(2 * static_cast<long>(k) - 3), BigInt(2 * static_cast<long>(k))));
    return c;
}

} // namespace

PsiSeries lens_psi_series(unsigned M)
{
    // w + w sqrt(1 - w^-2) = 2w + sum_{k>=1} c_k w^{1-2k}
    PsiSeries psi;
    psi.scale = BigRational(2);
    psi.coeffs.assign(M + 1, ExactComplex(0));
    const auto c = sqrt_one_minus_coeffs(M / 2 + 2);
    for (unsigned k = 1; 2 * k - 1 <= M; ++k)
        psi.coeffs[2 * k - 1] = ExactComplex(c[k]);
    return psi;
}

PsiSeries perturbed_circle_psi_series(const BigRational& eps, unsigned M)
{
    // (w/2)(1 + sqrt(1 - 4 eps w^-2)) = w + sum_{k>=1} (c_k/2) (4 eps)^k w^{1-2k}
    PsiSeries psi;
    psi.scale = BigRational(1);
    psi.coeffs.assign(M + 1, ExactComplex(0));
    const auto c = sqrt_one_minus_coeffs(M / 2 + 2);
    BigRational power(1);
    for (unsigned k = 1; 2 * k - 1 <= M; ++k) {
        power *= BigRational(4) * eps;
        psi.coeffs[2 * k - 1] = ExactComplex(c[k] * power / BigRational(2));
    }
    return psi;
}

BigRational capacity(const ExteriorMap& map)
{
    return map.gamma();
}

SparsePolynomial<ExactComplex> faber(unsigned n, const ExteriorMap& map)
{
    if (map.kind() == MapKind::closed_form_phi)
        return polynomial_part(map.phi().pow(n)).first;
    const PsiSeries& psi = map.psi();
    auto seq = faber_sequence_psi<ExactComplex>(ExactComplex(psi.scale), psi.coeffs, n);
    return std::move(seq[n]);
}

TailSeries<ExactComplex> e_tail(unsigned n, const ExteriorMap& map)
{
    if (map.kind() != MapKind::closed_form_phi)
        throw MapError("e_tail: a psi-series map has no finitely representable tail");
    return polynomial_part(map.phi().pow(n)).second;
}

std::string to_string(MapKind kind)
{
    return kind == MapKind::closed_form_phi ? "closed_form_phi" : "psi_series";
}

MapKind parse_map_kind(const std::string& text)
{
    if (text == "closed_form_phi")
        return MapKind::closed_form_phi;
    if (text == "psi_series")
        return MapKind::psi_series;
    throw MapError("unknown map kind '" + text + "'");
}

} // namespace faberlab
