#pragma once

// Composite Gauss-Legendre quadrature on piecewise-analytic boundaries, with
// panels graded geometrically toward corners, and the two Green reductions
// built on it:
//
//   ||f'||^2_{L2(Omega)} = (i/2) \oint_L conj(f) f' dz      (f -> 0 at infinity)
//   \int_G z^j conj(z)^k dA = 1/(2i(k+1)) \oint_L z^j conj(z)^{k+1} dz
//
// with L = dG counterclockwise.

#include "faberlab/boundary.hpp"

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace faberlab {

struct QuadratureRule
{
    unsigned order = 24;           // Gauss-Legendre nodes per panel
    unsigned base_panels = 8;      // uniform panels per segment before grading
    unsigned grading_depth = 6;    // geometric levels toward each corner
    double grading_ratio = 0.5;
    double target_tolerance = 1e-12;
    unsigned max_refinements = 8;  // panel halvings allowed before giving up

    /// Every panel halved: twice the base panels and one more grading level.
    QuadratureRule refined() const
    {
        QuadratureRule r = *this;
        r.base_panels *= 2;
        r.grading_depth += 1;
        return r;
    }
    friend bool operator==(const QuadratureRule&, const QuadratureRule&) = default;
};

class QuadratureError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The estimate stayed above the target after all allowed refinements.
class NonConvergence : public QuadratureError
{
public:
    NonConvergence(const std::string& what, double last_value, double last_error)
        : QuadratureError(what), last_value(last_value), last_error(last_error)
    {
    }
    double last_value;
    double last_error;
};

/// A norm came out negative beyond its error estimate.
class OrientationError : public QuadratureError
{
public:
    using QuadratureError::QuadratureError;
};

template <typename Scalar>
struct Estimate
{
    Scalar value;
    Scalar error;
    QuadratureRule rule; // rule the value was computed with
};

// ---- Gauss-Legendre --------------------------------------------------------

template <typename Scalar>
struct GaussRule
{
    std::vector<Scalar> nodes;   // on [-1, 1], increasing
    std::vector<Scalar> weights; // positive
};

namespace detail {

template <typename Scalar>
GaussRule<Scalar> compute_gauss_legendre(unsigned n)
{
    using std::abs;
    using std::cos;
    GaussRule<Scalar> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Scalar tol = epsilon<Scalar>() * 8;
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, refined by Newton on the three-term recurrence.
        Scalar x(std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5)));
        Scalar dp(0);
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0(1), p1 = x;
            for (unsigned k = 2; k <= n; ++k) {
                Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
                p0 = std::move(p1);
                p1 = std::move(p2);
            }
            dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
            const Scalar dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= tol)
                break;
        }
        const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = Scalar(0);
    return rule;
}

} // namespace detail

/// n-point Gauss-Legendre rule at the current working precision (cached).
template <typename Scalar>
const GaussRule<Scalar>& gauss_legendre(unsigned n)
{
    static std::mutex mutex;
    static std::map<std::pair<unsigned, unsigned>, GaussRule<Scalar>> cache;
    const std::pair<unsigned, unsigned> key{n, ScalarTraits<Scalar>::bits()};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, detail::compute_gauss_legendre<Scalar>(n)).first;
    return it->second;
}

// ---- panels -----------------------------------------------------------------

struct PanelSpan
{
    std::size_t segment;
    double a, b; // parameter interval within [0, 1]
};

/// Panel layout of a path: uniform panels, with the first/last panel of a
/// segment split geometrically when that endpoint is a corner. Panels are
/// listed in path order, so accumulation order is fixed.
std::vector<PanelSpan> panel_layout(const BoundaryPath& path, const QuadratureRule& rule);

/// Weighted quadrature nodes of a path: sum_k weight_k g(node_k) approximates
/// \int_0^1 g(t) dt summed over segments. Nodes carry z and dz/dt.
template <typename Scalar>
struct PathNodes
{
    std::vector<BoundaryNode<Scalar>> nodes;
    std::vector<Scalar> weights;
};

template <typename Scalar>
PathNodes<Scalar> path_nodes(const BoundaryPath& path, const QuadratureRule& rule)
{
    const GaussRule<Scalar>& g = gauss_legendre<Scalar>(rule.order);
    std::vector<SegmentEval<Scalar>> evals;
    evals.reserve(path.segments().size());
    for (const auto& seg : path.segments())
        evals.emplace_back(seg);
    PathNodes<Scalar> out;
    for (const PanelSpan& p : panel_layout(path, rule)) {
        // Panel endpoints are dyadic-ish doubles; exact in any wider type.
        const Scalar a(p.a), b(p.b);
        const Scalar half = (b - a) / 2, mid = (a + b) / 2;
        for (unsigned k = 0; k < rule.order; ++k) {
            out.nodes.push_back(evals[p.segment].at(mid + half * g.nodes[k]));
            out.weights.push_back(half * g.weights[k]);
        }
    }
    return out;
}

// ---- Green reductions -------------------------------------------------------

namespace detail {

template <typename Scalar, typename Integrand>
Complex<Scalar> contour_sum(const PathNodes<Scalar>& pn, Integrand&& g)
{
    Complex<Scalar> acc(0);
    for (std::size_t k = 0; k < pn.nodes.size(); ++k)
        acc += g(pn.nodes[k]) * pn.nodes[k].dz * pn.weights[k];
    return acc;
}

template <typename Scalar>
Scalar to_scalar(double x)
{
    return Scalar(x);
}


} // namespace detail

/// Smallest error a quadrature value of size `magnitude` can honestly claim.
template <typename Scalar>
Scalar rounding_floor(double magnitude)
{
    return Scalar(16) * epsilon<Scalar>() * Scalar(std::max(1.0, std::abs(magnitude)));
}

/// Refines `rule` by panel halving until two successive values of `integral`
/// differ by at most rule.target_tolerance; returns the finer value. The
/// integral maps a rule to a value with a distance (the estimate's error,
/// which should include rounding_floor so that two rules agreeing to the last
/// bit do not claim more than the working precision); `summary` reduces a
/// value to one double for error reports.
template <typename Scalar, typename Value, typename Integral, typename Distance, typename Summary>
std::pair<Value, Estimate<Scalar>> refine_integral(const QuadratureRule& rule, Integral&& integral, Distance&& distance,
                                                   Summary&& summary)
{
    QuadratureRule current = rule;
    Value coarse = integral(current);
    Scalar err(0);
    for (unsigned level = 0; level < rule.max_refinements; ++level) {
        const QuadratureRule finer = current.refined();
        Value fine = integral(finer);
        err = distance(fine, coarse);
        if (err <= detail::to_scalar<Scalar>(rule.target_tolerance))
            return {std::move(fine), Estimate<Scalar>{Scalar(0), err, finer}};
        current = finer;
        coarse = std::move(fine);
    }
    throw NonConvergence("quadrature did not reach tolerance " + to_decimal(rule.target_tolerance) + " after " +
                             std::to_string(rule.max_refinements) + " refinements (estimate " +
                             to_decimal(to_double(err)) + ")",
                         summary(coarse), to_double(err));
}

/// ||f'||^2 over the exterior of `path`. `f` maps a BoundaryNode to the pair
/// (f(z), f'(z)); f must be analytic outside the curve and O(1/z) at infinity.
template <typename Scalar, typename F>
    requires std::invocable<F&, const BoundaryNode<Scalar>&>
Estimate<Scalar> green_deriv_norm(F&& f, const BoundaryPath& path, const QuadratureRule& rule)
{
    using std::abs;
    auto integral = [&](const QuadratureRule& r) {
        const PathNodes<Scalar> pn = path_nodes<Scalar>(path, r);
        const Complex<Scalar> j = detail::contour_sum(pn, [&](const BoundaryNode<Scalar>& node) {
            const auto [value, deriv] = f(node);
            return std::conj(value) * deriv;
        });
        // (i/2) J
        return Scalar(-j.imag() / 2);
    };
    auto distance = [](const Scalar& a, const Scalar& b) {
        return Scalar(abs(a - b) + rounding_floor<Scalar>(to_double(a)));
    };
    auto [value, est] = refine_integral<Scalar, Scalar>(rule, integral, distance,
                                                        [](const Scalar& v) { return to_double(v); });
    est.value = value;
    const Scalar slack = est.error + detail::to_scalar<Scalar>(rule.target_tolerance);
    if (est.value < -slack)
        throw OrientationError("green_deriv_norm: negative norm " + to_decimal(to_double(est.value)) +
                               " beyond error estimate; check the boundary orientation");
    return est;
}

/// Callable (f, f') for a finite tail sum_k c_k z^{-k}.
template <typename Scalar, typename Coeff>
auto tail_function(const TailSeries<Coeff>& tail)
{
    auto f = tail.series.template map_coeffs<Complex<Scalar>>([](const Coeff& c) { return to_complex<Scalar>(c); });
    auto df = f.derivative();
    return [f = std::move(f), df = std::move(df)](const BoundaryNode<Scalar>& node) {
        return std::pair<Complex<Scalar>, Complex<Scalar>>{f.evaluate(node.z), df.evaluate(node.z)};
    };
}

template <typename Scalar, typename Coeff>
Estimate<Scalar> green_deriv_norm(const TailSeries<Coeff>& tail, const BoundaryPath& path, const QuadratureRule& rule)
{
    if (tail.series.is_zero())
        return {Scalar(0), Scalar(0), rule};
    return green_deriv_norm<Scalar>(tail_function<Scalar>(tail), path, rule);
}

/// E_n = phi^n - F_n on a psi-image boundary, where phi is known pointwise
/// (|phi| = 1) and F_n is a polynomial; works for any map with a psi series.
template <typename Scalar>
auto psi_remainder_function(unsigned n, const SparsePolynomial<Complex<Scalar>>& faber_n)
{
    auto F = faber_n.series;
    auto dF = F.derivative();
    return [n, F = std::move(F), dF = std::move(dF)](const BoundaryNode<Scalar>& node) {
        if (!node.has_phi)
            throw QuadratureError("psi remainder needs a psi-image boundary");
        const Complex<Scalar> wn1 = n == 0 ? Complex<Scalar>(0) : std::pow(node.w, static_cast<int>(n) - 1);
        const Complex<Scalar> wn = n == 0 ? Complex<Scalar>(1) : wn1 * node.w;
        const Complex<Scalar> dphi = node.dw / node.dz;
        return std::pair<Complex<Scalar>, Complex<Scalar>>{wn - F.evaluate(node.z),
                                                           Scalar(n) * wn1 * dphi - dF.evaluate(node.z)};
    };
}

/// Matrix of area moments m(j, k) = \int_G z^j conj(z)^k dA for j, k <= degree.
template <typename Scalar>
using MomentMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
MomentMatrix<Scalar> area_moments_at(const BoundaryPath& path, const QuadratureRule& rule, unsigned degree)
{
    const PathNodes<Scalar> pn = path_nodes<Scalar>(path, rule);
    const Eigen::Index n = degree + 1;
    MomentMatrix<Scalar> m = MomentMatrix<Scalar>::Zero(n, n);
    std::vector<Complex<Scalar>> zp(n), zc(n + 1);
    for (std::size_t k = 0; k < pn.nodes.size(); ++k) {
        const auto& node = pn.nodes[k];
        const Complex<Scalar> wdz = node.dz * pn.weights[k];
        zp[0] = Complex<Scalar>(1);
        for (Eigen::Index j = 1; j < n; ++j)
            zp[j] = zp[j - 1] * node.z;
        const Complex<Scalar> zbar = std::conj(node.z);
        zc[0] = Complex<Scalar>(1);
        for (Eigen::Index j = 1; j <= n; ++j)
            zc[j] = zc[j - 1] * zbar;
        for (Eigen::Index a = 0; a < n; ++a) {
            const Complex<Scalar> left = zp[a] * wdz;
            for (Eigen::Index b = 0; b < n; ++b)
                m(a, b) += left * zc[b + 1];
        }
    }
    // divide by 2i(k+1)
    for (Eigen::Index b = 0; b < n; ++b) {
        const Complex<Scalar> scale(Scalar(0), Scalar(2 * (b + 1)));
        m.col(b) /= scale;
    }
    return m;
}

template <typename Scalar>
struct MomentEstimate
{
    MomentMatrix<Scalar> moments;
    Scalar error; // max difference between the last two refinements, entry (j, k) relative to max(1, sqrt(m_jj m_kk))
    QuadratureRule rule;
};

/// All area moments up to `degree`, refined until the normalized change under
/// panel halving is below rule.target_tolerance.
template <typename Scalar>
MomentEstimate<Scalar> area_moments(const BoundaryPath& path, const QuadratureRule& rule, unsigned degree)
{
    auto integral = [&](const QuadratureRule& r) { return area_moments_at<Scalar>(path, r, degree); };
    // entries are compared relative to sqrt(m_jj m_kk), which bounds |m_jk|
    auto distance = [](const MomentMatrix<Scalar>& a, const MomentMatrix<Scalar>& b) {
        Scalar d(0);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                using std::sqrt;
                const Scalar scale = sqrt(Scalar(modulus(a(i, i)) * modulus(a(j, j))));
                d = std::max(d, Scalar(modulus(Complex<Scalar>(a(i, j) - b(i, j))) / std::max(Scalar(1), scale)));
            }
        return Scalar(d + rounding_floor<Scalar>(1.0));
    };
    auto [m, est] = refine_integral<Scalar, MomentMatrix<Scalar>>(
        rule, integral, distance, [](const MomentMatrix<Scalar>& v) { return to_double(v(0, 0).real()); });
    return {std::move(m), est.error, est.rule};
}

/// Single moment \int_G z^j conj(z)^k dA with an error estimate relative to
/// max(1, |moment|).
template <typename Scalar>
std::pair<Complex<Scalar>, Scalar> area_moment(unsigned j, unsigned k, const BoundaryPath& path,
                                               const QuadratureRule& rule)
{
    using std::abs;
    auto integral = [&](const QuadratureRule& r) {
        const PathNodes<Scalar> pn = path_nodes<Scalar>(path, r);
        const Complex<Scalar> acc = detail::contour_sum(pn, [&](const BoundaryNode<Scalar>& node) {
            return std::pow(node.z, static_cast<int>(j)) * std::pow(std::conj(node.z), static_cast<int>(k + 1));
        });
        return Complex<Scalar>(acc / Complex<Scalar>(Scalar(0), Scalar(2 * (k + 1))));
    };
    auto distance = [](const Complex<Scalar>& a, const Complex<Scalar>& b) {
        return Scalar(modulus(Complex<Scalar>(a - b)) / std::max(Scalar(1), modulus(a)) + rounding_floor<Scalar>(1.0));
    };
    auto [value, est] = refine_integral<Scalar, Complex<Scalar>>(
        rule, integral, distance, [](const Complex<Scalar>& v) { return to_double(v.real()); });
    return {value, est.error};
}

/// Smallest refinement of `rule` whose panel-halving error on `probe` is below
/// `target`. Returns `rule` itself if it already qualifies. Throws
/// NonConvergence (max depth) otherwise; target <= 0 can never be met.
template <typename Scalar, typename F>
QuadratureRule refine_until(const QuadratureRule& rule, double target, F&& probe, const BoundaryPath& path)
{
    using std::abs;
    if (!(target > 0))
        throw NonConvergence("refine_until: target tolerance must be positive", 0.0, 0.0);
    auto value = [&](const QuadratureRule& r) {
        const PathNodes<Scalar> pn = path_nodes<Scalar>(path, r);
        const Complex<Scalar> j = detail::contour_sum(pn, [&](const BoundaryNode<Scalar>& node) {
            const auto [v, d] = probe(node);
            return std::conj(v) * d;
        });
        return Scalar(-j.imag() / 2);
    };
    QuadratureRule current = rule;
    Scalar coarse = value(current);
    for (unsigned level = 0; level <= rule.max_refinements; ++level) {
        const Scalar fine = value(current.refined());
        if (abs(fine - coarse) < Scalar(target))
            return current;
        current = current.refined();
        coarse = fine;
    }
    throw NonConvergence("refine_until: max depth exceeded", to_double(coarse), 0.0);
}

} // namespace faberlab
