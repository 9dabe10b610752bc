#pragma once

// Sequence diagnostics: least-squares extrapolation under a few error models,
// liminf estimates from tail-window minima, and the lens limit and curve
// sweep reports built on them.

#include "faberlab/bergman.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace faberlab {

enum class ErrorModel
{
    log_over_n,  // L + c ln(n)/n
    inverse_n,   // L + c/n
    exponential, // L + c r^n, 0 < r < 1 (c may depend on the parity of n)
};

std::string to_string(ErrorModel model);
ErrorModel parse_error_model(const std::string& text);

class DegenerateFit : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct Extrapolation
{
    ErrorModel model;
    Scalar limit;
    Scalar residual;      // root-mean-square misfit
    Scalar coefficient;   // c (the even-n amplitude for a two-amplitude exponential fit)
    Scalar ratio;         // r per unit of n, exponential model only
    std::vector<Scalar> fitted;
};

template <typename Scalar>
using Samples = std::vector<std::pair<unsigned, Scalar>>;

namespace detail {

template <typename Scalar>
Extrapolation<Scalar> linear_fit(const Samples<Scalar>& pts, ErrorModel model,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& design, Scalar ratio)
{
    using std::sqrt;
    const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y(m);
    for (Eigen::Index i = 0; i < m; ++i)
        y(i) = pts[i].second;
    const Eigen::ColPivHouseholderQR<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> qr(design);
    if (qr.rank() < design.cols())
        throw DegenerateFit("extrapolate: singular least-squares system for model " + to_string(model));
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> beta = qr.solve(y);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fit = design * beta;
    Extrapolation<Scalar> out{model, beta(0), Scalar(0), beta(1), ratio, {}};
    out.fitted.assign(fit.data(), fit.data() + m);
    out.residual = sqrt(Scalar((y - fit).squaredNorm() / Scalar(m)));
    return out;
}

} // namespace detail

/// Least-squares fit of the chosen error model; returns the limit L and the
/// RMS residual. Needs >= 3 points with n strictly increasing (and n >= 1);
/// the exponential model also needs uniform spacing.
template <typename Scalar>
Extrapolation<Scalar> extrapolate(const Samples<Scalar>& pts, ErrorModel model)
{
    using std::log;
    using std::pow;
    using std::sqrt;
    if (pts.size() < 3)
        throw DegenerateFit("extrapolate: need at least 3 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].first == 0)
            throw DegenerateFit("extrapolate: n must be positive");
        if (i > 0 && pts[i].first <= pts[i - 1].first)
            throw DegenerateFit("extrapolate: n must be strictly increasing");
    }
    const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> design(m, 2);
    if (model != ErrorModel::exponential) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const Scalar n(pts[i].first);
            design(i, 0) = Scalar(1);
            design(i, 1) = model == ErrorModel::log_over_n ? Scalar(log(n) / n) : Scalar(Scalar(1) / n);
        }
        return detail::linear_fit(pts, model, design, Scalar(0));
    }

    const unsigned step = pts[1].first - pts[0].first;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].first - pts[i - 1].first != step)
            throw DegenerateFit("extrapolate: exponential model needs uniformly spaced n");
    // Differences of L + c r^k are geometric with ratio r. Sequences with an
    // odd/even sawtooth (c depending on the parity of k) are geometric at
    // lag 2 with ratio r^2, so with enough points of both parities the fit
    // uses lag-2 differences and separate even/odd amplitudes.
    const std::size_t lag = step % 2 == 1 && pts.size() >= 6 ? 2 : 1;
    Scalar num(0), den(0);
    for (std::size_t i = 0; i + 2 * lag < pts.size(); ++i) {
        const Scalar d0 = pts[i + lag].second - pts[i].second;
        const Scalar d1 = pts[i + 2 * lag].second - pts[i + lag].second;
        num += d0 * d1;
        den += d0 * d0;
    }
    if (den == 0) {
        // constant data
        Extrapolation<Scalar> out{model, pts.front().second, Scalar(0), Scalar(0), Scalar(0), {}};
        out.fitted.assign(pts.size(), pts.front().second);
        return out;
    }
    const Scalar ratio_lag = num / den;
    if (!(ratio_lag > 0 && ratio_lag < 1))
        throw DegenerateFit("extrapolate: differences are not geometrically decaying (ratio " +
                            to_decimal(to_double(ratio_lag)) + ")");
    const Scalar ratio = lag == 2 ? Scalar(sqrt(ratio_lag)) : ratio_lag;
    const Eigen::Index columns = lag == 2 ? 3 : 2;
    design.resize(m, columns);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Scalar power = pow(ratio, static_cast<int>(i));
        design(i, 0) = Scalar(1);
        if (lag == 2) {
            design(i, 1) = pts[i].first % 2 == 0 ? power : Scalar(0);
            design(i, 2) = pts[i].first % 2 == 0 ? Scalar(0) : power;
        } else {
            design(i, 1) = power;
        }
    }
    return detail::linear_fit(pts, model, design, Scalar(pow(ratio, 1.0 / step)));
}

/// Minima over the tail windows [ceil(n/2), n], one per sample n.
template <typename Scalar>
Samples<Scalar> window_minima(const Samples<Scalar>& pts)
{
    Samples<Scalar> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const unsigned lo = (pts[i].first + 1) / 2;
        Scalar best = pts[i].second;
        for (std::size_t j = 0; j <= i; ++j)
            if (pts[j].first >= lo && pts[j].second < best)
                best = pts[j].second;
        out.emplace_back(pts[i].first, best);
    }
    return out;
}

// ---- reports ------------------------------------------------------------------

enum class Classification { bounded_away_from_zero, decaying_to_zero, inconclusive };
std::string to_string(Classification c);

struct ClassifierConfig
{
    unsigned min_points = 8;
    double significance = 5.0; // limit must exceed this many fit residuals
    double noise_floor = 1e-12; // values below this are indistinguishable from 0
};

struct ReportRow
{
    unsigned n = 0;
    double value = 0;
    double scaled_value = 0; // value / pi
    std::optional<double> running_extrapolation;
    std::optional<double> model_fit;
};

struct SequenceReport
{
    std::string label;
    std::vector<ReportRow> rows;
    std::optional<ErrorModel> model;
    std::optional<double> estimated_limit;
    std::optional<double> estimated_liminf;
    std::optional<double> fit_residual;
    Classification classification = Classification::inconclusive;
    std::optional<std::string> failure; // set when the curve could not be evaluated
};

/// Fits every admissible model, keeps the one with the smallest residual and
/// classifies the sequence. Never classifies from fewer than min_points.
SequenceReport analyze_sequence(const std::string& label, const Samples<double>& values,
                                const ClassifierConfig& config = {});

struct SweepCurve
{
    std::string label;
    ExteriorMap map;
    BoundaryPath path;
};

struct SweepOptions
{
    double tol = 1e-12;
    QuadratureRule rule{};
    ClassifierConfig classifier{};
};

/// ||E'_{n+1}||^2 for n = 0..n_max on each curve by boundary quadrature, then
/// analyze_sequence. A failing curve gets `failure` set; the sweep goes on.
std::vector<SequenceReport> curve_sweep(const std::vector<SweepCurve>& curves, unsigned n_max,
                                        const SweepOptions& options = {});

// ---- the lens limit ------------------------------------------------------------

struct LensLimitRow
{
    unsigned N = 0;
    Real value;           // I_{2N+1,2N+1}
    Real distance;        // |value - 1/(2 pi)|
    Real scaled_distance; // |value/(2N+1) - 1/(2 pi (2N+1))|
};

struct LowerBoundCheck
{
    unsigned n = 0;
    Real n_alpha;
    Real bound; // (1/pi) I_{n+1,n+1} n/(n+1)
    bool holds = false;
};

struct LensLimitReport
{
    unsigned N_max = 0;
    unsigned precision_bits = 0;
    std::vector<LensLimitRow> rows;       // the checkpoints, N in {100, 200, 500, 1000, 2000, ...} <= N_max
    std::vector<LensLimitRow> samples;    // every N used in the fit
    bool distance_decreasing = false;     // over the checkpoints
    Extrapolation<double> fit;            // const + c ln N/N
    double limit_error = 0;               // |fit.limit - 1/(2 pi)|
    double scaled_limit = 0;              // fit.limit / pi, vs 1/(2 pi^2)
    std::optional<double> envelope_constant; // max of scaled_distance N^2/ln N over the fit range
    bool envelope_decreasing = false;
    std::vector<LowerBoundCheck> lower_bound_rows;
    bool lower_bounds_hold = true;
};

/// Lens limit diagnostics from the audited float evaluation of the closed form
/// up to n = 2 N_max at `precision_bits`. `alpha_rows`, if given, are checked
/// against n alpha_n >= (1/pi) I_{n+1,n+1} n/(n+1) - tol.
LensLimitReport lens_limit_check(unsigned N_max, unsigned precision_bits = kDefaultPrecisionBits,
                                 const std::vector<AlphaRow<Real>>* alpha_rows = nullptr, double tol = 1e-8);

} // namespace faberlab
