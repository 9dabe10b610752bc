#include "faberlab/asymptotics.hpp"

#include "faberlab/exact_lens.hpp"

#include <algorithm>
#include <numbers>
#include <cmath>

namespace faberlab {

std::string to_string(ErrorModel model)
{
    switch (model) {
    case ErrorModel::log_over_n:
        return "const+c*lnN/N";
    case ErrorModel::inverse_n:
        return "const+c/N";
    case ErrorModel::exponential:
        return "exponential";
    }
    return "?";
}

ErrorModel parse_error_model(const std::string& text)
{
    for (ErrorModel m : {ErrorModel::log_over_n, ErrorModel::inverse_n, ErrorModel::exponential})
        if (text == to_string(m))
            return m;
    throw std::invalid_argument("unknown error model '" + text + "'");
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::bounded_away_from_zero:
        return "bounded-away-from-zero";
    case Classification::decaying_to_zero:
        return "decaying-to-zero";
    case Classification::inconclusive:
        return "inconclusive";
    }
    return "?";
}

namespace {

std::optional<Extrapolation<double>> try_fit(const Samples<double>& pts, ErrorModel model)
{
    try {
        return extrapolate(pts, model);
    } catch (const DegenerateFit&) {
        return std::nullopt;
    }
}

// the second half of the samples, where the asymptotic model is meant to hold
Samples<double> tail_half(const Samples<double>& pts)
{
    const unsigned cut = pts.back().first / 2;
    Samples<double> out;
    for (const auto& p : pts)
        if (p.first >= cut)
            out.push_back(p);
    return out.size() >= 3 ? out : pts;
}

} // namespace

SequenceReport analyze_sequence(const std::string& label, const Samples<double>& values, const ClassifierConfig& config)
{
    SequenceReport report;
    report.label = label;
    for (const auto& [n, v] : values)
        report.rows.push_back({n, v, v / std::numbers::pi, std::nullopt, std::nullopt});
    if (values.empty())
        return report;

    double peak = 0;
    for (const auto& p : values)
        peak = std::max(peak, std::abs(p.second));
    const bool enough = values.size() >= config.min_points;

    if (peak <= config.noise_floor) {
        report.estimated_limit = 0.0;
        report.estimated_liminf = 0.0;
        report.fit_residual = 0.0;
        if (enough)
            report.classification = Classification::decaying_to_zero;
        return report;
    }
    if (values.size() < 3)
        return report;

    Samples<double> positive;
    for (const auto& p : values)
        if (p.first > 0)
            positive.push_back(p);
    if (positive.size() < 3)
        return report;
    const Samples<double> tail = tail_half(positive);

    std::optional<Extrapolation<double>> best;
    for (ErrorModel m : {ErrorModel::log_over_n, ErrorModel::inverse_n, ErrorModel::exponential}) {
        auto fit = try_fit(tail, m);
        if (fit && (!best || fit->residual < best->residual))
            best = fit;
    }
    if (!best)
        return report;

    report.model = best->model;
    report.estimated_limit = best->limit;
    report.fit_residual = best->residual;
    for (std::size_t i = 0, t = 0; i < report.rows.size(); ++i) {
        if (t < tail.size() && report.rows[i].n == tail[t].first)
            report.rows[i].model_fit = best->fitted[t++];
    }
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (i + 1 < 3)
            continue;
        const Samples<double> head(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(i + 1));
        if (auto fit = try_fit(head, best->model))
            for (auto& row : report.rows)
                if (row.n == positive[i].first)
                    row.running_extrapolation = fit->limit;
    }

    const Samples<double> minima = window_minima(positive);
    if (auto fit = try_fit(tail_half(minima), best->model))
        report.estimated_liminf = fit->limit;
    else
        report.estimated_liminf = minima.back().second;

    if (!enough)
        return report;
    const double threshold = config.significance * std::max(best->residual, config.noise_floor);
    double tail_peak = 0;
    for (const auto& p : tail)
        tail_peak = std::max(tail_peak, std::abs(p.second));
    if (best->limit > threshold)
        report.classification = Classification::bounded_away_from_zero;
    else if (std::abs(best->limit) <= threshold && tail_peak <= 0.01 * peak)
        report.classification = Classification::decaying_to_zero;
    return report;
}

std::vector<SequenceReport> curve_sweep(const std::vector<SweepCurve>& curves, unsigned n_max,
                                        const SweepOptions& options)
{
    std::vector<SequenceReport> reports;
    for (const SweepCurve& curve : curves) {
        Samples<double> values;
        try {
            QuadratureRule rule = options.rule;
            rule.target_tolerance = options.tol;
            for (unsigned n = 0; n <= n_max; ++n)
                values.emplace_back(n + 1, remainder_norm<double>(n + 1, curve.map, curve.path, rule).value);
        } catch (const std::exception& e) {
            SequenceReport failed = analyze_sequence(curve.label, values, options.classifier);
            failed.classification = Classification::inconclusive;
            failed.failure = e.what();
            reports.push_back(std::move(failed));
            continue;
        }
        reports.push_back(analyze_sequence(curve.label, values, options.classifier));
    }
    return reports;
}

namespace {

std::vector<unsigned> checkpoints(unsigned N_max)
{
    std::vector<unsigned> out;
    for (unsigned decade = 1; decade <= N_max; decade *= 10)
        for (unsigned m : {1u, 2u, 5u})
            if (decade * m <= N_max && 20 * decade * m >= N_max)
                out.push_back(decade * m);
    return out;
}

} // namespace

LensLimitReport lens_limit_check(unsigned N_max, unsigned precision_bits, const std::vector<AlphaRow<Real>>* alpha_rows,
                                 double tol)
{
    if (N_max < 1)
        throw std::invalid_argument("lens_limit_check: N_max must be positive");
    ScopedPrecision scope(precision_bits);
    LensLimitReport report;
    report.N_max = N_max;
    report.precision_bits = precision_bits;

    const std::vector<lens::AuditedReal> table = lens::i_diag_float(2 * N_max, precision_bits);
    const Real target = Real(1) / (2 * pi<Real>());
    auto row_at = [&](unsigned N) {
        LensLimitRow row;
        row.N = N;
        row.value = table[2 * N].value;
        row.distance = abs(row.value - target);
        row.scaled_distance = row.distance / (2 * N + 1);
        return row;
    };

    for (unsigned N : checkpoints(N_max))
        report.rows.push_back(row_at(N));
    report.distance_decreasing = report.rows.size() >= 2;
    report.envelope_decreasing = report.rows.size() >= 2;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        report.distance_decreasing = report.distance_decreasing && report.rows[i].distance < report.rows[i - 1].distance;
        report.envelope_decreasing = report.envelope_decreasing &&
                                     report.rows[i].scaled_distance < report.rows[i - 1].scaled_distance;
    }

    const unsigned first = std::max(1u, N_max / 20);
    Samples<double> pts;
    for (unsigned N = first; N <= N_max; ++N) {
        report.samples.push_back(row_at(N));
        pts.emplace_back(N, to_double(report.samples.back().value));
    }
    if (pts.size() >= 3) {
        report.fit = extrapolate(pts, ErrorModel::log_over_n);
        report.limit_error = std::abs(report.fit.limit - 1 / (2 * std::numbers::pi));
        report.scaled_limit = report.fit.limit / std::numbers::pi;
    } else {
        report.fit = Extrapolation<double>{ErrorModel::log_over_n, pts.back().second, 0.0, 0.0, 0.0, {}};
        report.limit_error = std::abs(report.fit.limit - 1 / (2 * std::numbers::pi));
        report.scaled_limit = report.fit.limit / std::numbers::pi;
    }
    for (const LensLimitRow& row : report.samples)
        if (row.N >= 2) {
            const double c = to_double(row.scaled_distance) * row.N * row.N / std::log(double(row.N));
            report.envelope_constant = std::max(report.envelope_constant.value_or(0.0), c);
        }

    if (alpha_rows) {
        const std::vector<PiLinear> closed = lens::LensSequences(alpha_rows->empty() ? 0 : alpha_rows->back().n).i_diag_all();
        for (const AlphaRow<Real>& a : *alpha_rows) {
            LowerBoundCheck check;
            check.n = a.n;
            check.n_alpha = a.n_alpha;
            check.bound = closed.at(a.n).to_real(precision_bits) / pi<Real>() * Real(a.n) / Real(a.n + 1);
            check.holds = check.n_alpha >= check.bound - Real(tol) && a.alpha > 0;
            report.lower_bounds_hold = report.lower_bounds_hold && check.holds;
            report.lower_bound_rows.push_back(std::move(check));
        }
    }
    return report;
}

} // namespace faberlab
