#include "doctest.h"

#include "faberlab/asymptotics.hpp"

#include <cmath>
#include <numbers>

using namespace faberlab;

namespace {

constexpr double kPi = std::numbers::pi;

Samples<double> generate(unsigned first, unsigned last, double (*f)(unsigned))
{
    Samples<double> out;
    for (unsigned n = first; n <= last; ++n)
        out.emplace_back(n, f(n));
    return out;
}

} // namespace

TEST_CASE("error model names round-trip")
{
    for (ErrorModel m : {ErrorModel::log_over_n, ErrorModel::inverse_n, ErrorModel::exponential})
        CHECK(parse_error_model(to_string(m)) == m);
    CHECK(to_string(ErrorModel::log_over_n) == "const+c*lnN/N");
    CHECK_THROWS_AS(parse_error_model("const+c/N^2"), std::invalid_argument);
}

TEST_CASE("each model reproduces its own data")
{
    const auto inv = extrapolate(generate(1, 20, [](unsigned n) { return 1.0 + 1.0 / n; }), ErrorModel::inverse_n);
    CHECK(inv.limit == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(inv.coefficient == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.residual < 1e-14);

    const auto lg = extrapolate(generate(5, 60, [](unsigned n) { return 0.25 - 3 * std::log(double(n)) / n; }),
                                ErrorModel::log_over_n);
    CHECK(lg.limit == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(lg.coefficient == doctest::Approx(-3.0).epsilon(1e-12));

    const auto ex = extrapolate(generate(1, 30, [](unsigned n) { return std::ldexp(1.0, -int(n)); }),
                                ErrorModel::exponential);
    CHECK(std::abs(ex.limit) < 1e-14);
    CHECK(ex.ratio == doctest::Approx(0.5).epsilon(1e-12));

    // short runs use the single-amplitude fit
    const auto short_ex = extrapolate(generate(1, 4, [](unsigned n) { return 2 + std::pow(0.3, n); }),
                                      ErrorModel::exponential);
    CHECK(short_ex.limit == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(short_ex.ratio == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("exponential model handles an odd/even sawtooth")
{
    const auto pts = generate(10, 40, [](unsigned n) { return 0.5 + (n % 2 ? 2.0 : 1.0) * std::pow(0.6, n); });
    const auto fit = extrapolate(pts, ErrorModel::exponential);
    CHECK(fit.limit == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.ratio == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(fit.residual < 1e-14);

    const auto step = extrapolate(Samples<double>{{2, 0.25}, {4, 0.0625}, {6, 0.015625}}, ErrorModel::exponential);
    CHECK(step.ratio == doctest::Approx(0.5).epsilon(1e-12));
    // one parity only: a single amplitude
    Samples<double> even;
    for (unsigned n = 2; n <= 30; n += 2)
        even.emplace_back(n, 1 + std::pow(0.8, n));
    const auto even_fit = extrapolate(even, ErrorModel::exponential);
    CHECK(even_fit.limit == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(even_fit.ratio == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("extended precision fit")
{
    ScopedPrecision p(200);
    Samples<Real> pts;
    for (unsigned n = 1; n <= 12; ++n)
        pts.emplace_back(n, Real(1) / 3 + Real(1) / n);
    const auto fit = extrapolate(pts, ErrorModel::inverse_n);
    CHECK(abs(fit.limit - Real(1) / 3) < Real(1e-55));
}

TEST_CASE("degenerate fits are rejected")
{
    const auto two = generate(1, 2, [](unsigned n) { return double(n); });
    CHECK_THROWS_AS(extrapolate(two, ErrorModel::inverse_n), DegenerateFit);
    CHECK_THROWS_AS(extrapolate(Samples<double>{{0, 1.0}, {1, 2.0}, {2, 3.0}}, ErrorModel::inverse_n), DegenerateFit);
    CHECK_THROWS_AS(extrapolate(Samples<double>{{3, 1.0}, {2, 2.0}, {4, 3.0}}, ErrorModel::inverse_n), DegenerateFit);
    CHECK_THROWS_AS(extrapolate(Samples<double>{{1, 1.0}, {2, 2.0}, {4, 3.0}}, ErrorModel::exponential), DegenerateFit);
    // growing differences
    CHECK_THROWS_AS(extrapolate(generate(1, 10, [](unsigned n) { return std::pow(2.0, n); }), ErrorModel::exponential),
                    DegenerateFit);
    const auto flat = extrapolate(generate(1, 10, [](unsigned) { return 0.75; }), ErrorModel::exponential);
    CHECK(flat.limit == 0.75);
    CHECK(flat.residual == 0.0);
}

TEST_CASE("window minima")
{
    const Samples<double> pts{{1, 5.0}, {2, 1.0}, {3, 4.0}, {4, 3.0}, {5, 6.0}, {6, 2.5}};
    const auto mins = window_minima(pts);
    REQUIRE(mins.size() == pts.size());
    CHECK(mins[0].second == 5.0); // [1, 1]
    CHECK(mins[1].second == 1.0); // [1, 2]
    CHECK(mins[3].second == 1.0); // [2, 4]
    CHECK(mins[4].second == 3.0); // [3, 5]
    CHECK(mins[5].second == 2.5); // [3, 6]
}

TEST_CASE("classifier")
{
    const auto bounded = analyze_sequence("b", generate(1, 40, [](unsigned n) { return 0.2 + 0.1 / n; }));
    CHECK(bounded.classification == Classification::bounded_away_from_zero);
    CHECK(*bounded.estimated_limit == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(*bounded.estimated_liminf == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(bounded.rows.front().scaled_value == doctest::Approx(0.3 / kPi));
    CHECK(bounded.rows.back().model_fit.has_value());
    CHECK(bounded.rows.back().running_extrapolation.has_value());
    CHECK(!bounded.rows.front().running_extrapolation.has_value());

    const auto decaying = analyze_sequence("d", generate(1, 40, [](unsigned n) { return std::pow(0.5, n); }));
    CHECK(decaying.classification == Classification::decaying_to_zero);

    const auto zeros = analyze_sequence("z", generate(1, 10, [](unsigned) { return 0.0; }));
    CHECK(zeros.classification == Classification::decaying_to_zero);

    // too few points never classify
    const auto few = analyze_sequence("f", generate(1, 7, [](unsigned n) { return 0.2 + 0.1 / n; }));
    CHECK(few.classification == Classification::inconclusive);
    CHECK(few.estimated_limit.has_value());
    const auto few_zero = analyze_sequence("fz", generate(1, 7, [](unsigned) { return 0.0; }));
    CHECK(few_zero.classification == Classification::inconclusive);

    ClassifierConfig strict;
    strict.min_points = 100;
    CHECK(analyze_sequence("s", generate(1, 40, [](unsigned n) { return 0.2 + 0.1 / n; }), strict).classification ==
          Classification::inconclusive);
}

TEST_CASE("lens limit diagnostics")
{
    const LensLimitReport r = lens_limit_check(2000, 256);
    CHECK(r.limit_error < 1e-3);
    CHECK(r.scaled_limit == doctest::Approx(1 / (2 * kPi * kPi)).epsilon(1e-3));
    CHECK(r.distance_decreasing);
    CHECK(r.envelope_decreasing);
    REQUIRE(r.envelope_constant);
    CHECK(*r.envelope_constant < 1.0);
    REQUIRE(r.rows.size() == 5);
    const unsigned expected[] = {100, 200, 500, 1000, 2000};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(r.rows[i].N == expected[i]);
    CHECK(r.samples.size() == 1901);

    const LensLimitReport small = lens_limit_check(10, 128);
    CHECK(small.rows.size() >= 2);
    CHECK(small.samples.front().N == 1);
    CHECK_THROWS_AS(lens_limit_check(0, 128), std::invalid_argument);
}

TEST_CASE("lower-bound rows from an alpha run")
{
    AlphaOptions options;
    options.precision_bits = 256;
    const AlphaRun run = run_alpha(lens_boundary(), lens_map(), 10, options);
    const LensLimitReport r = lens_limit_check(10, 256, &run.rows);
    REQUIRE(r.lower_bound_rows.size() == 11);
    CHECK(r.lower_bounds_hold);
    for (const auto& row : r.lower_bound_rows)
        CHECK(row.holds);
    // n = 1: (1/pi) I_{2,2} / 2
    ScopedPrecision p(256);
    const Real i22 = lens::i_diag_closed(1).to_real(256);
    CHECK(abs(r.lower_bound_rows[1].bound - i22 / pi<Real>() / 2) < Real(1e-60));
}

TEST_CASE("sweep over lens, circle and perturbed circle")
{
    const BigRational eps(BigInt(1), BigInt(10));
    const PsiSeries psi = perturbed_circle_psi_series(eps, 120);
    const std::vector<SweepCurve> curves{{"lens", lens_map(), lens_boundary()},
                                         {"circle", circle_map(), unit_circle_boundary()},
                                         {"perturbed", ExteriorMap::from_psi(psi), psi_boundary(psi)},
                                         {"short", ExteriorMap::from_psi(perturbed_circle_psi_series(eps, 5)),
                                          psi_boundary(perturbed_circle_psi_series(eps, 5))}};
    const auto reports = curve_sweep(curves, 32);
    REQUIRE(reports.size() == 4);

    const auto& lens = reports[0];
    CHECK(!lens.failure);
    CHECK(lens.rows.size() == 33);
    CHECK(lens.classification == Classification::bounded_away_from_zero);
    CHECK(*lens.estimated_limit > 0.14);
    CHECK(*lens.estimated_limit < 0.18);
    // samples are ||E'_n||^2 = I_{n,n} for n = 1..33
    CHECK(lens.rows[3].n == 4);
    CHECK(lens.rows[3].value == doctest::Approx(to_double(lens::i_diag_closed(3).to_real(64))).epsilon(1e-10));

    CHECK(reports[1].classification == Classification::decaying_to_zero);

    const auto& perturbed = reports[2];
    CHECK(!perturbed.failure);
    CHECK(perturbed.classification == Classification::decaying_to_zero);
    CHECK(perturbed.model == ErrorModel::exponential);

    // a curve that cannot be evaluated is reported without stopping the sweep
    CHECK(reports[3].failure.has_value());
    CHECK(reports[3].classification == Classification::inconclusive);
}
