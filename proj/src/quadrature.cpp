#include "faberlab/quadrature.hpp"

namespace faberlab {

namespace {

bool is_corner(const Complex<double>& z, const std::vector<Corner>& corners)
{
    for (const auto& c : corners)
        if (std::abs(z - c.point.to<double>()) < 1e-9)
            return true;
    return false;
}

} // namespace

std::vector<PanelSpan> panel_layout(const BoundaryPath& path, const QuadratureRule& rule)
{
    if (rule.order == 0 || rule.base_panels == 0)
        throw QuadratureError("quadrature rule needs at least one panel and one node");
    if (!(rule.grading_ratio > 0 && rule.grading_ratio < 1))
        throw QuadratureError("grading ratio must lie in (0, 1)");

    std::vector<PanelSpan> out;
    const double h = 1.0 / rule.base_panels;
    for (std::size_t s = 0; s < path.segments().size(); ++s) {
        const auto [start, end] = segment_endpoints(path.segments()[s]);
        const bool grade_start = is_corner(start, path.corners());
        const bool grade_end = is_corner(end, path.corners());
        for (unsigned p = 0; p < rule.base_panels; ++p) {
            const double a = p * h;
            const double b = (p + 1 == rule.base_panels) ? 1.0 : (p + 1) * h;
            const bool first = p == 0 && grade_start;
            const bool last = p + 1 == rule.base_panels && grade_end;
            if (!first && !last) {
                out.push_back({s, a, b});
                continue;
            }
            if (first && last) {
                // a single panel with corners at both ends: grade each half
                const double m = 0.5 * (a + b);
                std::vector<double> cuts{a};
                for (unsigned d = rule.grading_depth; d >= 1; --d)
                    cuts.push_back(a + (m - a) * std::pow(rule.grading_ratio, d));
                cuts.push_back(m);
                for (unsigned d = 1; d <= rule.grading_depth; ++d)
                    cuts.push_back(b - (b - m) * std::pow(rule.grading_ratio, d));
                cuts.push_back(b);
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                    out.push_back({s, cuts[i], cuts[i + 1]});
                continue;
            }
            if (first) {
                double lo = a;
                for (unsigned d = rule.grading_depth; d >= 1; --d) {
                    const double hi = a + (b - a) * std::pow(rule.grading_ratio, d);
                    out.push_back({s, lo, hi});
                    lo = hi;
                }
                out.push_back({s, lo, b});
            } else {
                double lo = a;
                for (unsigned d = 1; d <= rule.grading_depth; ++d) {
                    const double hi = b - (b - a) * std::pow(rule.grading_ratio, d);
                    out.push_back({s, lo, hi});
                    lo = hi;
                }
                out.push_back({s, lo, b});
            }
        }
    }
    return out;
}

} // namespace faberlab
