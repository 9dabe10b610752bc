#include "faberlab/boundary.hpp"

#include <cmath>

namespace faberlab {

std::pair<Complex<double>, Complex<double>> segment_endpoints(const Segment& seg)
{
    const SegmentEval<double> eval(seg);
    return {eval.at(0.0).z, eval.at(1.0).z};
}

namespace {

// Signed area by the trapezoid rule on a fine sampling; only its sign matters.
double signed_area_estimate(const std::vector<Segment>& segments)
{
    double area = 0;
    for (const auto& seg : segments) {
        const SegmentEval<double> eval(seg);
        constexpr int samples = 512;
        Complex<double> prev = eval.at(0.0).z;
        for (int s = 1; s <= samples; ++s) {
            const Complex<double> cur = eval.at(static_cast<double>(s) / samples).z;
            area += 0.5 * (prev.real() * cur.imag() - cur.real() * prev.imag());
            prev = cur;
        }
    }
    return area;
}

} // namespace

BoundaryPath::BoundaryPath(std::vector<Segment> segments, std::vector<Corner> corners)
    : segments_(std::move(segments)), corners_(std::move(corners))
{
    if (segments_.empty())
        throw BoundaryError("boundary path has no segments");
    for (const auto& seg : segments_) {
        if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
            if (arc->radius_squared.sign() <= 0)
                throw BoundaryError("arc radius must be positive");
            if (arc->theta_start == arc->theta_end)
                throw BoundaryError("arc has an empty angle range");
        } else if (segments_.size() != 1) {
            throw BoundaryError("a psi-image segment must be the only segment of its path");
        }
    }
    constexpr double chain_tol = 1e-12;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto end = segment_endpoints(segments_[i]).second;
        const auto start = segment_endpoints(segments_[(i + 1) % segments_.size()]).first;
        if (std::abs(end - start) > chain_tol)
            throw BoundaryError("segments do not chain into a closed curve at segment " + std::to_string(i));
    }
    for (const auto& c : corners_) {
        if (c.exterior_angle.sign() <= 0 || c.exterior_angle >= BigRational(2))
            throw BoundaryError("corner exterior angle must lie in (0, 2) units of pi (cusps are not supported)");
    }
    if (signed_area_estimate(segments_) <= 0)
        throw BoundaryError("boundary path must be counterclockwise");
}

BoundaryPath lens_boundary()
{
    const BigRational q(BigInt(1), BigInt(4));
    ArcSegment upper{ExactComplex(0, 1), BigRational(2), BigRational(-1) * q, BigRational(5) * q};
    ArcSegment lower{ExactComplex(0, -1), BigRational(2), BigRational(3) * q, BigRational(9) * q};
    const BigRational half(BigInt(1), BigInt(2));
    return BoundaryPath({upper, lower}, {Corner{ExactComplex(1), half}, Corner{ExactComplex(-1), half}});
}

BoundaryPath mirror_lens_boundary()
{
    const BigRational q(BigInt(1), BigInt(4));
    // lower arc of |z - i| = sqrt2 from -1 to 1, then upper arc of |z + i| = sqrt2 back
    ArcSegment lower{ExactComplex(0, 1), BigRational(2), BigRational(5) * q, BigRational(7) * q};
    ArcSegment upper{ExactComplex(0, -1), BigRational(2), BigRational(1) * q, BigRational(3) * q};
    const BigRational three_halves(BigInt(3), BigInt(2));
    return BoundaryPath({lower, upper},
                        {Corner{ExactComplex(1), three_halves}, Corner{ExactComplex(-1), three_halves}});
}

BoundaryPath unit_circle_boundary()
{
    return BoundaryPath({ArcSegment{ExactComplex(0), BigRational(1), BigRational(0), BigRational(2)}}, {});
}

BoundaryPath psi_boundary(const PsiSeries& psi)
{
    return BoundaryPath({PsiImageSegment{psi}}, {});
}

} // namespace faberlab
