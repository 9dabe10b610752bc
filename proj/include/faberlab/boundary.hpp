#pragma once

#include "faberlab/exterior_map.hpp"

#include <variant>
#include <vector>

namespace faberlab {

/// Circular arc z = center + r e^{i theta}, theta from pi*theta_start to
/// pi*theta_end (counterclockwise when end > start). The radius is stored
/// squared so that arcs like |z - i| = sqrt(2) stay exact.
struct ArcSegment
{
    ExactComplex center;
    BigRational radius_squared;
    BigRational theta_start; // units of pi
    BigRational theta_end;   // units of pi
    friend bool operator==(const ArcSegment&, const ArcSegment&) = default;
};

/// Closed curve z = psi(e^{i theta}), theta in [0, 2 pi]. Carries the
/// boundary value of phi along with each point.
struct PsiImageSegment
{
    PsiSeries psi;
    friend bool operator==(const PsiImageSegment&, const PsiImageSegment&) = default;
};

using Segment = std::variant<ArcSegment, PsiImageSegment>;

struct Corner
{
    ExactComplex point;
    BigRational exterior_angle; // units of pi, in (0, 2)
    friend bool operator==(const Corner&, const Corner&) = default;
};

class BoundaryError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Piecewise-analytic closed Jordan curve, positively oriented.
class BoundaryPath
{
public:
    /// Validates that the segments chain and close, that the curve is
    /// counterclockwise, and that every corner angle lies in (0, 2).
    BoundaryPath(std::vector<Segment> segments, std::vector<Corner> corners);

    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<Corner>& corners() const { return corners_; }

    friend bool operator==(const BoundaryPath&, const BoundaryPath&) = default;

private:
    std::vector<Segment> segments_;
    std::vector<Corner> corners_;
};

/// |z - i| = sqrt 2 for Im z >= 0 joined with |z + i| = sqrt 2 for Im z <= 0;
/// corners at +-1 with exterior angle pi/2.
BoundaryPath lens_boundary();
/// The inner arcs of the same two circles (the reflection of the lens under 1/z).
BoundaryPath mirror_lens_boundary();
BoundaryPath unit_circle_boundary();
BoundaryPath psi_boundary(const PsiSeries& psi);

// ---- pointwise evaluation ---------------------------------------------------

/// A point of the boundary at parameter t in [0, 1] of one segment.
template <typename Scalar>
struct BoundaryNode
{
    Complex<Scalar> z;
    Complex<Scalar> dz;      // dz/dt
    bool has_phi = false;    // set on psi-image segments
    Complex<Scalar> w;       // phi(z), |w| = 1
    Complex<Scalar> dw;      // dw/dt
};

/// Segment evaluated in Complex<Scalar>; every segment is parametrized on [0, 1].
template <typename Scalar>
class SegmentEval
{
public:
    explicit SegmentEval(const Segment& seg)
    {
        if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
            using std::sqrt;
            kind_ = Kind::arc;
            center_ = arc->center.template to<Scalar>();
            radius_ = sqrt(arc->radius_squared.template to<Scalar>());
            const Scalar p = pi<Scalar>();
            theta0_ = arc->theta_start.template to<Scalar>() * p;
            span_ = (arc->theta_end - arc->theta_start).template to<Scalar>() * p;
        } else {
            const auto& psi = std::get<PsiImageSegment>(seg).psi;
            kind_ = Kind::psi;
            typename Laurent<Complex<Scalar>>::Terms t;
            t.emplace(1, Complex<Scalar>(psi.scale.template to<Scalar>(), Scalar(0)));
            for (std::size_t k = 0; k < psi.coeffs.size(); ++k)
                if (!psi.coeffs[k].is_zero())
                    t.emplace(-static_cast<int>(k), psi.coeffs[k].template to<Scalar>());
            psi_ = Laurent<Complex<Scalar>>(std::move(t));
            dpsi_ = psi_.derivative();
            theta0_ = Scalar(0);
            span_ = 2 * pi<Scalar>();
        }
    }

    BoundaryNode<Scalar> at(const Scalar& t) const
    {
        BoundaryNode<Scalar> node;
        const Complex<Scalar> e = unit_phasor<Scalar>(theta0_ + span_ * t);
        const Complex<Scalar> i_span(Scalar(0), span_);
        if (kind_ == Kind::arc) {
            node.z = center_ + e * radius_;
            node.dz = i_span * e * radius_;
        } else {
            node.has_phi = true;
            node.w = e;
            node.dw = i_span * e;
            node.z = psi_.evaluate(e);
            node.dz = dpsi_.evaluate(e) * node.dw;
        }
        return node;
    }

private:
    enum class Kind { arc, psi };
    Kind kind_ = Kind::arc;
    Complex<Scalar> center_;
    Scalar radius_;
    Scalar theta0_, span_;
    Laurent<Complex<Scalar>> psi_, dpsi_;
};

/// Start and end points of a segment in double precision.
std::pair<Complex<double>, Complex<double>> segment_endpoints(const Segment& seg);

} // namespace faberlab
