#include "faberlab/curve_spec.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace faberlab {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw CurveSpecError(where + ": " + what);
}

void check_keys(const ordered_json& obj, const std::string& where, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {})
{
    if (!obj.is_object())
        fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : required)
            known = known || key == k;
        for (const char* k : optional)
            known = known || key == k;
        if (!known)
            fail(where, "unknown key '" + key + "'");
    }
    for (const char* k : required)
        if (!obj.contains(k))
            fail(where, std::string("missing key '") + k + "'");
}

BigRational read_rational(const ordered_json& v, const std::string& where)
{
    if (!v.is_string())
        fail(where, "numbers must be strings (\"p/q\" or decimal)");
    try {
        return BigRational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

ExactComplex read_complex(const ordered_json& v, const std::string& where)
{
    if (v.is_string())
        return ExactComplex(read_rational(v, where));
    check_keys(v, where, {"re", "im"});
    return {read_rational(v["re"], where + ".re"), read_rational(v["im"], where + ".im")};
}

ordered_json write_complex(const ExactComplex& z)
{
    if (z.is_real())
        return z.re.to_string();
    return ordered_json{{"re", z.re.to_string()}, {"im", z.im.to_string()}};
}

int read_int(const ordered_json& v, const std::string& where)
{
    if (!v.is_number_integer())
        fail(where, "expected an integer");
    return v.get<int>();
}

PsiSeries read_psi(const ordered_json& obj, const std::string& where)
{
    check_keys(obj, where, {"scale", "coeffs"});
    PsiSeries psi;
    psi.scale = read_rational(obj["scale"], where + ".scale");
    if (!obj["coeffs"].is_array())
        fail(where + ".coeffs", "expected an array");
    for (std::size_t k = 0; k < obj["coeffs"].size(); ++k)
        psi.coeffs.push_back(read_complex(obj["coeffs"][k], where + ".coeffs[" + std::to_string(k) + "]"));
    return psi;
}

ordered_json write_psi(const PsiSeries& psi)
{
    ordered_json coeffs = ordered_json::array();
    for (const ExactComplex& c : psi.coeffs)
        coeffs.push_back(write_complex(c));
    return ordered_json{{"scale", psi.scale.to_string()}, {"coeffs", coeffs}};
}

ExteriorMap read_map(const ordered_json& obj)
{
    if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string())
        fail("map", "missing key 'kind'");
    MapKind kind;
    try {
        kind = parse_map_kind(obj["kind"].get<std::string>());
    } catch (const MapError& e) {
        fail("map.kind", e.what());
    }
    std::optional<ExteriorMap> map;
    try {
        if (kind == MapKind::closed_form_phi) {
            check_keys(obj, "map", {"kind", "gamma", "phi"});
            if (!obj["phi"].is_array())
                fail("map.phi", "expected an array of {power, coeff}");
            Laurent<ExactComplex>::Terms terms;
            for (std::size_t k = 0; k < obj["phi"].size(); ++k) {
                const std::string where = "map.phi[" + std::to_string(k) + "]";
                const ordered_json& t = obj["phi"][k];
                check_keys(t, where, {"power", "coeff"});
                const int power = read_int(t["power"], where + ".power");
                if (!terms.emplace(power, read_complex(t["coeff"], where + ".coeff")).second)
                    fail(where, "repeated power " + std::to_string(power));
            }
            map = ExteriorMap::from_phi(Laurent<ExactComplex>(std::move(terms)));
        } else {
            check_keys(obj, "map", {"kind", "gamma", "psi"});
            map = ExteriorMap::from_psi(read_psi(obj["psi"], "map.psi"));
        }
    } catch (const MapError& e) {
        fail("map", e.what());
    }
    if (read_rational(obj["gamma"], "map.gamma") != map->gamma())
        fail("map.gamma", "does not match the map (expected " + map->gamma().to_string() + ")");
    return *map;
}

ordered_json write_map(const ExteriorMap& map)
{
    ordered_json out{{"kind", to_string(map.kind())}, {"gamma", map.gamma().to_string()}};
    if (map.kind() == MapKind::closed_form_phi) {
        ordered_json phi = ordered_json::array();
        // highest power first
        const auto& terms = map.phi().terms();
        for (auto it = terms.rbegin(); it != terms.rend(); ++it)
            phi.push_back(ordered_json{{"power", it->first}, {"coeff", write_complex(it->second)}});
        out["phi"] = phi;
    } else {
        out["psi"] = write_psi(map.psi());
    }
    return out;
}

BoundaryPath read_path(const ordered_json& obj, const ExteriorMap& map)
{
    check_keys(obj, "boundary", {"segments"}, {"corners"});
    if (!obj["segments"].is_array())
        fail("boundary.segments", "expected an array");
    std::vector<Segment> segments;
    for (std::size_t k = 0; k < obj["segments"].size(); ++k) {
        const std::string where = "boundary.segments[" + std::to_string(k) + "]";
        const ordered_json& s = obj["segments"][k];
        if (!s.is_object() || !s.contains("type") || !s["type"].is_string())
            fail(where, "missing key 'type'");
        const std::string type = s["type"].get<std::string>();
        if (type == "arc") {
            check_keys(s, where, {"type", "center", "radius_squared", "theta_start", "theta_end"});
            segments.push_back(ArcSegment{read_complex(s["center"], where + ".center"),
                                          read_rational(s["radius_squared"], where + ".radius_squared"),
                                          read_rational(s["theta_start"], where + ".theta_start"),
                                          read_rational(s["theta_end"], where + ".theta_end")});
        } else if (type == "psi_image") {
            check_keys(s, where, {"type"}, {"psi"});
            if (s.contains("psi")) {
                segments.push_back(PsiImageSegment{read_psi(s["psi"], where + ".psi")});
            } else {
                if (map.kind() != MapKind::psi_series)
                    fail(where, "psi_image without 'psi' needs a psi_series map");
                segments.push_back(PsiImageSegment{map.psi()});
            }
        } else {
            fail(where, "unknown segment type '" + type + "'");
        }
    }
    std::vector<Corner> corners;
    if (obj.contains("corners")) {
        if (!obj["corners"].is_array())
            fail("boundary.corners", "expected an array");
        for (std::size_t k = 0; k < obj["corners"].size(); ++k) {
            const std::string where = "boundary.corners[" + std::to_string(k) + "]";
            const ordered_json& c = obj["corners"][k];
            check_keys(c, where, {"point", "exterior_angle"});
            corners.push_back(Corner{read_complex(c["point"], where + ".point"),
                                     read_rational(c["exterior_angle"], where + ".exterior_angle")});
        }
    }
    try {
        return BoundaryPath(std::move(segments), std::move(corners));
    } catch (const BoundaryError& e) {
        fail("boundary", e.what());
    }
}

ordered_json write_path(const BoundaryPath& path, const ExteriorMap& map)
{
    ordered_json segments = ordered_json::array();
    for (const Segment& seg : path.segments()) {
        if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
            segments.push_back(ordered_json{{"type", "arc"},
                                            {"center", write_complex(arc->center)},
                                            {"radius_squared", arc->radius_squared.to_string()},
                                            {"theta_start", arc->theta_start.to_string()},
                                            {"theta_end", arc->theta_end.to_string()}});
        } else {
            const PsiSeries& psi = std::get<PsiImageSegment>(seg).psi;
            ordered_json s{{"type", "psi_image"}};
            if (map.kind() != MapKind::psi_series || !(map.psi() == psi))
                s["psi"] = write_psi(psi);
            segments.push_back(s);
        }
    }
    ordered_json out{{"segments", segments}};
    if (!path.corners().empty()) {
        ordered_json corners = ordered_json::array();
        for (const Corner& c : path.corners())
            corners.push_back(
                ordered_json{{"point", write_complex(c.point)}, {"exterior_angle", c.exterior_angle.to_string()}});
        out["corners"] = corners;
    }
    return out;
}

} // namespace

CurveSpec parse_curve_spec(const std::string& text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw CurveSpecError(std::string("curve spec is not valid JSON: ") + e.what());
    }
    check_keys(doc, "curve spec", {"name", "map", "boundary"});
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty())
        fail("name", "expected a nonempty string");
    const ExteriorMap map = read_map(doc["map"]);
    return CurveSpec{doc["name"].get<std::string>(), map, read_path(doc["boundary"], map)};
}

CurveSpec load_curve_spec(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw CurveSpecError("cannot open curve spec '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_curve_spec(buf.str());
}

std::string to_json(const CurveSpec& spec)
{
    const ordered_json doc{{"name", spec.name}, {"map", write_map(spec.map)}, {"boundary", write_path(spec.path, spec.map)}};
    return doc.dump(2) + "\n";
}

CurveSpec builtin_curve(const std::string& name)
{
    if (name == "lens")
        return {name, lens_map(), lens_boundary()};
    if (name == "circle")
        return {name, circle_map(), unit_circle_boundary()};
    throw CurveSpecError("unknown built-in curve '" + name + "' (expected lens or circle)");
}

} // namespace faberlab
