#include "invmet/config.hpp"

#include <json.hpp>

#include "invmet/io.hpp"

namespace invmet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

double num_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Complex complex_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(path, "expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Circle circle_at(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("center") || !j.contains("radius"))
        fail(path, "expected {\"center\": [re, im], \"radius\": r}");
    return {complex_at(j["center"], path + ".center"), num_at(j["radius"], path + ".radius")};
}

Automorphism aut_at(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        fail(path, "expected one of {\"rotation\"|\"moebius\"|\"inversion\"|\"composite\": ...}");
    if (j.contains("rotation")) return Automorphism::rotation(num_at(j["rotation"], path + ".rotation"));
    if (j.contains("inversion")) return Automorphism::inversion(num_at(j["inversion"], path + ".inversion"));
    if (j.contains("moebius")) {
        const auto& m = j["moebius"];
        if (!m.is_array() || m.size() != 4) fail(path + ".moebius", "expected [a, b, c, d]");
        return Automorphism::moebius(
            complex_at(m[0], path + ".moebius[0]"), complex_at(m[1], path + ".moebius[1]"),
            complex_at(m[2], path + ".moebius[2]"), complex_at(m[3], path + ".moebius[3]"));
    }
    if (j.contains("composite")) {
        const auto& parts = j["composite"];
        if (!parts.is_array() || parts.empty()) fail(path + ".composite", "expected a nonempty array");
        std::vector<Automorphism> out;
        for (size_t i = 0; i < parts.size(); ++i)
            out.push_back(aut_at(parts[i], path + ".composite[" + std::to_string(i) + "]"));
        return Automorphism::composite(std::move(out));
    }
    fail(path, "unknown automorphism form");
}

PlanarDomain domain_at(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        fail(path, "expected one of {\"disc\"|\"annulus\"|\"disc_minus_discs\"|\"moebius_image\": ...}");
    if (j.contains("disc")) {
        const Circle c = circle_at(j["disc"], path + ".disc");
        return PlanarDomain::disc(c.center, c.radius);
    }
    if (j.contains("annulus")) {
        const auto& a = j["annulus"];
        if (!a.is_array() || a.size() != 2) fail(path + ".annulus", "expected [inner, outer]");
        return PlanarDomain::annulus(num_at(a[0], path + ".annulus[0]"),
                                     num_at(a[1], path + ".annulus[1]"));
    }
    if (j.contains("disc_minus_discs")) {
        const auto& d = j["disc_minus_discs"];
        if (!d.is_object() || !d.contains("outer") || !d.contains("holes"))
            fail(path + ".disc_minus_discs", "expected {\"outer\": circle, \"holes\": [circle...]}");
        std::vector<Circle> holes;
        const auto& hs = d["holes"];
        if (!hs.is_array()) fail(path + ".disc_minus_discs.holes", "expected an array");
        for (size_t i = 0; i < hs.size(); ++i)
            holes.push_back(
                circle_at(hs[i], path + ".disc_minus_discs.holes[" + std::to_string(i) + "]"));
        return PlanarDomain::disc_minus_discs(circle_at(d["outer"], path + ".disc_minus_discs.outer"),
                                              std::move(holes));
    }
    if (j.contains("moebius_image")) {
        const auto& m = j["moebius_image"];
        if (!m.is_object() || !m.contains("base") || !m.contains("map"))
            fail(path + ".moebius_image", "expected {\"base\": domain, \"map\": automorphism}");
        return PlanarDomain::moebius_image(domain_at(m["base"], path + ".moebius_image.base"),
                                           aut_at(m["map"], path + ".moebius_image.map"));
    }
    fail(path, "unknown domain kind");
}

CompactGroup group_at(const json& j, const PlanarDomain& domain, const std::string& path) {
    if (!j.is_object() || !j.contains("structure")) fail(path, "expected {\"structure\": ...}");
    const std::string s = j["structure"].is_string() ? j["structure"].get<std::string>() : "";
    std::optional<Automorphism> conj;
    if (j.contains("conjugator")) conj = aut_at(j["conjugator"], path + ".conjugator");
    if (s == "finite") {
        if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty())
            fail(path + ".elements", "finite groups need a nonempty element array");
        std::vector<Automorphism> elems;
        for (size_t i = 0; i < j["elements"].size(); ++i)
            elems.push_back(aut_at(j["elements"][i], path + ".elements[" + std::to_string(i) + "]"));
        return CompactGroup::finite(std::move(elems), domain);
    }
    if (s == "circle") return CompactGroup::circle(domain, conj);
    if (s == "circle_with_inversion") {
        if (!j.contains("inversion")) fail(path + ".inversion", "missing inversion element");
        return CompactGroup::circle_with_inversion(domain, aut_at(j["inversion"], path + ".inversion"),
                                                   conj);
    }
    fail(path + ".structure", "expected finite | circle | circle_with_inversion");
}

}  // namespace

Automorphism parse_automorphism_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("automorphism JSON parse error: ") + e.what());
    }
    return aut_at(j, "automorphism");
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config error at <root>: expected an object");

    ExperimentConfig cfg;
    cfg.raw_text = text;
    cfg.config_hash = fnv1a64(text);
    auto defaulted = [&cfg](const std::string& name) { cfg.defaults_applied.push_back(name); };

    if (!j.contains("domain")) throw ConfigError("config error at domain: required field missing");
    cfg.domain = std::make_shared<PlanarDomain>(domain_at(j["domain"], "domain"));

    if (j.contains("group"))
        cfg.group = std::make_shared<CompactGroup>(group_at(j["group"], *cfg.domain, "group"));

    if (j.contains("base_metric")) {
        cfg.base_metric = j["base_metric"].get<std::string>();
        if (cfg.base_metric != "euclidean" && cfg.base_metric != "poincare")
            fail("base_metric", "expected euclidean | poincare");
    } else {
        defaulted("base_metric=euclidean");
    }

    if (j.contains("bergman")) {
        const auto& b = j["bergman"];
        if (!b.is_object()) fail("bergman", "expected an object");
        if (b.contains("kind")) cfg.bergman.kind = b["kind"].get<std::string>();
        if (b.contains("truncation")) cfg.bergman.truncation = b["truncation"].get<int>();
        if (b.contains("poly_degree")) cfg.bergman.poly_degree = b["poly_degree"].get<int>();
        if (b.contains("pole_degree")) cfg.bergman.pole_degree = b["pole_degree"].get<int>();
        const std::string& k = cfg.bergman.kind;
        if (k != "auto" && k != "none" && k != "disc" && k != "annulus_series" && k != "numeric")
            fail("bergman.kind", "expected auto | none | disc | annulus_series | numeric");
    } else {
        defaulted("bergman.kind=auto");
        defaulted("bergman.truncation=60");
    }

    if (j.contains("quadrature_n")) {
        cfg.quadrature_n = j["quadrature_n"].get<int>();
        if (cfg.quadrature_n < 1) fail("quadrature_n", "must be >= 1");
    } else {
        defaulted("quadrature_n=64");
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (!g.is_object() || !g.contains("box") || !g.contains("resolution"))
            fail("grid", "expected {\"box\": [[x0,y0],[x1,y1]], \"resolution\": [nx,ny]}");
        cfg.grid.lo = complex_at(g["box"][0], "grid.box[0]");
        cfg.grid.hi = complex_at(g["box"][1], "grid.box[1]");
        const auto& r = g["resolution"];
        if (!r.is_array() || r.size() != 2) fail("grid.resolution", "expected [nx, ny]");
        cfg.grid.nx = r[0].get<int>();
        cfg.grid.ny = r[1].get<int>();
        cfg.grid.validate();
        cfg.grid_defaulted = false;
    } else {
        cfg.grid = cfg.domain->bounding_grid(256, 256);
        defaulted("grid=domain bounding box at 256x256");
    }

    if (j.contains("delta")) {
        cfg.delta = num_at(j["delta"], "delta");
        if (!(cfg.delta > 0.0)) fail("delta", "must be positive");
    } else {
        defaulted("delta=0.15 x h-inradius (resolved at build time)");
    }
    if (j.contains("epsilon") || j.contains("eps"))
        fail("epsilon", "epsilon is not configurable; it is always 2 delta");

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("commands")) {
        for (const auto& c : j["commands"]) cfg.commands.push_back(c.get<std::string>());
    }

    if (j.contains("geodesic")) {
        const auto& g = j["geodesic"];
        if (g.contains("start")) cfg.geodesic.start = complex_at(g["start"], "geodesic.start");
        if (g.contains("velocity"))
            cfg.geodesic.velocity = Vec2(complex_at(g["velocity"], "geodesic.velocity"));
        if (g.contains("length")) cfg.geodesic.length = num_at(g["length"], "geodesic.length");
        if (g.contains("steps")) cfg.geodesic.steps = g["steps"].get<int>();
        if (g.contains("field")) cfg.geodesic.field = g["field"].get<std::string>();
    }
    if (j.contains("ball")) {
        const auto& b = j["ball"];
        if (b.contains("center")) cfg.ball.center = complex_at(b["center"], "ball.center");
        if (b.contains("radius")) cfg.ball.radius = num_at(b["radius"], "ball.radius");
        if (b.contains("field")) cfg.ball.field = b["field"].get<std::string>();
    }
    if (j.contains("fixed_point")) {
        const auto& f = j["fixed_point"];
        if (f.contains("seed")) cfg.fixed_point.seed = complex_at(f["seed"], "fixed_point.seed");
        if (f.contains("field")) cfg.fixed_point.field = f["field"].get<std::string>();
    }
    if (j.contains("rigidity")) {
        const auto& r = j["rigidity"];
        if (r.contains("boundary_point"))
            cfg.rigidity.boundary_point = complex_at(r["boundary_point"], "rigidity.boundary_point");
        if (r.contains("points")) {
            for (size_t i = 0; i < r["points"].size(); ++i)
                cfg.rigidity.points.push_back(
                    complex_at(r["points"][i], "rigidity.points[" + std::to_string(i) + "]"));
        }
        if (r.contains("tol")) cfg.rigidity.tol = num_at(r["tol"], "rigidity.tol");
        if (r.contains("require_general_position"))
            cfg.rigidity.require_general_position = r["require_general_position"].get<bool>();
    }
    if (j.contains("invariance")) {
        const auto& iv = j["invariance"];
        if (iv.contains("field")) cfg.invariance.field = iv["field"].get<std::string>();
        if (iv.contains("margin")) cfg.invariance.margin = num_at(iv["margin"], "invariance.margin");
        if (iv.contains("n_test")) cfg.invariance.n_test = iv["n_test"].get<int>();
        if (iv.contains("samples")) cfg.invariance.samples = iv["samples"].get<int>();
        if (iv.contains("tolerance"))
            cfg.invariance.tolerance = num_at(iv["tolerance"], "invariance.tolerance");
        const std::string& f = cfg.invariance.field;
        if (f != "euclidean" && f != "averaged" && f != "bergman" && f != "htilde")
            fail("invariance.field", "expected euclidean | averaged | bergman | htilde");
    }
    if (j.contains("kernel_check")) {
        const auto& k = j["kernel_check"];
        if (k.contains("pairs")) cfg.kernel_check.pairs = k["pairs"].get<int>();
        if (k.contains("moebius_maps")) cfg.kernel_check.moebius_maps = k["moebius_maps"].get<int>();
        if (k.contains("margin")) cfg.kernel_check.margin = num_at(k["margin"], "kernel_check.margin");
        if (k.contains("series_truncation"))
            cfg.kernel_check.series_truncation = k["series_truncation"].get<int>();
        if (k.contains("poly_degree")) cfg.kernel_check.poly_degree = k["poly_degree"].get<int>();
        if (k.contains("pole_degree")) cfg.kernel_check.pole_degree = k["pole_degree"].get<int>();
    }
    if (j.contains("curvature")) {
        const auto& c = j["curvature"];
        if (c.contains("count")) cfg.curvature.count = c["count"].get<int>();
        if (c.contains("max_abs")) cfg.curvature.max_abs = num_at(c["max_abs"], "curvature.max_abs");
        if (c.contains("fd_step")) cfg.curvature.fd_step = num_at(c["fd_step"], "curvature.fd_step");
        if (c.contains("expect")) {
            cfg.curvature.expect = num_at(c["expect"], "curvature.expect");
            cfg.curvature.check = true;
        }
        if (c.contains("tol")) cfg.curvature.tol = num_at(c["tol"], "curvature.tol");
        if (c.contains("field")) cfg.curvature.field = c["field"].get<std::string>();
    }
    if (j.contains("noncompact")) {
        const auto& n = j["noncompact"];
        if (!n.is_object() || !n.contains("j") || !n["j"].is_array())
            fail("noncompact", "expected {\"j\": [ints]}");
        cfg.noncompact_j.clear();
        for (const auto& v : n["j"]) cfg.noncompact_j.push_back(v.get<int>());
    }
    return cfg;
}

}  // namespace invmet
