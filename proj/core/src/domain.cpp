#include "invmet/domain.hpp"

#include <algorithm>
#include <limits>

#include "invmet/automorphism.hpp"

namespace invmet {

void GridSpec::validate() const {
    if (nx < 8 || ny < 8) throw InvalidInput("GridSpec: resolution must be >= 8 per axis");
    if (hi.real() <= lo.real() || hi.imag() <= lo.imag())
        throw InvalidInput("GridSpec: degenerate bounding box");
}

PlanarDomain PlanarDomain::disc(Complex center, double radius) {
    if (radius <= 0.0) throw InvalidDomain("disc: radius must be positive");
    PlanarDomain d;
    d.kind_ = Kind::Disc;
    d.components_ = {{{center, radius}, +1}};
    return d;
}

PlanarDomain PlanarDomain::annulus(double inner, double outer) {
    if (inner <= 0.0 || inner >= outer)
        throw InvalidDomain("annulus: need 0 < inner < outer");
    PlanarDomain d;
    d.kind_ = Kind::Annulus;
    d.components_ = {{{Complex{0.0, 0.0}, outer}, +1}, {{Complex{0.0, 0.0}, inner}, -1}};
    return d;
}

PlanarDomain PlanarDomain::disc_minus_discs(const Circle& outer, std::vector<Circle> holes) {
    for (size_t i = 0; i < holes.size(); ++i) {
        if (holes[i].radius <= 0.0) throw InvalidDomain("disc_minus_discs: hole radius <= 0");
        if (std::abs(holes[i].center - outer.center) + holes[i].radius >= outer.radius)
            throw InvalidDomain("disc_minus_discs: hole closure not inside the outer disc");
        for (size_t j = i + 1; j < holes.size(); ++j)
            if (std::abs(holes[i].center - holes[j].center) <= holes[i].radius + holes[j].radius)
                throw InvalidDomain("disc_minus_discs: hole closures intersect");
    }
    PlanarDomain d;
    d.kind_ = Kind::DiscMinusDiscs;
    d.components_.push_back({outer, +1});
    for (const auto& h : holes) d.components_.push_back({h, -1});
    return d;
}

PlanarDomain PlanarDomain::moebius_image(const PlanarDomain& base, const Automorphism& map) {
    // Injectivity on the closure fails exactly when the pole sits inside it.
    if (auto p = map.pole()) {
        if (base.rho(*p) <= 1e-12)
            throw InvalidDomain("moebius_image: map has a pole in the base closure");
    }
    PlanarDomain d;
    d.kind_ = Kind::MoebiusImage;
    // Orientation of each image circle is fixed by one mapped interior point.
    Complex probe{0.0, 0.0};
    {
        const GridSpec box = base.bounding_grid(48, 48);
        double best = std::numeric_limits<double>::max();
        for (int iy = 0; iy < box.ny; ++iy)
            for (int ix = 0; ix < box.nx; ++ix) {
                const Complex z = box.node(ix, iy);
                const double r = base.rho(z);
                if (r < best) {
                    best = r;
                    probe = z;
                }
            }
    }
    const Complex w0 = map.apply(probe);
    for (const auto& comp : base.components()) {
        const Circle img = map.map_circle(comp.circle);
        const int sign = std::abs(w0 - img.center) < img.radius ? +1 : -1;
        d.components_.push_back({img, sign});
    }
    d.base_ = std::make_shared<PlanarDomain>(base);
    d.map_ = std::make_shared<Automorphism>(map);
    return d;
}

double PlanarDomain::rho(Complex z, DefiningForm form) const {
    double r = -std::numeric_limits<double>::max();
    for (const auto& c : components_)
        r = std::max(r, form == DefiningForm::SignedDistance ? c.piece(z) : c.piece_quadratic(z));
    return r;
}

int PlanarDomain::nearest_component(Complex z) const {
    int best = 0;
    double dist = std::numeric_limits<double>::max();
    for (size_t i = 0; i < components_.size(); ++i) {
        const double d = std::abs(components_[i].circle.signed_distance(z));
        if (d < dist) {
            dist = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Vec2 PlanarDomain::grad_rho(Complex z, DefiningForm form) const {
    const int k = nearest_component(z);
    const double dk = std::abs(components_[k].circle.signed_distance(z));
    for (size_t i = 0; i < components_.size(); ++i) {
        if (static_cast<int>(i) == k) continue;
        if (std::abs(std::abs(components_[i].circle.signed_distance(z)) - dk) < 1e-12)
            throw AmbiguousComponent("grad_rho: equidistant boundary components at this point");
    }
    return grad_rho_component(z, k, form);
}

Vec2 PlanarDomain::grad_rho_component(Complex z, int component, DefiningForm form) const {
    const auto& c = components_.at(component);
    const Complex rel = z - c.circle.center;
    if (form == DefiningForm::Quadratic)
        return {2.0 * c.sign * rel.real(), 2.0 * c.sign * rel.imag()};
    const double a = std::abs(rel);
    if (a == 0.0) throw InvalidInput("grad_rho: gradient undefined at the circle center");
    return {c.sign * rel.real() / a, c.sign * rel.imag() / a};
}

double PlanarDomain::boundary_distance(Complex z) const {
    if (!interior(z)) throw OutsideDomain("boundary_distance: point is not interior");
    double d = std::numeric_limits<double>::max();
    for (const auto& c : components_) d = std::min(d, std::abs(c.circle.signed_distance(z)));
    return d;
}

std::vector<Complex> PlanarDomain::sample_interior(const GridSpec& spec, double margin) const {
    spec.validate();
    if (margin < 0.0) throw InvalidInput("sample_interior: margin must be >= 0");
    std::vector<Complex> out;
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            const Complex z = spec.node(ix, iy);
            if (rho(z) < 0.0 && boundary_distance(z) >= margin) out.push_back(z);
        }
    if (out.empty()) throw EmptySample("sample_interior: no points survive the margin");
    return out;
}

double PlanarDomain::diameter() const {
    // Outer component circles bound the closure.
    double lo_x = std::numeric_limits<double>::max(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = hi_x;
    for (const auto& c : components_) {
        if (c.sign < 0) continue;
        lo_x = std::min(lo_x, c.circle.center.real() - c.circle.radius);
        hi_x = std::max(hi_x, c.circle.center.real() + c.circle.radius);
        lo_y = std::min(lo_y, c.circle.center.imag() - c.circle.radius);
        hi_y = std::max(hi_y, c.circle.center.imag() + c.circle.radius);
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

double PlanarDomain::inradius() const {
    if (inradius_cache_ >= 0.0) return inradius_cache_;
    double r = 0.0;
    switch (kind_) {
        case Kind::Disc:
            r = components_[0].circle.radius;
            break;
        case Kind::Annulus:
            r = 0.5 * (components_[0].circle.radius - components_[1].circle.radius);
            break;
        default: {
            const GridSpec box = bounding_grid(512, 512);
            for (int iy = 0; iy < box.ny; ++iy)
                for (int ix = 0; ix < box.nx; ++ix) {
                    const Complex z = box.node(ix, iy);
                    if (rho(z) < 0.0) r = std::max(r, boundary_distance(z));
                }
        }
    }
    inradius_cache_ = r;
    return r;
}

GridSpec PlanarDomain::bounding_grid(int nx, int ny, double pad) const {
    double lo_x = std::numeric_limits<double>::max(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = hi_x;
    for (const auto& c : components_) {
        if (c.sign < 0) continue;
        lo_x = std::min(lo_x, c.circle.center.real() - c.circle.radius);
        hi_x = std::max(hi_x, c.circle.center.real() + c.circle.radius);
        lo_y = std::min(lo_y, c.circle.center.imag() - c.circle.radius);
        hi_y = std::max(hi_y, c.circle.center.imag() + c.circle.radius);
    }
    const double p = pad * std::hypot(hi_x - lo_x, hi_y - lo_y);
    return {{lo_x - p, lo_y - p}, {hi_x + p, hi_y + p}, nx, ny};
}

const PlanarDomain* PlanarDomain::moebius_base() const { return base_.get(); }

const Automorphism* PlanarDomain::moebius_map() const { return map_.get(); }

}  // namespace invmet
