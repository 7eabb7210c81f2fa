#include "invmet/metric.hpp"

#include <sstream>

namespace invmet {

MetricField::MetricField(PlanarDomain domain, Provenance prov, Eval eval, bool smooth_to_boundary)
    : domain_(std::make_shared<PlanarDomain>(std::move(domain))),
      provenance_(prov),
      eval_(std::move(eval)),
      smooth_(smooth_to_boundary) {}

MetricField MetricField::euclidean(PlanarDomain domain) {
    MetricField f(std::move(domain), Provenance::Euclidean,
                  [](Complex) { return Sym2::identity(); }, true);
    return std::move(f)
        .with_derivative([](Complex) { return std::array<Sym2, 2>{Sym2{0, 0, 0}, Sym2{0, 0, 0}}; })
        .with_conformal_factor([](Complex) { return 1.0; });
}

MetricField MetricField::poincare_disc(PlanarDomain disc) {
    if (disc.kind() != PlanarDomain::Kind::Disc)
        throw InvalidInput("poincare_disc: domain must be a disc");
    const Circle c = disc.components()[0].circle;
    auto lambda = [c](Complex z) {
        const double den = c.radius * c.radius - std::norm(z - c.center);
        return c.radius * c.radius / (den * den);
    };
    MetricField f(std::move(disc), Provenance::Poincare,
                  [lambda](Complex z) { return Sym2::scale(lambda(z)); }, false);
    auto dl = [c](Complex z) {
        // d/dx, d/dy of r^2 / (r^2 - |z-c|^2)^2.
        const Complex rel = z - c.center;
        const double den = c.radius * c.radius - std::norm(rel);
        const double f3 = 4.0 * c.radius * c.radius / (den * den * den);
        return std::array<Sym2, 2>{Sym2::scale(f3 * rel.real()), Sym2::scale(f3 * rel.imag())};
    };
    return std::move(f).with_derivative(dl).with_conformal_factor(lambda);
}

MetricField&& MetricField::with_derivative(Deriv d) && {
    deriv_ = std::move(d);
    return std::move(*this);
}

MetricField&& MetricField::with_conformal_factor(Conformal c) && {
    conformal_ = std::move(c);
    return std::move(*this);
}

Sym2 MetricField::operator()(Complex z) const {
    const double r = domain_->rho(z);
    const double collar = smooth_ ? 1e-3 * domain_->diameter() : 0.0;
    if (r > collar) {
        std::ostringstream os;
        os << "eval_metric: point (" << z.real() << ", " << z.imag() << ") outside "
           << (smooth_ ? "the closure" : "the open domain") << " (rho = " << r << ")";
        throw OutsideDomain(os.str());
    }
    const Sym2 g = eval_(z);
    if (!(g.eigenvalues().first > 0.0)) {
        std::ostringstream os;
        os << "eval_metric: non-SPD matrix at (" << z.real() << ", " << z.imag() << "): [["
           << g.xx << ", " << g.xy << "], [" << g.xy << ", " << g.yy << "]]";
        throw NumericalBreakdown(os.str());
    }
    return g;
}

Sym2 eval_metric(const MetricField& field, Complex z) { return field(z); }

Sym2 pullback(const MetricField& field, const Automorphism& aut, Complex z) {
    const Mat2 j = aut.real_jacobian(z);
    const Sym2 g = eval_metric(field, aut.apply(z));
    const Sym2 p = congruence(j, g);
    if (!(p.eigenvalues().first > 0.0))
        throw NumericalBreakdown("pullback: congruence lost positivity");
    return p;
}

MetricField average(const CompactGroup& group, const MetricField& base, int n) {
    if (group.registration_residual() >= 1e-9)
        throw InvalidGroup("average: a Haar node fails the self-map residual gate");
    auto nodes = std::make_shared<const std::vector<HaarNode>>(group.haar_nodes(n));
    MetricField base_copy = base;
    auto eval = [nodes, base_copy](Complex z) {
        std::vector<Sym2> terms;
        terms.reserve(nodes->size());
        for (const auto& node : *nodes) terms.push_back(node.weight * pullback(base_copy, node.aut, z));
        return pairwise_sum(terms);
    };
    return MetricField(group.domain(), Provenance::Averaged, std::move(eval),
                       base.smooth_to_boundary());
}

double invariance_residual(const MetricField& field, const CompactGroup& group,
                           std::span<const Complex> samples, int n) {
    const auto nodes = group.haar_nodes(n);
    double worst = 0.0;
    for (const Complex z : samples) {
        const Sym2 g0 = eval_metric(field, z);
        const double denom = std::max(1.0, g0.frobenius());
        for (const auto& node : nodes) {
            const Sym2 p = pullback(field, node.aut, z);
            worst = std::max(worst, (p - g0).frobenius() / denom);
        }
    }
    return worst;
}

namespace {

struct GridData {
    GridSpec spec;
    std::vector<Sym2> values;
    std::vector<uint8_t> valid;
};

}  // namespace

MetricField grid_interpolated(const MetricField& source, const GridSpec& spec) {
    spec.validate();
    auto data = std::make_shared<GridData>();
    data->spec = spec;
    data->values.resize(spec.count());
    data->valid.assign(spec.count(), 0);
    const PlanarDomain& dom = source.domain();
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            const Complex z = spec.node(ix, iy);
            if (dom.rho(z) >= 0.0) continue;
            data->values[spec.index(ix, iy)] = eval_metric(source, z);
            data->valid[spec.index(ix, iy)] = 1;
        }
    // Fill boundary-adjacent exterior nodes with their nearest valid neighbor
    // so bilinear cells touching the boundary stay usable.
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            if (data->valid[spec.index(ix, iy)]) continue;
            for (int r = 1; r <= 2; ++r) {
                for (int dy = -r; dy <= r && !data->valid[spec.index(ix, iy)]; ++dy)
                    for (int dx = -r; dx <= r; ++dx) {
                        const int jx = ix + dx, jy = iy + dy;
                        if (jx < 0 || jy < 0 || jx >= spec.nx || jy >= spec.ny) continue;
                        if (data->valid[spec.index(jx, jy)] != 1) continue;
                        data->values[spec.index(ix, iy)] = data->values[spec.index(jx, jy)];
                        data->valid[spec.index(ix, iy)] = 2;  // copied, not sampled
                        break;
                    }
                if (data->valid[spec.index(ix, iy)]) break;
            }
        }
    auto eval = [data](Complex z) {
        const GridSpec& s = data->spec;
        double fx = (z.real() - s.lo.real()) / s.dx();
        double fy = (z.imag() - s.lo.imag()) / s.dy();
        int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, s.nx - 2);
        int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, s.ny - 2);
        const double tx = std::clamp(fx - ix, 0.0, 1.0);
        const double ty = std::clamp(fy - iy, 0.0, 1.0);
        const auto at = [&](int jx, int jy) -> const Sym2& {
            if (!data->valid[s.index(jx, jy)])
                throw OutsideDomain("grid_interpolated: cell has no sampled corner support");
            return data->values[s.index(jx, jy)];
        };
        const Sym2 g = (1 - tx) * ((1 - ty) * at(ix, iy) + ty * at(ix, iy + 1)) +
                       tx * ((1 - ty) * at(ix + 1, iy) + ty * at(ix + 1, iy + 1));
        return floor_eigenvalues(g, 1e-10);
    };
    return MetricField(dom, Provenance::GridInterpolated, std::move(eval), true);
}

}  // namespace invmet
