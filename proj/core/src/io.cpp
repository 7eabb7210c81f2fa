#include "invmet/io.hpp"

#include <cstdio>
#include <fstream>

namespace invmet {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline surprises
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

}  // namespace

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

uint64_t fnv1a64(std::string_view text) {
    uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_metric_csv(const std::string& path, const MetricField& field, const GridSpec& spec) {
    auto out = open_out(path);
    out << "x,y,g11,g12,g22\n";
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            const Complex z = spec.node(ix, iy);
            if (!field.domain().interior(z)) continue;
            const Sym2 g = eval_metric(field, z);
            out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(g.xx) << ','
                << fmt17(g.xy) << ',' << fmt17(g.yy) << '\n';
        }
}

void write_layers_csv(const std::string& path, const DistanceGrid& dist, double delta) {
    auto out = open_out(path);
    out << "x,y,dist,gx,gy,layer\n";
    const GridSpec& spec = dist.spec();
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix) {
            if (!dist.node_interior(ix, iy)) continue;
            const Complex z = spec.node(ix, iy);
            const double d = dist.node_dist(ix, iy);
            const Vec2 g = dist.node_grad(ix, iy);
            out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(d) << ','
                << fmt17(g.x) << ',' << fmt17(g.y) << ',' << layer_char(classify_layer(d, delta))
                << '\n';
        }
}

void write_geodesic_csv(const std::string& path, const GeodesicPath& p) {
    auto out = open_out(path);
    out << "t,x,y,vx,vy\n";
    for (size_t i = 0; i < p.t.size(); ++i)
        out << fmt17(p.t[i]) << ',' << fmt17(p.x[i].real()) << ',' << fmt17(p.x[i].imag()) << ','
            << fmt17(p.v[i].x) << ',' << fmt17(p.v[i].y) << '\n';
}

void write_ball_pgm(const std::string& path, const BallIndicator& ball) {
    auto out = open_out(path);
    out << "P2\n" << ball.spec.nx << ' ' << ball.spec.ny << "\n255\n";
    for (int iy = 0; iy < ball.spec.ny; ++iy) {
        for (int ix = 0; ix < ball.spec.nx; ++ix)
            out << (ball.inside[ball.spec.index(ix, iy)] ? 255 : 0)
                << (ix + 1 < ball.spec.nx ? ' ' : '\n');
    }
}

void write_ball_csv(const std::string& path, const BallIndicator& ball) {
    auto out = open_out(path);
    out << "x,y,inside\n";
    for (int iy = 0; iy < ball.spec.ny; ++iy)
        for (int ix = 0; ix < ball.spec.nx; ++ix) {
            const Complex z = ball.spec.node(ix, iy);
            out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ','
                << int(ball.inside[ball.spec.index(ix, iy)]) << '\n';
        }
}

void write_kernel_csv(const std::string& path,
                      std::span<const std::pair<Complex, Complex>> pairs,
                      std::span<const Complex> values) {
    if (pairs.size() != values.size()) throw InvalidInput("write_kernel_csv: size mismatch");
    auto out = open_out(path);
    out << "re(z),im(z),re(w),im(w),re(K),im(K)\n";
    for (size_t i = 0; i < pairs.size(); ++i)
        out << fmt17(pairs[i].first.real()) << ',' << fmt17(pairs[i].first.imag()) << ','
            << fmt17(pairs[i].second.real()) << ',' << fmt17(pairs[i].second.imag()) << ','
            << fmt17(values[i].real()) << ',' << fmt17(values[i].imag()) << '\n';
}

}  // namespace invmet
