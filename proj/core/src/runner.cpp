#include "invmet/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

namespace invmet {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

class StepTimer {
public:
    void start(const std::string& name) {
        name_ = name;
        t0_ = std::chrono::steady_clock::now();
    }
    void stop(json& timings) {
        const auto dt = std::chrono::steady_clock::now() - t0_;
        timings[name_] = std::chrono::duration<double, std::milli>(dt).count();
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

// Bergman field for the configured domain.  Moebius images pull the base
// field back through the map (the Bergman metric is biholomorphism-invariant,
// so this IS the image domain's Bergman metric); "none" hands back h.
struct BergmanChoice {
    MetricField field;
    std::string desc;
    bool is_h;
};

MetricField conformal_disc_bergman(const PlanarDomain& domain) {
    const Circle c = domain.components()[0].circle;
    auto lambda = [c](Complex z) {
        const double den = c.radius * c.radius - std::norm(z - c.center);
        return 2.0 * c.radius * c.radius / (den * den);
    };
    auto deriv = [c](Complex z) {
        const Complex rel = z - c.center;
        const double den = c.radius * c.radius - std::norm(rel);
        const double f3 = 8.0 * c.radius * c.radius / (den * den * den);
        return std::array<Sym2, 2>{Sym2::scale(f3 * rel.real()), Sym2::scale(f3 * rel.imag())};
    };
    MetricField f(domain, Provenance::Bergman,
                  [lambda](Complex z) { return Sym2::scale(lambda(z)); }, false);
    return std::move(f).with_derivative(deriv).with_conformal_factor(lambda);
}

BergmanChoice build_bergman(const PlanarDomain& domain, const MetricField& h,
                            const ExperimentConfig::Bergman& opts) {
    std::string kind = opts.kind;
    if (kind == "auto") {
        switch (domain.kind()) {
            case PlanarDomain::Kind::Disc: kind = "disc"; break;
            case PlanarDomain::Kind::Annulus: kind = "annulus_series"; break;
            case PlanarDomain::Kind::MoebiusImage: kind = "pullback"; break;
            case PlanarDomain::Kind::DiscMinusDiscs: kind = "none"; break;
        }
    }
    if (kind == "none") return {h, "none (bergman slot carries h)", true};
    if (kind == "disc") {
        if (domain.kind() != PlanarDomain::Kind::Disc)
            throw ConfigError("bergman.kind=disc requires a disc domain");
        return {conformal_disc_bergman(domain), "disc closed form", false};
    }
    if (kind == "annulus_series") {
        if (domain.kind() != PlanarDomain::Kind::Annulus)
            throw ConfigError("bergman.kind=annulus_series requires an annulus domain");
        const double r = domain.components()[1].circle.radius;
        const double R = domain.components()[0].circle.radius;
        return {bergman_metric_field(KernelModel::annulus_series(r, R, opts.truncation), domain),
                "annulus series N=" + std::to_string(opts.truncation), false};
    }
    if (kind == "numeric") {
        KernelNumericOptions nopts;
        nopts.poly_degree = opts.poly_degree;
        nopts.pole_degree = opts.pole_degree;
        return {bergman_metric_field(KernelModel::numeric_basis(domain, nopts), domain),
                "numeric Gram oracle", false};
    }
    if (kind == "pullback") {
        if (domain.kind() != PlanarDomain::Kind::MoebiusImage)
            throw ConfigError("bergman pullback requires a Moebius image domain");
        const PlanarDomain base = *domain.moebius_base();
        const Automorphism inv = domain.moebius_map()->inverse();
        BergmanChoice base_choice = build_bergman(base, h, opts);
        if (base_choice.is_h)
            throw ConfigError("bergman pullback: base domain has no kernel model");
        MetricField base_field = base_choice.field;
        auto eval = [base_field, inv](Complex z) { return pullback(base_field, inv, z); };
        MetricField f(domain, Provenance::Bergman, std::move(eval), false);
        if (base_field.conformal()) {
            auto conf = [base_field, inv](Complex z) {
                return base_field.conformal_factor(inv.apply(z)) * std::norm(inv.derivative(z));
            };
            f = std::move(f).with_conformal_factor(conf);
        }
        return {std::move(f), "pullback of base (" + base_choice.desc + ")", false};
    }
    throw ConfigError("unknown bergman kind: " + kind);
}

MetricField base_field_for(const ExperimentConfig& cfg) {
    if (cfg.base_metric == "poincare") return MetricField::poincare_disc(*cfg.domain);
    return MetricField::euclidean(*cfg.domain);
}

}  // namespace

MetricPipeline build_pipeline(const ExperimentConfig& cfg) {
    MetricField base = base_field_for(cfg);
    MetricField h = cfg.group ? average(*cfg.group, base, cfg.quadrature_n) : base;
    auto dist = std::make_shared<const DistanceGrid>(*cfg.domain, h, cfg.grid);
    const double delta = cfg.delta > 0.0 ? cfg.delta : 0.15 * dist->max_dist();
    const double eps = 2.0 * delta;
    BergmanChoice bc = build_bergman(*cfg.domain, h, cfg.bergman);
    MetricField H = blend_H(h, bc.field, dist, eps);
    MetricField htilde = blend_Htilde(h, H, dist, delta);
    return {std::move(base), std::move(h),      std::move(bc.field), std::move(H),
            std::move(htilde), std::move(dist), delta,               eps,
            bc.is_h,           std::move(bc.desc)};
}

std::vector<Complex> invariance_samples(const PlanarDomain& domain, int count,
                                        double margin_frac) {
    std::vector<Complex> out;
    const PlanarDomain* base = domain.moebius_base();
    if (domain.kind() == PlanarDomain::Kind::MoebiusImage && base &&
        base->kind() == PlanarDomain::Kind::Annulus) {
        const double r = base->components()[1].circle.radius;
        const double R = base->components()[0].circle.radius;
        const double m = margin_frac * (R - r);
        const int n_rad = std::max(4, count / 16);
        const int n_ang = (count + n_rad - 1) / n_rad;
        const Automorphism& map = *domain.moebius_map();
        for (int i = 0; i < n_rad && static_cast<int>(out.size()) < count; ++i) {
            const double s = (r + m) + (R - r - 2 * m) * (i + 0.5) / n_rad;
            for (int k = 0; k < n_ang && static_cast<int>(out.size()) < count; ++k)
                out.push_back(map.apply(std::polar(s, 2.0 * kPi * (k + 0.13) / n_ang)));
        }
        return out;
    }
    // Margin is a fraction of the domain "gap" (twice the inradius).
    const auto pool =
        domain.sample_interior(domain.bounding_grid(64, 64), margin_frac * 2.0 * domain.inradius());
    const size_t stride = std::max<size_t>(1, pool.size() / count);
    for (size_t i = 0; i < pool.size() && static_cast<int>(out.size()) < count; i += stride)
        out.push_back(pool[i]);
    return out;
}

namespace {

const MetricField& select_field(const MetricPipeline& pipe, const MetricField& euclid,
                                const std::string& name) {
    if (name == "euclidean") return euclid;
    if (name == "base") return pipe.base;
    if (name == "averaged") return pipe.h;
    if (name == "bergman") return pipe.bergman;
    if (name == "htilde") return pipe.htilde;
    throw ConfigError("unknown field selector: " + name);
}

struct CommandContext {
    const ExperimentConfig& cfg;
    std::string out_dir;
    uint64_t seed;
    json manifest;
    json timings;
    RunResult result;

    std::string path(const std::string& name) {
        result.outputs.push_back(name);
        return (fs::path(out_dir) / name).string();
    }
    void violation(const std::string& invariant) {
        result.exit_code = 2;
        result.message = invariant;
    }
};

void write_manifest(CommandContext& ctx, const std::string& command) {
    ctx.manifest["command"] = command;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(ctx.cfg.config_hash));
    ctx.manifest["config_hash"] = hash;
    ctx.manifest["seed"] = ctx.seed;
    ctx.manifest["version"] = "invmet 0.1.0";
    ctx.manifest["compiler"] = __VERSION__;
    ctx.manifest["defaults_applied"] = ctx.cfg.defaults_applied;
    ctx.manifest["outputs"] = ctx.result.outputs;
    ctx.manifest["timings_ms"] = ctx.timings;
    ctx.manifest["exit_code"] = ctx.result.exit_code;
    if (!ctx.result.message.empty()) ctx.manifest["failure"] = ctx.result.message;
    std::ofstream out(fs::path(ctx.out_dir) / ("manifest_" + command + ".json"));
    out << ctx.manifest.dump(2) << '\n';
}

void cmd_build_metric(CommandContext& ctx) {
    StepTimer timer;
    timer.start("pipeline");
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    timer.stop(ctx.timings);
    ctx.manifest["delta"] = pipe.delta;
    ctx.manifest["epsilon"] = pipe.eps;
    ctx.manifest["bergman"] = pipe.bergman_desc;
    timer.start("export_averaged");
    write_metric_csv(ctx.path("metric_averaged.csv"), pipe.h, ctx.cfg.grid);
    timer.stop(ctx.timings);
    timer.start("export_htilde");
    write_metric_csv(ctx.path("metric_htilde.csv"), pipe.htilde, ctx.cfg.grid);
    timer.stop(ctx.timings);
    timer.start("export_layers");
    write_layers_csv(ctx.path("layers.csv"), *pipe.dist, pipe.delta);
    timer.stop(ctx.timings);
}

void cmd_layers(CommandContext& ctx) {
    StepTimer timer;
    timer.start("pipeline");
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    timer.stop(ctx.timings);
    ctx.manifest["delta"] = pipe.delta;
    timer.start("export_layers");
    write_layers_csv(ctx.path("layers.csv"), *pipe.dist, pipe.delta);
    timer.stop(ctx.timings);
}

void cmd_invariance(CommandContext& ctx) {
    if (!ctx.cfg.group) throw ConfigError("invariance-report: config has no group");
    StepTimer timer;
    timer.start("pipeline");
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    const MetricField euclid = MetricField::euclidean(*ctx.cfg.domain);
    timer.stop(ctx.timings);
    const auto& iv = ctx.cfg.invariance;
    const MetricField& field = select_field(pipe, euclid, iv.field);
    const auto samples = invariance_samples(*ctx.cfg.domain, iv.samples, iv.margin);
    timer.start("residual");
    const double residual = invariance_residual(field, *ctx.cfg.group, samples, iv.n_test);
    timer.stop(ctx.timings);
    double tol = iv.tolerance;
    if (tol < 0.0)
        tol = ctx.cfg.group->structure() == CompactGroup::Structure::Finite ? 1e-12 : 1e-8;
    json report;
    report["field"] = iv.field;
    report["samples"] = samples.size();
    report["n_test"] = iv.n_test;
    report["quadrature_n"] = ctx.cfg.quadrature_n;
    report["residual"] = residual;
    report["tolerance"] = tol;
    report["pass"] = residual <= tol;
    std::ofstream(ctx.path("invariance_report.json")) << report.dump(2) << '\n';
    ctx.manifest["residual"] = residual;
    if (residual > tol)
        ctx.violation("invariance residual " + fmt17(residual) + " exceeds tolerance " +
                      fmt17(tol) + " for field " + iv.field);
}

void cmd_geodesic(CommandContext& ctx) {
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    const MetricField euclid = MetricField::euclidean(*ctx.cfg.domain);
    const auto& gc = ctx.cfg.geodesic;
    const auto path =
        geodesic(select_field(pipe, euclid, gc.field), gc.start, gc.velocity, gc.length, gc.steps);
    write_geodesic_csv(ctx.path("geodesic.csv"), path);
    ctx.manifest["exited_early"] = path.exited;
    ctx.manifest["points"] = path.t.size();
}

void cmd_ball(CommandContext& ctx) {
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    const MetricField euclid = MetricField::euclidean(*ctx.cfg.domain);
    const auto& bc = ctx.cfg.ball;
    const auto ball =
        metric_ball(select_field(pipe, euclid, bc.field), bc.center, bc.radius, ctx.cfg.grid);
    write_ball_pgm(ctx.path("ball.pgm"), ball);
    write_ball_csv(ctx.path("ball.csv"), ball);
    ctx.manifest["nodes_inside"] = ball.count();
}

void cmd_fixed_point(CommandContext& ctx) {
    if (!ctx.cfg.group) throw ConfigError("fixed-point: config has no group");
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    const MetricField euclid = MetricField::euclidean(*ctx.cfg.domain);
    const auto p = common_fixed_point(*ctx.cfg.group,
                                      select_field(pipe, euclid, ctx.cfg.fixed_point.field),
                                      ctx.cfg.fixed_point.seed);
    json report;
    report["found"] = p.has_value();
    if (p) report["point"] = complex_json(*p);
    std::ofstream(ctx.path("fixed_point.json")) << report.dump(2) << '\n';
    ctx.manifest["found"] = p.has_value();
}

json rigidity_json(const RigidityReport& rep) {
    json out;
    out["tol"] = rep.tol;
    out["deviation_tol"] = rep.deviation_tol;
    out["identity_only"] = rep.identity_only;
    out["entries"] = json::array();
    for (const auto& e : rep.entries) {
        json je;
        je["element"] = e.element;
        je["fix_residual"] = e.fix_residual;
        je["derivative_residual"] = e.derivative_residual;
        je["max_deviation"] = e.max_deviation;
        out["entries"].push_back(je);
    }
    return out;
}

void cmd_rigidity(CommandContext& ctx) {
    if (!ctx.cfg.group) throw ConfigError("rigidity: config has no group");
    const auto& rc = ctx.cfg.rigidity;
    json report;
    const auto boundary = boundary_rigidity_check(*ctx.cfg.group, rc.boundary_point, rc.tol);
    report["boundary_fixed_point"] = rigidity_json(boundary);
    bool ok = boundary.identity_only;
    if (!rc.points.empty()) {
        const auto general = general_position_fix_check(*ctx.cfg.group, rc.points, rc.tol,
                                                        rc.require_general_position);
        report["general_position"] = rigidity_json(general);
        ok = ok && general.identity_only;
    }
    std::ofstream(ctx.path("rigidity.json")) << report.dump(2) << '\n';
    if (!ok) ctx.violation("rigidity scan reported a non-identity element fixing the data");
}

void cmd_curvature(CommandContext& ctx) {
    const MetricPipeline pipe = build_pipeline(ctx.cfg);
    const MetricField euclid = MetricField::euclidean(*ctx.cfg.domain);
    const auto& cc = ctx.cfg.curvature;
    const MetricField& field = select_field(pipe, euclid, cc.field);
    std::vector<Complex> pts;
    for (const Complex z : invariance_samples(*ctx.cfg.domain, 4 * cc.count, 0.05))
        if (std::abs(z) <= cc.max_abs && static_cast<int>(pts.size()) < cc.count) pts.push_back(z);
    std::ofstream out(fs::path(ctx.out_dir) / "curvature.csv");
    ctx.result.outputs.push_back("curvature.csv");
    out << "x,y,K\n";
    double worst = 0.0;
    for (const Complex z : pts) {
        const auto k = gauss_curvature(field, z, cc.fd_step);
        out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(k.value) << '\n';
        if (cc.check) worst = std::max(worst, std::abs(k.value - cc.expect));
    }
    ctx.manifest["points"] = pts.size();
    if (cc.check) {
        ctx.manifest["max_error"] = worst;
        if (worst > cc.tol)
            ctx.violation("curvature deviates from " + fmt17(cc.expect) + " by " + fmt17(worst));
    }
}

void cmd_noncompact(CommandContext& ctx) {
    const PlanarDomain disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
    std::ofstream out(fs::path(ctx.out_dir) / "noncompact.csv");
    ctx.result.outputs.push_back("noncompact.csv");
    out << "j,phi_re,phi_im,boundary_distance\n";
    bool exact = true;
    for (const int j : ctx.cfg.noncompact_j) {
        const double c = 1.0 - 1.0 / j;
        const Automorphism phi = Automorphism::moebius(1.0, c, c, 1.0);
        const Complex img = phi.apply({0.0, 0.0});
        const double dist = disc.boundary_distance(img);
        out << j << ',' << fmt17(img.real()) << ',' << fmt17(img.imag()) << ',' << fmt17(dist)
            << '\n';
        if (img != Complex{c, 0.0}) exact = false;
        if (std::abs(dist - 1.0 / j) > 1e-15) exact = false;
    }
    ctx.manifest["exact"] = exact;
    if (!exact) ctx.violation("noncompactness demo: phi_j(0) != 1 - 1/j");
}

void cmd_kernel_check(CommandContext& ctx) {
    const auto& kc = ctx.cfg.kernel_check;
    std::mt19937_64 rng(ctx.seed ^ 0x9e3779b97f4a7c15ull);
    json report;
    bool ok = true;
    StepTimer timer;

    // Disc closed form vs the Gram oracle.
    timer.start("disc_oracle");
    {
        const PlanarDomain disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        const KernelModel closed = KernelModel::disc_closed();
        KernelNumericOptions opts;
        opts.poly_degree = std::max(25, kc.poly_degree / 2);
        const KernelModel oracle = KernelModel::numeric_basis(disc, opts);
        std::uniform_real_distribution<double> rad(0.0, 1.0 - kc.margin);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        std::vector<std::pair<Complex, Complex>> pairs;
        std::vector<Complex> values;
        double worst = 0.0;
        for (int i = 0; i < kc.pairs; ++i) {
            const Complex z = std::polar(rad(rng), ang(rng));
            const Complex w = std::polar(rad(rng), ang(rng));
            const Complex kc1 = closed(z, w), kc2 = oracle(z, w);
            pairs.emplace_back(z, w);
            values.push_back(kc1);
            worst = std::max(worst, std::abs(kc1 - kc2) / std::abs(kc1));
        }
        write_kernel_csv(ctx.path("kernel_samples.csv"), pairs, values);
        report["disc_oracle_rel_error"] = worst;
        if (worst > 1e-6) {
            ok = false;
            ctx.violation("disc kernel vs numeric oracle: " + fmt17(worst) + " > 1e-6");
        }
    }
    timer.stop(ctx.timings);

    // Annulus series vs the Gram oracle.
    timer.start("annulus_oracle");
    {
        const PlanarDomain ann = PlanarDomain::annulus(1.0, 2.0);
        const KernelModel series = KernelModel::annulus_series(1.0, 2.0, kc.series_truncation);
        KernelNumericOptions opts;
        opts.poly_degree = kc.poly_degree;
        opts.pole_degree = kc.pole_degree;
        opts.radial_nodes = 128;
        const KernelModel oracle = KernelModel::numeric_basis(ann, opts);
        std::uniform_real_distribution<double> rad(1.0 + kc.margin, 2.0 - kc.margin);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        double worst = 0.0;
        int warnings = 0;
        for (int i = 0; i < kc.pairs; ++i) {
            const Complex z = std::polar(rad(rng), ang(rng));
            const Complex w = std::polar(rad(rng), ang(rng));
            const auto checked = series.eval_checked(z, w);
            if (checked.truncation_warning) ++warnings;
            const Complex k2 = oracle(z, w);
            // Scale-relative: the annulus kernel has zeros, so the error is
            // measured against sqrt(K(z,z) K(w,w)).
            const double scale = std::sqrt(series.diagonal(z) * series.diagonal(w));
            worst = std::max(worst, std::abs(checked.value - k2) / scale);
        }
        report["annulus_oracle_rel_error"] = worst;
        report["annulus_truncation_warnings"] = warnings;
        if (worst > 1e-6) {
            ok = false;
            ctx.violation("annulus kernel vs numeric oracle: " + fmt17(worst) + " > 1e-6");
        }
    }
    timer.stop(ctx.timings);

    // Transformation law over random disc Moebius maps.
    timer.start("transformation_law");
    {
        const KernelModel closed = KernelModel::disc_closed();
        std::uniform_real_distribution<double> rad(0.0, 0.7);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        double worst = 0.0;
        for (int i = 0; i < kc.moebius_maps; ++i) {
            const Complex a = std::polar(rad(rng), ang(rng));
            const Automorphism phi = Automorphism::composite(
                {Automorphism::moebius(1.0, -a, -std::conj(a), 1.0),
                 Automorphism::rotation(ang(rng))});
            std::vector<std::pair<Complex, Complex>> pairs;
            for (int p = 0; p < 8; ++p)
                pairs.emplace_back(std::polar(rad(rng), ang(rng)), std::polar(rad(rng), ang(rng)));
            worst = std::max(worst, transformation_residual(closed, closed, phi, pairs));
        }
        report["disc_transformation_residual"] = worst;
        if (worst > 1e-10) {
            ok = false;
            ctx.violation("disc transformation law residual " + fmt17(worst) + " > 1e-10");
        }
    }
    timer.stop(ctx.timings);

    // Image-domain law: base series against the oracle on the Moebius image.
    if (ctx.cfg.domain->kind() == PlanarDomain::Kind::MoebiusImage &&
        ctx.cfg.domain->moebius_base()->kind() == PlanarDomain::Kind::Annulus) {
        timer.start("image_oracle");
        const PlanarDomain& image = *ctx.cfg.domain;
        const PlanarDomain& base = *image.moebius_base();
        const Automorphism& map = *image.moebius_map();
        const double r = base.components()[1].circle.radius;
        const double R = base.components()[0].circle.radius;
        const KernelModel series = KernelModel::annulus_series(r, R, kc.series_truncation);
        KernelNumericOptions opts;
        opts.poly_degree = 64;
        opts.pole_degree = 32;
        const KernelModel oracle = KernelModel::numeric_basis(image, opts);
        // Base points whose images keep the margin in image coordinates; the
        // pairs also avoid kernel zeros (the residual divides by |K|).
        std::vector<Complex> pool;
        for (int i = 0; i < 48 && pool.size() < 32; ++i)
            for (int k = 0; k < 16 && pool.size() < 32; ++k) {
                const Complex zeta =
                    std::polar(r + (R - r) * (0.05 + 0.02 * i), 2.0 * kPi * k / 16.0);
                const Complex z = map.apply(zeta);
                if (image.interior(z) && image.boundary_distance(z) >= kc.margin)
                    pool.push_back(zeta);
            }
        std::vector<std::pair<Complex, Complex>> pairs;
        if (pool.size() >= 4) {
            std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
            int guard = 0;
            while (static_cast<int>(pairs.size()) < kc.pairs && ++guard < 64 * kc.pairs) {
                const Complex z = pool[pick(rng)], w = pool[pick(rng)];
                const double scale = std::sqrt(series.diagonal(z) * series.diagonal(w));
                if (std::abs(series(z, w)) > 0.05 * scale) pairs.emplace_back(z, w);
            }
        }
        if (pairs.empty())
            throw InvalidInput("kernel-check: no image-domain pairs satisfy the margin");
        const double worst = transformation_residual(series, oracle, map, pairs);
        report["image_transformation_residual"] = worst;
        report["image_oracle_basis"] = oracle.basis_size();
        report["image_oracle_gram_condition"] = oracle.gram_condition();
        if (worst > 1e-5) {
            ok = false;
            ctx.violation("image-domain transformation residual " + fmt17(worst) + " > 1e-5");
        }
        timer.stop(ctx.timings);
    }

    report["pass"] = ok;
    std::ofstream(ctx.path("kernel_report.json")) << report.dump(2) << '\n';
}

}  // namespace

RunResult run_command(const ExperimentConfig& config, const std::string& command,
                      const std::string& out_dir, uint64_t seed) {
    CommandContext ctx{config, out_dir, seed, json::object(), json::object(), RunResult{}};
    try {
        fs::create_directories(out_dir);
        if (command == "build-metric") cmd_build_metric(ctx);
        else if (command == "invariance-report") cmd_invariance(ctx);
        else if (command == "layers") cmd_layers(ctx);
        else if (command == "geodesic") cmd_geodesic(ctx);
        else if (command == "ball") cmd_ball(ctx);
        else if (command == "kernel-check") cmd_kernel_check(ctx);
        else if (command == "fixed-point") cmd_fixed_point(ctx);
        else if (command == "rigidity") cmd_rigidity(ctx);
        else if (command == "curvature") cmd_curvature(ctx);
        else if (command == "demo-noncompact") cmd_noncompact(ctx);
        else throw ConfigError("unknown command: " + command);
        write_manifest(ctx, command);
    } catch (const Error& e) {
        ctx.result.exit_code = 1;
        ctx.result.message = e.what();
        try {
            write_manifest(ctx, command);
        } catch (...) {
        }
    }
    return ctx.result;
}

}  // namespace invmet
