#pragma once

#include "invmet/config.hpp"
#include "invmet/io.hpp"

namespace invmet {

struct RunResult {
    int exit_code = 0;  // 0 success, 1 error, 2 paper-property/tolerance violation
    std::vector<std::string> outputs;
    std::string message;
};

// Executes one command (build-metric, invariance-report, layers, geodesic,
// ball, kernel-check, fixed-point, rigidity, curvature, demo-noncompact),
// writing its artifacts plus a run manifest into out_dir.
RunResult run_command(const ExperimentConfig& config, const std::string& command,
                      const std::string& out_dir, uint64_t seed);

// The averaging/blending pipeline behind build-metric, exposed for tests.
struct MetricPipeline {
    MetricField base;
    MetricField h;        // Haar average of base (base itself without a group)
    MetricField bergman;  // equals h when bergman_is_h
    MetricField H;        // blend_H(h, bergman, eps = 2 delta)
    MetricField htilde;   // blend_Htilde(h, H, delta)
    std::shared_ptr<const DistanceGrid> dist;
    double delta = 0.0;
    double eps = 0.0;
    bool bergman_is_h = false;
    std::string bergman_desc;
};
MetricPipeline build_pipeline(const ExperimentConfig& config);

// Deterministic interior sample set with a relative margin; Moebius images of
// annuli sample the base annulus polar grid and push it through the map.
std::vector<Complex> invariance_samples(const PlanarDomain& domain, int count,
                                        double margin_frac);

}  // namespace invmet
