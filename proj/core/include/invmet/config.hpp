#pragma once

#include <memory>
#include <string>
#include <vector>

#include "invmet/blend.hpp"
#include "invmet/kernel.hpp"

namespace invmet {

// Parsed experiment description.  Every default the file did not set is
// recorded in defaults_applied for the run manifest.  epsilon is never a
// config field: it is always derived as 2 delta.
struct ExperimentConfig {
    std::string raw_text;
    uint64_t config_hash = 0;

    std::shared_ptr<const PlanarDomain> domain;
    std::shared_ptr<const CompactGroup> group;  // optional

    std::string base_metric = "euclidean";  // or "poincare"

    struct Bergman {
        std::string kind = "auto";  // auto|none|disc|annulus_series|numeric
        int truncation = 60;
        int poly_degree = 48;
        int pole_degree = -1;
    } bergman;

    int quadrature_n = 64;
    GridSpec grid;
    bool grid_defaulted = true;
    double delta = 0.0;  // 0: default to 0.15 x h-inradius at build time
    std::string output_dir = "out";
    std::vector<std::string> commands;

    struct Geodesic {
        Complex start{0.5, 0.0};
        Vec2 velocity{1.0, 0.0};
        double length = 1.0;
        int steps = 1000;
        std::string field = "htilde";  // euclidean|base|averaged|bergman|htilde
    } geodesic;

    struct Ball {
        Complex center{0.0, 0.0};
        double radius = 0.5;
        std::string field = "htilde";
    } ball;

    struct FixedPoint {
        Complex seed{0.1, 0.1};
        std::string field = "averaged";
    } fixed_point;

    struct Rigidity {
        Complex boundary_point{1.0, 0.0};
        std::vector<Complex> points;
        double tol = 1e-6;
        bool require_general_position = true;
    } rigidity;

    struct Invariance {
        std::string field = "averaged";  // euclidean|averaged|bergman|htilde
        double margin = 0.08;            // fraction of the domain scale
        int n_test = 100;
        int samples = 200;
        double tolerance = -1.0;  // <0: 1e-12 finite groups, 1e-8 circle groups
    } invariance;

    struct KernelCheck {
        int pairs = 20;
        int moebius_maps = 50;
        double margin = 0.2;
        int series_truncation = 120;  // annulus series order for the oracle match
        int poly_degree = 120;
        int pole_degree = 60;
    } kernel_check;

    struct Curvature {
        int count = 50;
        double max_abs = 0.7;     // sample |z| bound
        double fd_step = 2e-3;
        double expect = 0.0;      // used only when check = true
        double tol = 1e-3;
        bool check = false;
        std::string field = "base";
    } curvature;

    std::vector<int> noncompact_j{2, 10, 100};

    std::vector<std::string> defaults_applied;
};

// Throws ConfigError with a field-path diagnostic on any schema violation.
ExperimentConfig parse_config(const std::string& json_text);

// Automorphism/domain JSON forms, shared with the reports:
//   {"rotation": t} | {"moebius": [a,b,c,d]} | {"inversion": k} |
//   {"composite": [...]}, complex numbers as [re, im].
Automorphism parse_automorphism_json(const std::string& json_text);

}  // namespace invmet
