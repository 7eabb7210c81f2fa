#pragma once

#include <string>
#include <string_view>

#include "invmet/blend.hpp"
#include "invmet/geometry.hpp"

namespace invmet {

// All floating-point text is written with 17 significant digits so reruns are
// byte-identical and round-trips are exact.
std::string fmt17(double x);

// Stable 64-bit hash for config fingerprints in manifests.
uint64_t fnv1a64(std::string_view text);

// x,y,g11,g12,g22 rows over the grid's interior nodes, row-major.
void write_metric_csv(const std::string& path, const MetricField& field, const GridSpec& spec);

// x,y,dist,gx,gy,layer rows over the grid's interior nodes, row-major.
void write_layers_csv(const std::string& path, const DistanceGrid& dist, double delta);

// t,x,y,vx,vy rows.
void write_geodesic_csv(const std::string& path, const GeodesicPath& path_data);

// P2 PGM, 255 inside the ball, 0 outside; and x,y,inside CSV.
void write_ball_pgm(const std::string& path, const BallIndicator& ball);
void write_ball_csv(const std::string& path, const BallIndicator& ball);

// re(z),im(z),re(w),im(w),re(K),im(K) rows.
void write_kernel_csv(const std::string& path,
                      std::span<const std::pair<Complex, Complex>> pairs,
                      std::span<const Complex> values);

}  // namespace invmet
