#pragma once

#include <cmath>
#include <string>

#include "risd2d/core.hpp"

namespace risd2d {

// Link classes for the placement of the reference loss C. The D2D-local links
// (sd, sr, rd) and the long links towards infrastructure (bd, sc) can be
// configured independently.
enum class LinkClass { Local, Long };

enum class LinkMode { WithDirect, NoDirect };

// All physical quantities in linear units (watts, linear gains, meters).
struct SystemParams {
  int n_elements = 50;           // N
  double element_amplitude = 0.5;  // alpha, common to all elements
  int n_antennas = 1;            // M
  double p_s_max = 10.0;         // W
  double p_b = 631.0;            // W
  double noise_power = 1.0;      // N0, W
  double path_loss_exponent = 2.5;
  double ref_distance = 1.05;    // d0, m
  double ref_path_loss = 1e-3;   // C, linear
  bool apply_ref_loss_local = true;
  bool apply_ref_loss_long = true;
  double sinr_threshold = 1.0;          // gamma_th, linear
  double interference_threshold = 12.589254117941675;  // I^th, W
  double d_bd = 300.0;
  double d_sc = 250.0;
  double d_sd = 5.0;
  bool direct_link = true;

  LinkMode mode() const { return direct_link ? LinkMode::WithDirect : LinkMode::NoDirect; }
  double ref_loss_for(LinkClass cls) const {
    const bool apply = cls == LinkClass::Local ? apply_ref_loss_local : apply_ref_loss_long;
    return apply ? ref_path_loss : 1.0;
  }

  void validate() const {
    if (n_elements < 1) throw DomainError("n_elements must be >= 1");
    if (n_antennas < 1) throw DomainError("n_antennas must be >= 1");
    if (!(element_amplitude >= 0.0 && element_amplitude <= 1.0))
      throw DomainError("element_amplitude must lie in [0,1]");
    if (!(p_s_max >= 0.0) || !(p_b >= 0.0) || !(interference_threshold >= 0.0))
      throw DomainError("powers must be >= 0");
    if (!(noise_power > 0.0)) throw DomainError("noise_power must be > 0");
    if (!(path_loss_exponent > 0.0)) throw DomainError("path_loss_exponent must be > 0");
    if (!(ref_distance > 0.0)) throw DomainError("ref_distance must be > 0");
    if (!(ref_path_loss > 0.0)) throw DomainError("ref_path_loss must be > 0");
    if (!(sinr_threshold > 0.0)) throw DomainError("sinr_threshold must be > 0");
    if (!(d_bd > 0.0 && d_sc > 0.0 && d_sd > 0.0)) throw DomainError("distances must be > 0");
  }
};

enum class TopologyKind { Parallel, Elliptical };

inline const char* to_string(TopologyKind k) {
  return k == TopologyKind::Parallel ? "parallel" : "elliptical";
}

// Fraunhofer distance 2 f L^2 / c.
inline double fraunhofer_distance(double frequency_hz, double aperture_m,
                                  double light_speed = 299792458.0) {
  return 2.0 * frequency_hz * aperture_m * aperture_m / light_speed;
}

// Closed interval of admissible RIS coordinates d.
struct FeasibleInterval {
  double lower;
  double upper;
  bool contains(double d, double tol) const { return d >= lower - tol && d <= upper + tol; }
};

// RIS deployment geometry. For the parallel topology the RIS moves on a line
// at lateral offset y; for the elliptical one it moves on an ellipse with the
// D2D pair at its foci, so that d_sr + d_rd = d_sd / eccentricity.
struct Topology {
  TopologyKind kind = TopologyKind::Parallel;
  double d_sd = 5.0;
  double y = 0.5;
  double eccentricity = 1.0;
  double min_separation = 0.75;  // delta

  // Ellipse major-axis length d_sd / eccentricity.
  double path_length() const { return d_sd / eccentricity; }

  // Throws ConstraintViolation naming C4/C5 (parallel) or C6/C7 (elliptical).
  FeasibleInterval feasible_interval() const {
    if (!(d_sd > 0.0)) throw DomainError("topology d_sd must be > 0");
    if (!(min_separation > 0.0)) throw DomainError("min_separation must be > 0");
    if (kind == TopologyKind::Parallel) {
      if (min_separation * min_separation < y * y)
        throw ConstraintViolation("C4/C5", "delta^2 < y^2, boundary points do not exist");
      const double offset = std::sqrt(min_separation * min_separation - y * y);
      if (offset > d_sd - offset)
        throw ConstraintViolation("C4/C5", "empty interval, sqrt(delta^2-y^2) > d_sd - sqrt(delta^2-y^2)");
      return {offset, d_sd - offset};
    }
    if (!(eccentricity > 0.0 && eccentricity <= 1.0))
      throw DomainError("eccentricity must lie in (0,1]");
    const double len = path_length();
    if (min_separation > len - min_separation)
      throw ConstraintViolation("C6/C7", "empty interval, delta > d_sd/eps - delta");
    return {min_separation, len - min_separation};
  }

  // Checks d against the interval and names the violated bound.
  void check_feasible(double d) const {
    const auto iv = feasible_interval();
    const double tol = 1e-12 * d_sd;
    const bool parallel = kind == TopologyKind::Parallel;
    if (d < iv.lower - tol)
      throw ConstraintViolation(parallel ? "C4" : "C6",
                                "d=" + std::to_string(d) + " below " + std::to_string(iv.lower));
    if (d > iv.upper + tol)
      throw ConstraintViolation(parallel ? "C5" : "C7",
                                "d=" + std::to_string(d) + " above " + std::to_string(iv.upper));
  }

  // (d_sr, d_rd) for RIS coordinate d; no feasibility check.
  std::pair<double, double> ris_distances(double d) const {
    if (kind == TopologyKind::Parallel)
      return {std::hypot(d, y), std::hypot(d_sd - d, y)};
    return {d, path_length() - d};
  }
};

}  // namespace risd2d
