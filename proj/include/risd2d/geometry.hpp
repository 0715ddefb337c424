#pragma once

#include <cmath>
#include <utility>

#include "risd2d/params.hpp"

namespace risd2d {

// Large-scale gain C * (d0/d)^eta; C applies per link class as configured.
inline double path_loss(double d, const SystemParams& p, LinkClass cls = LinkClass::Long) {
  if (!(d > 0.0)) throw DomainError("path_loss: distance must be > 0, got " + std::to_string(d));
  return p.ref_loss_for(cls) * std::pow(p.ref_distance / d, p.path_loss_exponent);
}

// (beta_sr, beta_rd) for RIS coordinate d. Throws ConstraintViolation when d
// leaves the feasible interval of the topology.
inline std::pair<double, double> ris_betas(double d, const Topology& topo, const SystemParams& p) {
  topo.check_feasible(d);
  const auto [d_sr, d_rd] = topo.ris_distances(d);
  return {path_loss(d_sr, p, LinkClass::Local), path_loss(d_rd, p, LinkClass::Local)};
}

inline double z_parallel(double d, const Topology& topo) {
  const double y2 = topo.y * topo.y;
  const double e = topo.d_sd - d;
  return (y2 + d * d) * (y2 + e * e);
}

inline double z_elliptical(double d, const Topology& topo) {
  const double e = topo.path_length() - d;
  return d * d * e * e;
}

inline double z_objective(double d, const Topology& topo) {
  return topo.kind == TopologyKind::Parallel ? z_parallel(d, topo) : z_elliptical(d, topo);
}

}  // namespace risd2d
