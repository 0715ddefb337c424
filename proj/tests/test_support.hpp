#pragma once

#include "risd2d/risd2d.hpp"

namespace testing_support {

// Default evaluation profile with the reference loss switched off on every link.
inline risd2d::SystemParams profile() {
  risd2d::SystemParams p;
  p.apply_ref_loss_local = false;
  p.apply_ref_loss_long = false;
  p.p_b = risd2d::db_to_linear(28.0);
  p.p_s_max = 10.0;
  p.interference_threshold = risd2d::db_to_linear(11.0);
  return p;
}

inline risd2d::LinkStats fixed_link(const risd2d::SystemParams& p, double p_s, double d_sr = 1.5, double d_rd = 1.5) {
  using risd2d::LinkClass;
  return risd2d::make_link_stats(p, risd2d::path_loss(d_sr, p, LinkClass::Local),
                                 risd2d::path_loss(d_rd, p, LinkClass::Local), p_s);
}

}  // namespace testing_support
