#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/soliton.hpp"

namespace sl {

// Unset fields take label-specific defaults.
struct CatalogOptions {
  std::optional<int> dimension;
  std::optional<double> alpha;
  std::vector<double> omegas;  // block frequencies of A in coordinate planes
  int plane = 0;               // shrinking_circle: which rotation plane
  int orientation = 1;         // shrinking_circle: sign of <T, A C>
  std::optional<double> r0;    // abresch_langer: initial distance from the origin
  std::optional<double> y0;    // brakke_wedge: height of the vertex
};

struct NamedSoliton {
  std::string label;
  SolitonParams params;
  PhaseState initial_state;
  std::function<Vec(double)> closed_form;  // arc length -> position, empty if none
  std::optional<double> expected_V;
};

const std::vector<std::string>& catalog_labels();

// line, shrinking_circle, grim_reaper, yin_yang, brakke_wedge, abresch_langer.
NamedSoliton make_named(const std::string& label, const CatalogOptions& opts = {});

struct AbreschLangerProfile {
  Trajectory traj;
  double rotation_number = 0.0;  // total turning of T / 2 pi up to closure (or over the span)
  bool closed = false;           // (C, T) returns within 1e-4 of its start
  double period = 0.0;           // arc length of the first return when closed
  double closure_error = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;

  explicit AbreschLangerProfile(const SolitonParams& p) : traj(p) {}
};

// Planar shrinker (A = 0, v = 0) from C0 = r0 e1, T0 = e2.
AbreschLangerProfile abresch_langer_profile(double alpha, double r0, double s_span, double tol = 1e-12);

struct RotationScanEntry {
  double r0 = 0.0;
  double rotation_number = 0.0;
  bool closed = false;
  double period = 0.0;
};

std::vector<RotationScanEntry> rotation_number_scan(double alpha, const std::vector<double>& r0_values,
                                                    double s_span);

}  // namespace sl
