#pragma once

#include "solitonlab/skewlin.hpp"

namespace sl {

// Generator (theta, v, w, M) of the one-parameter subgroup
//   dx/de = (theta + M) x + v,  dt/de = 2 theta t + w.
struct GeneratorRaw {
  double theta = 0.0;
  Vec v;
  double w = 0.0;
  Mat M;
};

enum class Category { A, B, C };

const char* category_name(Category c);

// Coordinate change x = scale * S xhat + p, t = scale^2 that + time_shift.
// The canonical generator equals `multiple` times the raw one written in the
// hatted coordinates.
struct Conjugation {
  Mat S;
  Vec p;
  double time_shift = 0.0;
  double scale = 1.0;
  double multiple = 1.0;
};

struct CanonicalGenerator {
  Category category = Category::A;
  double theta = 0.0;
  double w = 0.0;
  SkewSpectrum spectrum;  // of the block-form canonical M
  Vec v_hat;
  Conjugation conjugation;
};

// Throws Error(invalid_argument) for the trivial subgroup.
CanonicalGenerator classify(const GeneratorRaw& raw);

// Inverse of classify: the raw generator recovered from the canonical one and
// its conjugation.
GeneratorRaw to_raw(const CanonicalGenerator& g);

struct SpaceTimePoint {
  Vec x;
  double t = 0.0;
};

// Orbit of the canonical subgroup through (x0, t0), in canonical coordinates.
SpaceTimePoint orbit(const CanonicalGenerator& g, double eps, const Vec& x0, double t0);

// The same subgroup acting in the original coordinates, obtained by
// conjugating the canonical orbit back.
SpaceTimePoint orbit_raw(const CanonicalGenerator& g, double eps, const Vec& x0, double t0);

}  // namespace sl
