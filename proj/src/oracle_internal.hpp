#pragma once

// Integer lattice shared by the parallel kernel and the enumeration.

#include <vector>

#include "ucantor/oracle.hpp"

namespace ucantor::detail {

struct Lattice {
  long depth = 0;
  Integer unit;                // lattice points per unit length
  std::vector<Integer> delta;  // delta_j * unit, j = 0..depth
  std::vector<Integer> stride; // (delta_j + epsilon_j) * unit, j = 1..depth
  std::vector<long> n;         // n_j, j = 1..depth
};

/// `extra` joins the common denominator so that given points land on the grid.
Lattice make_lattice(LevelTable& table, long depth, const Integer& extra = 1);

Integer to_lattice(const Rational& v, const Lattice& lat);
Rational from_lattice(const Integer& v, const Lattice& lat);

struct LatticeBall {
  Integer x;
  Integer r;
  long level = 0;
};

struct LatticeEnumeration {
  std::vector<Integer> centers;
  std::vector<LatticeBall> balls;  // sorted by (x, r)
  EnumerationMode mode = EnumerationMode::Full;
};

/// Geometry is taken from levels <= K of `lat` (which may be deeper).
LatticeEnumeration enumerate_lattice(const Lattice& lat, long K, long long budget, EnumerationMode mode,
                                     long window);

void check_schedule(const std::vector<long>& schedule, long eval_depth, bool need_three);

}  // namespace ucantor::detail
