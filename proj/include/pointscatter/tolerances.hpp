#pragma once

namespace pointscatter {

/// Library-wide numerical budgets. Every field can be overridden from the CLI
/// config ("tolerances" block); the defaults are what the test suites pin.
struct Tolerances {
  // ad - bc = 1 check, relative to max(1, |ad|, |bc|)
  double algebraic = 1e-12;
  // strengths -> lambda -> strengths fixed point
  double round_trip = 1e-10;
  // |M_12| at E = +m or E = -m
  double threshold_residual = 1e-10;
  // bisection stop on the phase-removed bound residual
  double bound_residual = 1e-11;
  // closed-form cross-check of bound roots and threshold conditions
  double closed_form = 1e-9;
  // imaginary part left after phase removal, relative to |f|
  double phase_guard = 1e-9;
  // |M_22| at an accepted resonance pole
  double pole_residual = 1e-10;
  // pole deduplication distance, in units of m
  double pole_dedupe = 1e-8;
  // |Im g| at every locus vertex
  double locus = 1e-6;
  // |k| below this (in units of m) counts as a threshold energy
  double near_singular = 1e-9;
};

inline constexpr Tolerances default_tolerances{};

} // namespace pointscatter
