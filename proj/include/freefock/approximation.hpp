#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "freefock/grid.hpp"
#include "freefock/toy_fock.hpp"

// Discrete approximations of the time-t noise operators: each partition cell
// carries a copy of the single-site toy operators (creation of the normalized
// cell indicator and friends, sandwiched by the partition projector), and the
// time-t operator is their weighted sum over the cells before t.  The weight
// exponent for the matrix-unit version is 1 on the vacuum-to-vacuum unit, 1/2
// when exactly one index is the vacuum, 0 otherwise.

namespace freefock {

// The cells {i : t_i < t} of a partition and the right edge t_up of the last
// one.  t_up >= t always, with equality exactly when t is a partition point.
struct TimeWindow {
  int count = 0;       // number of summand cells
  int upper_cell = 0;  // base-cell index of t_up
  double t_up = 0.0;
};

inline TimeWindow time_window(const Grid& g, const PartitionSpec& S, double t) {
  const int t_cell = time_to_cell(g, t);
  if (t_cell == 0) throw std::invalid_argument("time window requires t > 0");
  TimeWindow w;
  while (w.count < S.size() && S.lower(w.count) < t_cell) ++w.count;
  w.upper_cell = S.bounds()[w.count];
  w.t_up = w.upper_cell * g.cell_volume();
  return w;
}

namespace detail {

inline StepFunction cell_indicator(const Grid& g, const PartitionSpec& S, int cell, Complex scale) {
  return StepFunction::indicator(g, S.lower(cell), S.upper(cell), scale);
}

// Value (t_{i+1} - t_i) on every summand cell; the gauge symbol of the
// discrete vacuum-to-vacuum operator.
inline StepFunction volume_staircase(const Grid& g, const PartitionSpec& S, const TimeWindow& w) {
  auto b = StepFunction::zero(g);
  for (int i = 0; i < w.count; ++i) {
    const Complex v{S.volume(g, i), 0};
    for (int c = S.lower(i); c < S.upper(i); ++c) b.values[c] = v;
  }
  return b;
}

}  // namespace detail

// One S-cell operator of the partition toy space, acting on the full space
// through the projector sandwich.  `cell` indexes a partition cell.
inline StepTensor partition_site_op(NoiseKind kind, int cell, const PartitionSpec& S, const StepTensor& f) {
  const Grid& g = f.grid();
  if (cell < 0 || cell >= S.size()) throw std::invalid_argument("partition cell out of range");
  const StepTensor pf = project(S, f);
  const double root_v = std::sqrt(S.volume(g, cell));
  switch (kind) {
    case NoiseKind::creation:
      return project(S, creation(detail::cell_indicator(g, S, cell, Complex{1.0 / root_v, 0}), 1, pf));
    case NoiseKind::annihilation:
      return project(S, annihilation(detail::cell_indicator(g, S, cell, Complex{1.0 / root_v, 0}), 1, pf));
    case NoiseKind::gauge:
      return project(S, gauge(detail::cell_indicator(g, S, cell, Complex{1, 0}), pf));
    case NoiseKind::time:
      return pf - project(S, gauge(detail::cell_indicator(g, S, cell, Complex{1, 0}), pf));
  }
  throw std::logic_error("partition_site_op: bad kind");
}

// Matrix-unit analogue: sends local basis vector `source` to `target` at one
// partition cell (0 is the vacuum direction).
inline StepTensor partition_unit_op(int source, int target, int cell, const PartitionSpec& S, const StepTensor& f) {
  const Grid& g = f.grid();
  const int n = g.multiplicity();
  if (cell < 0 || cell >= S.size()) throw std::invalid_argument("partition cell out of range");
  if (source < 0 || source > n || target < 0 || target > n)
    throw std::invalid_argument("matrix unit index out of range");
  const StepTensor pf = project(S, f);
  const double root_v = std::sqrt(S.volume(g, cell));
  if (source == 0 && target == 0) {
    StepTensor out = pf;
    for (int c = 1; c <= n; ++c)
      out -= project(S, gauge_map(detail::cell_indicator(g, S, cell, Complex{1, 0}), c, c, pf));
    return out;
  }
  if (source == 0)
    return project(S, creation(detail::cell_indicator(g, S, cell, Complex{1.0 / root_v, 0}), target, pf));
  if (target == 0)
    return project(S, annihilation(detail::cell_indicator(g, S, cell, Complex{1.0 / root_v, 0}), source, pf));
  return project(S, gauge_map(detail::cell_indicator(g, S, cell, Complex{1, 0}), source, target, pf));
}

// The four time-t operators on the step-tensor model, exact at grid
// resolution: creation/annihilation/gauge with the plain indicator of [0, t),
// and multiplication by t.
inline StepTensor true_op_apply(NoiseKind kind, double t, const StepTensor& f) {
  const Grid& g = f.grid();
  const int t_cell = time_to_cell(g, t);
  const auto ind = StepFunction::indicator(g, 0, t_cell);
  switch (kind) {
    case NoiseKind::creation: return creation(ind, 1, f);
    case NoiseKind::annihilation: return annihilation(ind, 1, f);
    case NoiseKind::gauge: return gauge(ind, f);
    case NoiseKind::time: {
      StepTensor out = f;
      out *= Complex{t_cell * g.cell_volume(), 0};
      return out;
    }
  }
  throw std::logic_error("true_op_apply: bad kind");
}

inline StepTensor multiplicity_true_op(int source, int target, double t, const StepTensor& f) {
  const Grid& g = f.grid();
  const int n = g.multiplicity();
  if (source < 0 || source > n || target < 0 || target > n)
    throw std::invalid_argument("matrix unit index out of range");
  const int t_cell = time_to_cell(g, t);
  const auto ind = StepFunction::indicator(g, 0, t_cell);
  if (source == 0 && target == 0) {
    StepTensor out = f;
    out *= Complex{t_cell * g.cell_volume(), 0};
    return out;
  }
  if (source == 0) return creation(ind, target, f);
  if (target == 0) return annihilation(ind, source, f);
  return gauge_map(ind, source, target, f);
}

namespace detail {

inline void check_routes(const StepTensor& literal, const StepTensor& shortcut) {
  if (sup_diff(literal, shortcut) > 1e-12)
    throw std::logic_error("discrete operator: summed and closed forms disagree");
}

}  // namespace detail

// The discrete time-t operator: the weighted sum of per-cell operators over
// the window cells.  Also evaluates the closed form (projector sandwich of
// the time-t_up operator) and insists the two agree.
inline StepTensor discrete_op_apply(NoiseKind kind, double t, const PartitionSpec& S, const StepTensor& f) {
  const Grid& g = f.grid();
  const TimeWindow w = time_window(g, S, t);
  const StepTensor pf = project(S, f);
  const auto window_ind = StepFunction::indicator(g, 0, w.upper_cell);

  StepTensor acc(g, pf.degree_cap());
  StepTensor shortcut(g, pf.degree_cap());
  switch (kind) {
    case NoiseKind::creation: {
      for (int i = 0; i < w.count; ++i) {
        const double root_v = std::sqrt(S.volume(g, i));
        StepTensor term = creation(detail::cell_indicator(g, S, i, Complex{1.0 / root_v, 0}), 1, pf);
        term *= Complex{root_v, 0};
        acc += term;
      }
      acc = project(S, acc);
      shortcut = project(S, creation(window_ind, 1, pf));
      break;
    }
    case NoiseKind::annihilation: {
      for (int i = 0; i < w.count; ++i) {
        const double root_v = std::sqrt(S.volume(g, i));
        StepTensor term = annihilation(detail::cell_indicator(g, S, i, Complex{1.0 / root_v, 0}), 1, pf);
        term *= Complex{root_v, 0};
        acc += term;
      }
      acc = project(S, acc);
      shortcut = project(S, annihilation(window_ind, 1, pf));
      break;
    }
    case NoiseKind::gauge: {
      for (int i = 0; i < w.count; ++i)
        acc += gauge(detail::cell_indicator(g, S, i, Complex{1, 0}), pf);
      acc = project(S, acc);
      shortcut = project(S, gauge(window_ind, pf));
      break;
    }
    case NoiseKind::time: {
      for (int i = 0; i < w.count; ++i) {
        StepTensor term = pf - project(S, gauge(detail::cell_indicator(g, S, i, Complex{1, 0}), pf));
        term *= Complex{S.volume(g, i), 0};
        acc += term;
      }
      StepTensor scaled = pf;
      scaled *= Complex{w.t_up, 0};
      shortcut = scaled - project(S, gauge(detail::volume_staircase(g, S, w), pf));
      break;
    }
  }
  detail::check_routes(acc, shortcut);
  return shortcut;
}

inline StepTensor multiplicity_discrete_op(int source, int target, double t, const PartitionSpec& S,
                                           const StepTensor& f) {
  const Grid& g = f.grid();
  const int n = g.multiplicity();
  if (source < 0 || source > n || target < 0 || target > n)
    throw std::invalid_argument("matrix unit index out of range");
  const TimeWindow w = time_window(g, S, t);
  const StepTensor pf = project(S, f);
  const auto window_ind = StepFunction::indicator(g, 0, w.upper_cell);

  StepTensor acc(g, pf.degree_cap());
  StepTensor shortcut(g, pf.degree_cap());
  if (source == 0 && target == 0) {
    for (int i = 0; i < w.count; ++i) {
      StepTensor term = pf;
      for (int c = 1; c <= n; ++c)
        term -= project(S, gauge_map(detail::cell_indicator(g, S, i, Complex{1, 0}), c, c, pf));
      term *= Complex{S.volume(g, i), 0};
      acc += term;
    }
    StepTensor scaled = pf;
    scaled *= Complex{w.t_up, 0};
    shortcut = scaled;
    for (int c = 1; c <= n; ++c)
      shortcut -= project(S, gauge_map(detail::volume_staircase(g, S, w), c, c, pf));
  } else if (source == 0) {
    for (int i = 0; i < w.count; ++i) {
      const double root_v = std::sqrt(S.volume(g, i));
      StepTensor term = creation(detail::cell_indicator(g, S, i, Complex{1.0 / root_v, 0}), target, pf);
      term *= Complex{root_v, 0};
      acc += term;
    }
    acc = project(S, acc);
    shortcut = project(S, creation(window_ind, target, pf));
  } else if (target == 0) {
    for (int i = 0; i < w.count; ++i) {
      const double root_v = std::sqrt(S.volume(g, i));
      StepTensor term = annihilation(detail::cell_indicator(g, S, i, Complex{1.0 / root_v, 0}), source, pf);
      term *= Complex{root_v, 0};
      acc += term;
    }
    acc = project(S, acc);
    shortcut = project(S, annihilation(window_ind, source, pf));
  } else {
    for (int i = 0; i < w.count; ++i)
      acc += gauge_map(detail::cell_indicator(g, S, i, Complex{1, 0}), source, target, pf);
    acc = project(S, acc);
    shortcut = project(S, gauge_map(window_ind, source, target, pf));
  }
  detail::check_routes(acc, shortcut);
  return shortcut;
}

// Built-in test vectors.  `step` holds the cell averages at grid resolution;
// `true_norm_sq` is the exact squared norm of the underlying function, so
// projection errors against the function itself stay exact.
struct TestVector {
  std::string name;
  StepTensor step;
  double true_norm_sq = 0.0;
};

inline const std::vector<std::string>& builtin_vector_names() {
  static const std::vector<std::string> names = {"vacuum", "indicator-unit", "x-on-unit",
                                                 "square-indicator", "exp-decay"};
  return names;
}

inline double builtin_horizon(const std::string& name) { return name == "exp-decay" ? 4.0 : 1.0; }

inline TestVector make_builtin_vector(const std::string& name, const Grid& g, int degree_cap = 3) {
  if (name == "vacuum") return {name, StepTensor::vacuum(g, degree_cap), 1.0};
  if (name == "indicator-unit") {
    const int end = time_to_cell(g, 1.0);
    StepTensor f(g, degree_cap);
    for (int c = 0; c < end; ++c) f.add({Letter{c, 1}}, Complex{1, 0});
    return {name, f, 1.0};
  }
  if (name == "x-on-unit") {
    AnalyticProfile p{[](double a, double b) {
                        if (a >= 1.0) return 0.0;
                        const double hi = std::min(b, 1.0);
                        return (hi * hi - a * a) / 2.0;
                      },
                      1.0 / 3.0};
    return {name, ingest(p, g, degree_cap), p.norm_sq};
  }
  if (name == "square-indicator") {
    const int end = time_to_cell(g, 1.0);
    StepTensor f(g, degree_cap);
    for (int i = 0; i < end; ++i)
      for (int j = 0; j < end; ++j) f.add({Letter{i, 1}, Letter{j, 1}}, Complex{1, 0});
    return {name, f, 1.0};
  }
  if (name == "exp-decay") {
    AnalyticProfile p{[](double a, double b) {
                        if (a >= 4.0) return 0.0;
                        return std::exp(-a) - std::exp(-std::min(b, 4.0));
                      },
                      (1.0 - std::exp(-8.0)) / 2.0};
    return {name, ingest(p, g, degree_cap), p.norm_sq};
  }
  throw std::invalid_argument("unknown test vector: " + name);
}

struct ConvergenceRow {
  int n = 0;
  double error = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

// || P_n f - f || against the underlying function, via the Pythagoras route
// error^2 = ||f||^2 - ||P_n f||^2 (valid because P_n factors through the cell
// averages the step tensor holds).
inline std::vector<ConvergenceRow> projection_convergence(const TestVector& f, const std::vector<int>& n_list) {
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    const auto S = PartitionSpec::uniform(f.step.grid(), n);
    const double captured = project(S, f.step).norm_sq();
    rows.push_back({n, std::sqrt(std::max(0.0, f.true_norm_sq - captured)),
                    std::numeric_limits<double>::quiet_NaN()});
  }
  return rows;
}

// || a_t(n) f - a_t f || at step resolution, with the triangle-inequality
// majorant: for creation/annihilation
//   sqrt(t_up)*||(P-I)f|| + sqrt(t_up - t)*||f|| + ||(P-I) a_t f||,
// for gauge the middle factor is the measured ||P a(1_[t,t_up)) f||, and for
// the scalar kind  t_up*||(P-I)f|| + (t_up - t)*||f|| + diam*||f||.
inline std::vector<ConvergenceRow> operator_convergence(const TestVector& f, NoiseKind kind, double t,
                                                        const std::vector<int>& n_list) {
  const Grid& g = f.step.grid();
  const int t_cell = time_to_cell(g, t);
  const double t_exact = t_cell * g.cell_volume();
  const StepTensor truth = true_op_apply(kind, t, f.step);
  const double fn = norm(f.step);
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    const auto S = PartitionSpec::uniform(g, n);
    const TimeWindow w = time_window(g, S, t);
    const StepTensor approx = discrete_op_apply(kind, t, S, f.step);
    const double err = distance(approx, truth);
    const double proj_err = distance(f.step, project(S, f.step));
    const double truth_err = distance(truth, project(S, truth));
    double bound = 0.0;
    switch (kind) {
      case NoiseKind::creation:
      case NoiseKind::annihilation:
        bound = std::sqrt(w.t_up) * proj_err + std::sqrt(std::max(0.0, w.t_up - t_exact)) * fn + truth_err;
        break;
      case NoiseKind::gauge: {
        const auto overshoot = StepFunction::indicator(g, t_cell, w.upper_cell);
        bound = proj_err + norm(project(S, gauge(overshoot, f.step))) + truth_err;
        break;
      }
      case NoiseKind::time:
        bound = w.t_up * proj_err + (w.t_up - t_exact) * fn + S.diameter(g) * fn;
        break;
    }
    rows.push_back({n, err, bound});
  }
  return rows;
}

}  // namespace freefock
