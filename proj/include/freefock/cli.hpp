#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "freefock/approximation.hpp"
#include "freefock/free_limits.hpp"
#include "freefock/table.hpp"
#include "freefock/toy_fock.hpp"

namespace freefock {

// Everything a single experiment run needs. Fields not used by the chosen
// subcommand are ignored. mesh/depth of 0 mean "not set": the environment
// variables FREEFOCK_MESH / FREEFOCK_DEPTH are consulted, then a default is
// derived (mesh = max n, depth = moment order or tensor degree).
struct RunConfig {
  std::string subcommand;
  std::vector<int> n_list;  // empty picks the subcommand default
  double t = 1.0;
  int k_max = 6;
  int mesh = 0;
  int depth = 0;
  int multiplicity = 1;
  std::string vector_name = "x-on-unit";  // converge-*: built-in test vector
  std::string eps = "+";                  // converge-operator: +, -, o, x
  std::string walk = "brownian";          // oracle: brownian | poisson
  std::string format = "csv";
  std::string output_path;
  bool assert_mode = false;
  double tol = 1e-10;
  unsigned long seed = 1;  // freeness
  int trials = 500;        // freeness
  int sites = 3;           // freeness
  int max_len = 6;         // freeness
};

struct RunResult {
  int exit_code = 0;       // 0 ok, 1 bad config, 2 assertion failed
  std::string table_text;  // serialized table (also written to output_path)
  std::string log;         // validation / assertion messages
};

namespace detail {

inline std::optional<int> env_int(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == nullptr || *end != '\0' || v <= 0 || v > 1000000) return std::optional<int>(-1);
  return static_cast<int>(v);
}

struct AssertLog {
  bool failed = false;
  std::ostringstream text;

  void check(const std::string& row, double measured, double expected, double tol) {
    if (std::abs(measured - expected) <= tol) return;
    failed = true;
    text << "assert failed: " << row << " measured=" << format_number(measured)
         << " expected=" << format_number(expected) << " tolerance=" << format_number(tol) << '\n';
  }
  void check_at_most(const std::string& row, double measured, double limit, double tol) {
    if (measured <= limit + tol) return;
    failed = true;
    text << "assert failed: " << row << " measured=" << format_number(measured)
         << " expected<=" << format_number(limit) << " tolerance=" << format_number(tol) << '\n';
  }
};

// One alternating product of vacuum-centered random single-site operators;
// returns (length, |tau|).
inline std::pair<int, double> freeness_trial(std::mt19937& rng, int sites, int max_len) {
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::uniform_int_distribution<int> site_dist(0, sites - 1);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);

  const int len = len_dist(rng);
  std::vector<std::pair<ToyOperator, int>> factors;
  int prev = -1;
  for (int j = 0; j < len; ++j) {
    int site = site_dist(rng);
    while (site == prev) site = site_dist(rng);
    prev = site;
    SiteMatrix m(1, site);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m(r, c) = Complex{amp(rng), amp(rng)};
    factors.emplace_back(ToyOperator(m.centered()), site);
  }
  return {len, std::abs(alternating_moment(factors))};
}

inline NoiseKind parse_kind(const std::string& eps) {
  if (eps == "+") return NoiseKind::creation;
  if (eps == "-") return NoiseKind::annihilation;
  if (eps == "o") return NoiseKind::gauge;
  if (eps == "x") return NoiseKind::time;
  throw std::invalid_argument("unknown operator kind '" + eps + "' (expected +, -, o, x)");
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg) {
  RunResult res;
  auto fail_config = [&res](const std::string& why) {
    res.exit_code = 1;
    res.log += why + "\n";
    return res;
  };

  if (cfg.format != "csv" && cfg.format != "json")
    return fail_config("unknown output format '" + cfg.format + "' (expected csv or json)");
  if (!(cfg.t > 0.0)) return fail_config("t must be positive");
  if (!(cfg.tol > 0.0)) return fail_config("tol must be positive");
  if (cfg.k_max < 1 || cfg.k_max > 12) return fail_config("k-max must be in 1..12");
  if (cfg.multiplicity < 1) return fail_config("multiplicity must be >= 1");

  int mesh = cfg.mesh;
  int depth = cfg.depth;
  if (mesh == 0) {
    if (auto v = detail::env_int("FREEFOCK_MESH")) {
      if (*v < 0) return fail_config("invalid FREEFOCK_MESH value");
      mesh = *v;
    }
  }
  if (depth == 0) {
    if (auto v = detail::env_int("FREEFOCK_DEPTH")) {
      if (*v < 0) return fail_config("invalid FREEFOCK_DEPTH value");
      depth = *v;
    }
  }
  if (mesh < 0 || depth < 0) return fail_config("mesh and depth must be positive");

  const bool convergence_run = cfg.subcommand == "converge-projection" || cfg.subcommand == "converge-operator";
  const bool moment_run =
      cfg.subcommand == "clt" || cfg.subcommand == "poisson" || cfg.subcommand == "oracle";
  if (moment_run && depth != 0 && depth < cfg.k_max)
    return fail_config("depth must be at least k-max for moment runs");

  std::vector<int> n_list = cfg.n_list;
  if (n_list.empty()) {
    if (convergence_run)
      n_list = {2, 4, 8, 16, 32};
    else if (cfg.subcommand == "oracle")
      n_list = {1000000};
    else
      n_list = {1, 2, 4, 8};
  }
  for (int n : n_list)
    if (n < 1) return fail_config("n values must be positive");

  Table table;
  detail::AssertLog asserts;

  try {
    if (convergence_run) {
      if (mesh == 0) mesh = *std::max_element(n_list.begin(), n_list.end());
      for (int n : n_list)
        if (mesh % n != 0)
          return fail_config("n=" + std::to_string(n) + " does not divide mesh=" + std::to_string(mesh));

      const Grid grid(mesh, builtin_horizon(cfg.vector_name), cfg.multiplicity);
      const TestVector f = make_builtin_vector(cfg.vector_name, grid, std::max(depth, 3));

      if (cfg.subcommand == "converge-projection") {
        table.columns = {"n", "error"};
        const auto rows = projection_convergence(f, n_list);
        for (const auto& r : rows) table.add_row({static_cast<long long>(r.n), r.error});
        if (cfg.assert_mode) {
          double prev = std::numeric_limits<double>::infinity();
          for (const auto& r : rows) {
            const std::string row_name = "row n=" + std::to_string(r.n);
            if (cfg.vector_name == "x-on-unit")
              asserts.check(row_name, r.error, 1.0 / (r.n * std::sqrt(12.0)), cfg.tol);
            else if (cfg.vector_name == "square-indicator")
              asserts.check(row_name, r.error, 1.0 / std::sqrt(static_cast<double>(r.n)), cfg.tol);
            else if (cfg.vector_name == "vacuum" || cfg.vector_name == "indicator-unit")
              asserts.check(row_name, r.error, 0.0, cfg.tol);
            else
              asserts.check_at_most(row_name + " (monotone)", r.error, prev, cfg.tol);
            prev = r.error;
          }
        }
      } else {
        const NoiseKind kind = detail::parse_kind(cfg.eps);
        table.columns = {"n", "error", "bound"};
        const auto rows = operator_convergence(f, kind, cfg.t, n_list);
        for (const auto& r : rows) table.add_row({static_cast<long long>(r.n), r.error, r.bound});
        if (cfg.assert_mode)
          for (const auto& r : rows)
            asserts.check_at_most("row n=" + std::to_string(r.n), r.error, r.bound, cfg.tol);
      }
    } else if (cfg.subcommand == "clt" || cfg.subcommand == "poisson") {
      const WalkKind kind = cfg.subcommand == "clt" ? WalkKind::brownian : WalkKind::poisson;
      if (cfg.k_max > kWalkDirectMaxOrder)
        return fail_config("k-max must be at most 8 for direct walk evaluation");
      for (int n : n_list)
        if (n > kWalkDirectMaxRate)
          return fail_config("n=" + std::to_string(n) +
                             " exceeds the direct evaluation budget (n <= 8); use the oracle subcommand");

      table.columns = {"n", "k", "value", "oracle"};
      for (int n : n_list) {
        const auto oracle = walk_moments_oracle(kind, n, cfg.t, cfg.k_max);
        for (int k = 1; k <= cfg.k_max; ++k) {
          const double value = walk_moment(kind, n, cfg.t, k);
          table.add_row({static_cast<long long>(n), static_cast<long long>(k), value, oracle[k - 1]});
          if (cfg.assert_mode)
            asserts.check("row n=" + std::to_string(n) + " k=" + std::to_string(k), value, oracle[k - 1],
                          cfg.tol);
        }
      }
    } else if (cfg.subcommand == "oracle") {
      const WalkKind kind = cfg.walk == "brownian"   ? WalkKind::brownian
                            : cfg.walk == "poisson" ? WalkKind::poisson
                                                    : throw std::invalid_argument(
                                                          "unknown walk '" + cfg.walk +
                                                          "' (expected brownian or poisson)");
      table.columns = {"n", "k", "value", "limit"};
      for (int n : n_list) {
        const auto moments = walk_moments_oracle(kind, n, cfg.t, cfg.k_max);
        for (int k = 1; k <= cfg.k_max; ++k) {
          const double limit =
              kind == WalkKind::brownian ? semicircle_moment(cfg.t, k) : free_poisson_moment(cfg.t, k);
          table.add_row({static_cast<long long>(n), static_cast<long long>(k), moments[k - 1], limit});
          if (cfg.assert_mode)
            asserts.check("row n=" + std::to_string(n) + " k=" + std::to_string(k), moments[k - 1], limit,
                          cfg.tol);
        }
      }
    } else if (cfg.subcommand == "freeness") {
      if (cfg.trials < 1) return fail_config("trials must be positive");
      if (cfg.sites < 2) return fail_config("freeness needs at least two sites");
      if (cfg.max_len < 1 || cfg.max_len > 12) return fail_config("max-len must be in 1..12");

      table.columns = {"trial", "length", "abs_tau"};
      std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
      for (int i = 0; i < cfg.trials; ++i) {
        const auto [len, tau] = detail::freeness_trial(rng, cfg.sites, cfg.max_len);
        table.add_row({static_cast<long long>(i), static_cast<long long>(len), tau});
        if (cfg.assert_mode)
          asserts.check_at_most("row trial=" + std::to_string(i), tau, 0.0, cfg.tol);
      }
    } else if (cfg.subcommand == "multiplicity-demo") {
      table.columns = {"quantity", "value", "reference"};
      const MultiplicityDemo demo = multiplicity_demo();
      table.add_row({std::string("commutator_norm_noncommuting"), demo.noncommuting_commutator_norm,
                     std::sqrt(2.0)});
      table.add_row({std::string("commutator_norm_commuting"), demo.commuting_commutator_norm, 0.0});
      for (const auto& row : demo.joint)
        table.add_row({"tau_z1^" + std::to_string(row.m) + "_z2^" + std::to_string(row.n),
                       row.matrix_value, row.law_value});
      if (cfg.assert_mode)
        for (std::size_t r = 0; r < table.rows.size(); ++r)
          asserts.check("row " + std::get<std::string>(table.rows[r][0]),
                        std::get<double>(table.rows[r][1]), std::get<double>(table.rows[r][2]), cfg.tol);
    } else {
      return fail_config("unknown subcommand '" + cfg.subcommand + "'");
    }
  } catch (const std::invalid_argument& e) {
    return fail_config(e.what());
  }

  res.table_text = cfg.format == "csv" ? write_csv(table) : write_json(table);

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) return fail_config("cannot open output file: " + cfg.output_path);
    out << res.table_text;
  }

  if (asserts.failed) {
    res.exit_code = 2;
    res.log += asserts.text.str();
  }
  return res;
}

}  // namespace freefock
