#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include "kairon/config.hpp"
#include "kairon/current.hpp"
#include "kairon/poincare.hpp"
#include "kairon/verify.hpp"

namespace {

using kairon::RunConfig;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double tolerance_scale = 1.0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "configuration file (JSON)")->required();
  cmd->add_option("--out", opt.out_path, "output path (overrides the config's output section)");
  cmd->add_option("--seed", opt.seed, "seed override");
  cmd->add_option("--threads", opt.threads, "worker threads for grid sweeps (default 1, sequential)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance-scale", opt.tolerance_scale, "multiply every check tolerance")
      ->check(CLI::PositiveNumber);
}

RunConfig load(const CommonOptions& opt) {
  RunConfig cfg = RunConfig::load_file(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.tolerance_scale *= opt.tolerance_scale;
  return cfg;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw kairon::ConfigError("config error: cannot write output file: " + path);
  out << body;
}

// 17 significant digits: doubles round-trip exactly.
std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_verify(const CommonOptions& opt) {
  const RunConfig cfg = load(opt);
  const kairon::VerificationReport report = kairon::run_verification(cfg);
  const std::string body = report.to_json().dump(2) + "\n";

  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.report_path;
  if (!path.empty()) write_text(path, body);

  for (const auto& c : report.checks)
    std::printf("%-34s %s  residual %.3e  tolerance %.3e\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.residual, c.tolerance);
  if (path.empty()) std::cout << body;
  std::printf("verify: %zu checks, %s\n", report.checks.size(),
              report.all_pass() ? "all passed" : "FAILURES PRESENT");
  return report.all_pass() ? kExitPass : kExitCheckFailed;
}

int cmd_propagate(const CommonOptions& opt) {
  const RunConfig cfg = load(opt);
  const int m = cfg.m;
  const kairon::KaironField field(cfg.build_worldline(), cfg.initial_data());
  const kairon::SphereQuadrature quad =
      kairon::build_quadrature(m, cfg.quadrature.resolved_sphere_resolution(m));

  const bool intensity = cfg.propagate.mode == "intensity";
  std::optional<kairon::UnitDirection> fixed;
  if (!intensity) {
    std::array<double, kairon::kMaxSpatialDim> d{};
    for (int k = 0; k < m; ++k) d[k] = cfg.propagate.direction[k];
    fixed.emplace(m, std::span<const double>{d.data(), static_cast<std::size_t>(m)});
  }

  std::vector<int> counts(m);
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) {
    counts[k] = cfg.propagate.grid[k].count;
    total *= static_cast<std::size_t>(counts[k]);
  }

  const auto point_at = [&](std::size_t index) {
    kairon::SpacetimeVector x(m);
    x[0] = cfg.propagate.x0;
    std::size_t rest = index;
    for (int k = m - 1; k >= 0; --k) {
      const int i = static_cast<int>(rest % counts[k]);
      rest /= counts[k];
      const auto& ax = cfg.propagate.grid[k];
      x[k + 1] = ax.count == 1 ? ax.min : ax.min + (ax.max - ax.min) * i / (ax.count - 1.0);
    }
    return x;
  };

  kairon::SpacetimeVector time_unit(m);
  time_unit[0] = 1.0;  // intensity column is the current paired with e_0
  std::vector<double> values(total);
  const auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const kairon::SpacetimeVector x = point_at(i);
      values[i] = intensity ? kairon::current_component(field, field, x, time_unit, quad)
                            : field(x, *fixed);
    }
  };
  // Grid points are independent and written to disjoint slots, so the output
  // is byte-identical for any thread count.
  if (opt.threads <= 1) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + opt.threads - 1) / opt.threads;
    for (int t = 0; t < opt.threads; ++t) {
      const std::size_t lo = t * chunk;
      if (lo >= total) break;
      pool.emplace_back(worker, lo, std::min(total, lo + chunk));
    }
    for (auto& th : pool) th.join();
  }

  std::string csv = "# config_hash=" + cfg.hash() + "\n";
  for (int k = 0; k < m; ++k) csv += "x" + std::to_string(k + 1) + ",";
  csv += intensity ? "intensity" : "psi";
  csv += "\n";
  for (std::size_t i = 0; i < total; ++i) {
    const kairon::SpacetimeVector x = point_at(i);
    for (int k = 1; k <= m; ++k) csv += num17(x[k]) + ",";
    csv += num17(values[i]) + "\n";
  }

  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.csv_path;
  if (path.empty()) throw kairon::ConfigError("config error: propagate needs an output path (--out or output.csv)");
  write_text(path, csv);
  std::printf("propagate: wrote %zu grid points to %s\n", total, path.c_str());
  return kExitPass;
}

int cmd_inner_product(const CommonOptions& opt) {
  const RunConfig cfg = load(opt);
  const int m = cfg.m;
  if (cfg.inner_product_worldlines.empty())
    throw kairon::ConfigError("config error: inner_product.worldlines must not be empty");
  if (cfg.inner_product_worldlines.size() > 1 && !cfg.support)
    throw kairon::ConfigError(
        "config error: comparing the scalar product across several worldlines needs "
        "compactly supported initial data (give initial_data.support)");

  const kairon::KaironField field(cfg.build_worldline(), cfg.initial_data());
  const kairon::SphereQuadrature quad =
      kairon::build_quadrature(m, cfg.quadrature.resolved_sphere_resolution(m));

  std::vector<double> values;
  for (const auto& wc : cfg.inner_product_worldlines)
    values.push_back(kairon::inner_product(field, field, wc.build(m), quad, cfg.quadrature.s_window,
                                           cfg.quadrature.s_steps));

  ordered_json j;
  j["version"] = kairon::kVersionStamp;
  j["config_hash"] = cfg.hash();
  ordered_json vals = ordered_json::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    ordered_json o;
    o["worldline"] = cfg.inner_product_worldlines[k].kind;
    o["value"] = values[k];
    vals.push_back(o);
  }
  j["values"] = vals;
  ordered_json defects = ordered_json::array();
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      const double defect =
          std::abs(values[a] - values[b]) / std::max(std::abs(values[a]), 1e-30);
      defects.push_back({{"pair", {a, b}}, {"relative_defect", defect}});
    }
  j["pairwise_defects"] = defects;

  const std::string body = j.dump(2) + "\n";
  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.report_path;
  if (!path.empty()) write_text(path, body);
  std::cout << body;
  return kExitPass;
}

int cmd_transform(const CommonOptions& opt) {
  const RunConfig cfg = load(opt);
  const int m = cfg.m;
  const kairon::SphereQuadrature quad =
      kairon::build_quadrature(m, cfg.quadrature.resolved_sphere_resolution(m));
  const kairon::AxisQuadrature t_rule{cfg.quadrature.t_window[0], cfg.quadrature.t_window[1],
                                      cfg.quadrature.t_steps};

  const kairon::AxisState before = kairon::AxisState::from_expression(cfg.parsed_initial_data());
  kairon::AxisState after = before;
  for (const auto& step : cfg.transforms) after = kairon::apply(after, step.build(m));

  const double n0 = kairon::axis_norm_squared(before, quad, t_rule);
  const double n1 = kairon::axis_norm_squared(after, quad, t_rule);
  const double defect = std::abs(n1 - n0) / std::max(n0, 1e-30);

  ordered_json j;
  j["version"] = kairon::kVersionStamp;
  j["config_hash"] = cfg.hash();
  j["transform_count"] = cfg.transforms.size();
  j["norm_before"] = n0;
  j["norm_after"] = n1;
  j["defect"] = defect;
  const std::string body = j.dump(2) + "\n";
  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.report_path;
  if (!path.empty()) write_text(path, body);
  std::cout << body;

  if (!cfg.csv_path.empty()) {
    // transformed-state snapshot along the axis at the propagate direction
    std::array<double, kairon::kMaxSpatialDim> d{};
    for (int k = 0; k < m; ++k) d[k] = cfg.propagate.direction[k];
    const kairon::UnitDirection w(m, {d.data(), static_cast<std::size_t>(m)});
    std::string csv = "# config_hash=" + cfg.hash() + "\nx0,psi_before,psi_after\n";
    const int n = 201;
    for (int i = 0; i < n; ++i) {
      const double t = t_rule.t_min + (t_rule.t_max - t_rule.t_min) * i / (n - 1.0);
      csv += num17(t) + "," + num17(before(t, w)) + "," + num17(after(t, w)) + "\n";
    }
    write_text(cfg.csv_path, csv);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kairon: superluminal null-slab transport, conserved currents and the unitary "
               "Poincare action, with machine-checkable verification suites"};
  app.require_subcommand(1);

  CommonOptions opt;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite and write a report");
  CLI::App* propagate = app.add_subcommand("propagate", "field snapshot on a spatial grid (CSV)");
  CLI::App* inner = app.add_subcommand("inner-product", "scalar products across worldlines (JSON)");
  CLI::App* transform = app.add_subcommand("transform", "apply a Poincare chain and report the norm defect");
  for (CLI::App* cmd : {verify, propagate, inner, transform}) add_common(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(opt);
    if (app.got_subcommand(propagate)) return cmd_propagate(opt);
    if (app.got_subcommand(inner)) return cmd_inner_product(opt);
    return cmd_transform(opt);
  } catch (const kairon::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
