// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch driver for the Helmholtz PML studies.  Subcommands take a JSON
// config (--config), an output directory (--out) and a seed (--seed);
// exit code 0 = success, 2 = a asserted property failed, 1 = runtime error.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helmpml/experiments.hpp"

using namespace helmpml;
using namespace helmpml::experiments;

namespace {

ExperimentConfig load_config(const std::string& path, uint64_t seed_override,
                             bool has_seed) {
  ExperimentConfig cfg;
  if (!path.empty()) cfg = ExperimentConfig::from_json_file(path);
  if (has_seed) cfg.seed = seed_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz PML solver studies"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed override");

  auto* sweep = app.add_subcommand("pml-sweep", "PML truncation-error sweep");
  auto* pollution =
      app.add_subcommand("pollution-study", "hp vs h FEM error study");
  bool only_hp = false, only_h = false, export_solutions = false;
  pollution->add_flag("--hp-only", only_hp, "run only the hp arm");
  pollution->add_flag("--h-only", only_h, "run only the h arm");
  pollution->add_flag("--export-solutions", export_solutions,
                      "write solution vectors as CSV (dof, re, im)");
  auto* dumpmesh = app.add_subcommand("dump-mesh", "write a mesh as plain text");
  double dm_Rtr = 1.5, dm_h = 0.2;
  double dm_obstacle = 0.0;
  dumpmesh->add_option("--R-tr", dm_Rtr);
  dumpmesh->add_option("--h-size", dm_h);
  dumpmesh->add_option("--obstacle", dm_obstacle);
  auto* decompose =
      app.add_subcommand("decompose", "high/low-frequency solution split");
  auto* checkco =
      app.add_subcommand("check-coefficients", "PML coefficient grid scan");
  auto* etab = app.add_subcommand("eta-bound", "evaluate the eta envelope");
  double eb_h = 0.05, eb_p = 4, eb_k = 20, eb_M = 0, eb_sigma = 1, eb_C1 = 1,
         eb_C2 = 1, eb_CN = 1, eb_N = 3;
  etab->set_help_flag("--help");
  etab->add_option("--h", eb_h);
  etab->add_option("--p", eb_p);
  etab->add_option("--k", eb_k);
  etab->add_option("--M", eb_M);
  etab->add_option("--sigma", eb_sigma);
  etab->add_option("--C1", eb_C1);
  etab->add_option("--C2", eb_C2);
  etab->add_option("--CN", eb_CN);
  etab->add_option("--N", eb_N);

  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;

  try {
    const auto cfg = load_config(config_path, seed, seed_set);
    if (sweep->parsed()) {
      const auto res = run_pml_sweep(cfg, out_dir);
      std::printf("pml-sweep: %zu rows, monotone=%s", res.rows.size(),
                  res.monotone ? "yes" : "no");
      if (res.fit_skipped)
        std::printf(", fit skipped (single point)\n");
      else
        std::printf(", fit slope=%.4f r2=%.4f\n", res.fit.slope, res.fit.r2);
      if (res.rows.size() >= 2 && !res.monotone) return 2;
      if (!res.fit_ok) return 2;
      return 0;
    }
    if (dumpmesh->parsed()) {
      const auto m = mesh::generate_mesh(
          dm_Rtr, dm_h,
          dm_obstacle > 0.0 ? std::optional<double>(dm_obstacle) : std::nullopt,
          cfg.geometry.R1);
      std::filesystem::create_directories(out_dir);
      std::ofstream o(out_dir + "/mesh.txt");
      o << m.dump_text();
      std::printf("mesh with %d cells written to %s/mesh.txt\n", m.n_cells(),
                  out_dir.c_str());
      return 0;
    }
    if (pollution->parsed()) {
      const auto res =
          run_pollution_study(cfg, out_dir, !only_h, !only_hp, export_solutions);
      int bad = 0;
      for (const auto& r : res.rows) {
        std::printf("k=%-6g %-3s p=%-2d h=%-8g dofs=%-7d rel_err=%-12g C_qo=%g %s\n",
                    r.k, r.arm.c_str(), r.p, r.h, r.dofs, r.rel_err_h1k, r.c_qo,
                    r.status == "ok" ? "" : r.status.c_str());
        if (r.status != "ok") ++bad;
        if (r.status == "ok" && r.c_qo < 1.0 - 1e-6) ++bad;
      }
      return bad ? 2 : 0;
    }
    if (decompose->parsed()) {
      const auto res = run_decomposition_study(cfg, out_dir);
      for (const auto& r : res.rows)
        std::printf("k=%-6g |v_low|=%-10g hf_ratio=%-10g class=%s (r2=%.3f)\n",
                    r.k, r.norm_v_low, r.hf_h1_ratio, r.growth_class.c_str(),
                    r.growth_r2);
      std::printf("high-frequency ratio bounded: %s; v_low entire: %s\n",
                  res.hf_bounded ? "yes" : "no", res.vlow_entire ? "yes" : "no");
      return (res.hf_bounded && res.vlow_entire) ? 0 : 2;
    }
    if (checkco->parsed()) {
      check_coefficients_dump(cfg, out_dir);
      std::printf("coefficient scan written to %s/coefficients.csv\n",
                  out_dir.c_str());
      return 0;
    }
    if (etab->parsed()) {
      const double v = eval_eta_bound(eb_h, eb_p, eb_k, eb_M, eb_sigma, eb_C1,
                                      eb_C2, eb_CN, eb_N);
      std::printf("eta bound value: %.12g\n", v);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
