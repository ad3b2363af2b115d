#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geomeans/geomeans.hpp"

using namespace geomeans;

namespace {

MeanData forward_for(const RunConfig& c) {
  const BoundaryGrid bg = boundary_grid(c.space, boundary_points(c));
  return forward_means(c.phantom, bg, t_grid(c), c.grids.quadrature_order);
}

MeanData traces_for(const RunConfig& c, const MeanData& means) {
  if (!c.alpha) throw std::invalid_argument("epd-roundtrip: the config needs \"alpha\"");
  if (c.space.kind == SpaceKind::euclidean) return epd_from_means(means, *c.alpha);
  if (c.space.kind == SpaceKind::sphere) return sphere_epd_from_means(means, *c.alpha);
  throw std::invalid_argument("epd-roundtrip: no EPD trace for the hyperbolic space");
}

ReconstructionReport invert_for(const RunConfig& c, const MeanData& data) {
  if (!(data.space == c.space)) throw std::invalid_argument("means file belongs to a different space than the config");
  return reconstruct_on_grid(make_reconstructor(data, inversion_options(c)), c.phantom, c.grids.recon);
}

void summary(const ReconstructionReport& r, double seconds) {
  std::cerr << r.method << ": " << r.points.size() << " points, rel_l2 " << format_double(r.rel_l2) << ", sup "
            << format_double(r.sup_error) << ", calibration " << format_double(r.calibration) << ", " << seconds << " s\n";
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical means in Euclidean, spherical and hyperbolic space: forward, inversion, verification"};
  app.require_subcommand(1);
  std::string config, out, means, suite = "all", slice, report;

  auto* fwd = app.add_subcommand("forward", "Sample the spherical means of the configured phantom");
  fwd->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  fwd->add_option("--out", out, "Means CSV to write")->required();

  auto* inv = app.add_subcommand("invert", "Reconstruct from a means CSV and compare with the configured phantom");
  inv->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  inv->add_option("--means", means, "Means CSV to read")->required()->check(CLI::ExistingFile);
  inv->add_option("--out", out, "Report CSV to write")->required();

  auto* rt = app.add_subcommand("roundtrip", "Forward then invert in memory");
  rt->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  rt->add_option("--out", out, "Report CSV to write")->required();

  auto* ert = app.add_subcommand("epd-roundtrip", "EPD traces of the phantom, then invert");
  ert->add_option("--config", config, "JSON run configuration with alpha")->required()->check(CLI::ExistingFile);
  ert->add_option("--out", out, "Report CSV to write")->required();
  ert->add_option("--means", means, "Also write the traces as CSV");

  auto* ver = app.add_subcommand("verify", "Numerical checks of the lemmas and identities");
  ver->add_option("--suite", suite, "lemmas, identities, fractional or all")
      ->check(CLI::IsMember({"lemmas", "identities", "fractional", "all"}));
  ver->add_option("--config", config, "Optional configuration supplying the random seed")->check(CLI::ExistingFile);

  auto* ren = app.add_subcommand("render", "Plain PGM image of the reconstruction in a report");
  ren->add_option("report", report, "Report CSV")->required()->check(CLI::ExistingFile);
  ren->add_option("--out", out, "PGM file to write")->required();
  ren->add_option("--slice", slice, "axis=value selecting a plane for n >= 3, e.g. x3=0");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    if (*fwd) {
      const RunConfig c = load_config(config);
      const MeanData d = forward_for(c);
      save_means(out, d);
      std::cerr << "wrote " << d.centers() << " x " << d.tgrid.size() << " means, " << since(t0) << " s\n";
    } else if (*inv) {
      const RunConfig c = load_config(config);
      const ReconstructionReport r = invert_for(c, load_means(means));
      save_report(out, r);
      summary(r, since(t0));
    } else if (*rt) {
      const RunConfig c = load_config(config);
      const ReconstructionReport r = invert_for(c, forward_for(c));
      save_report(out, r);
      summary(r, since(t0));
    } else if (*ert) {
      const RunConfig c = load_config(config);
      const MeanData tr = traces_for(c, forward_for(c));
      if (!means.empty()) save_means(means, tr);
      const ReconstructionReport r = invert_for(c, tr);
      save_report(out, r);
      summary(r, since(t0));
    } else if (*ver) {
      const std::uint64_t seed = config.empty() ? 1 : load_config(config).seed;
      std::vector<Check> checks;
      auto add = [&](std::vector<Check> v) { checks.insert(checks.end(), v.begin(), v.end()); };
      if (suite == "lemmas" || suite == "all") add(lemma_checks(seed));
      if (suite == "fractional" || suite == "all") add(fractional_checks());
      if (suite == "identities" || suite == "all") add(identity_checks());
      std::size_t failed = 0;
      for (const Check& ch : checks) {
        print_check(std::cout, ch);
        if (!ch.passed()) ++failed;
      }
      std::cout << checks.size() - failed << " of " << checks.size() << " checks passed\n";
      return failed == 0 ? 0 : 1;
    } else if (*ren) {
      const ReportTable t = load_report(report);
      const SliceSpec s = slice.empty() ? SliceSpec{} : parse_slice(slice);
      std::ofstream o(out);
      if (!o) throw std::runtime_error("cannot write " + out);
      write_pgm(o, t, t.reconstructed, s);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
