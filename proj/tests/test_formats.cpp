#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "geomeans/config.hpp"
#include "geomeans/formats.hpp"
#include "geomeans/forward.hpp"

using namespace geomeans;

namespace {

MeanData small_means() {
  const SpaceSpec s(SpaceKind::sphere, 3, 1.0);
  return forward_means(default_phantom(s), boundary_grid(s, 4), default_tgrid(s, 64));
}

std::string to_text(const MeanData& d) {
  std::ostringstream o;
  write_means(o, d);
  return o.str();
}

ReconstructionReport small_report(double scale) {
  ReconstructionReport r;
  r.space = SpaceSpec(SpaceKind::euclidean, 2, 1.0);
  r.method = "test";
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) {
      r.points.push_back({0.1 * i, 0.2 * j});
      r.truth.push_back(scale * (i + j));
      r.reconstructed.push_back(scale * (i + j));
    }
  compute_errors(r);
  return r;
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min()})
    EXPECT_EQ(parse_double(format_double(v), "test"), v);
  EXPECT_THROW(parse_double("1.5x", "test"), std::runtime_error);
}

TEST(MeansCsv, HeaderLayout) {
  std::istringstream in(to_text(small_means()));
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  EXPECT_EQ(l1, "# geomeans-means v1");
  EXPECT_EQ(l2.substr(0, 3), "# {");
  EXPECT_NO_THROW(nlohmann::json::parse(l2.substr(2)));
  EXPECT_EQ(l3, "center_idx,t,value");
}

TEST(MeansCsv, BitwiseRoundTrip) {
  MeanData d = small_means();
  d.alpha = 0.75;
  std::istringstream in(to_text(d));
  const MeanData r = read_means(in);
  EXPECT_EQ(r.space, d.space);
  EXPECT_EQ(r.tgrid, d.tgrid);
  EXPECT_EQ(r.values, d.values);
  EXPECT_EQ(r.boundary.centers.coords, d.boundary.centers.coords);
  EXPECT_EQ(r.boundary.centers.weights, d.boundary.centers.weights);
  EXPECT_EQ(r.alpha, d.alpha);
  EXPECT_EQ(to_text(r), to_text(d));
}

TEST(MeansCsv, Deterministic) { EXPECT_EQ(to_text(small_means()), to_text(small_means())); }

TEST(MeansCsv, RejectsDamagedFiles) {
  const std::string good = to_text(small_means());
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_ANY_THROW(read_means(in));
  };
  fails("");
  fails("# other-format v1\n" + good.substr(good.find('\n') + 1));
  // drop the last row
  fails(good.substr(0, good.rfind('\n', good.size() - 2) + 1));
  // duplicate a row
  const auto third = good.find('\n', good.find("center_idx")) + 1;
  const auto row_end = good.find('\n', third) + 1;
  fails(good.substr(0, row_end) + good.substr(third, row_end - third) + good.substr(row_end));
  // corrupt a value
  std::string bad = good;
  bad.replace(bad.rfind(',') + 1, 1, "z");
  fails(bad);
}

TEST(ReportCsv, RoundTripAndFooter) {
  const ReconstructionReport r = small_report(1.0);
  std::ostringstream o;
  write_report(o, r);
  std::istringstream in(o.str());
  const ReportTable t = read_report(in);
  EXPECT_EQ(t.n, 2);
  ASSERT_EQ(t.points.size(), r.points.size());
  EXPECT_EQ(t.truth, r.truth);
  EXPECT_EQ(t.reconstructed, r.reconstructed);
  EXPECT_EQ(t.footer.at("rel_l2").get<double>(), 0.0);
  EXPECT_EQ(t.footer.at("method").get<std::string>(), "test");
  EXPECT_EQ(o.str().substr(0, o.str().find('\n')), "x_1,x_2,f_true,f_rec");
}

TEST(Slice, Parsing) {
  const SliceSpec a = parse_slice("x3=0.25");
  EXPECT_EQ(a.axis, 2);
  EXPECT_EQ(a.value, 0.25);
  EXPECT_EQ(parse_slice("1=-0.5").axis, 0);
  EXPECT_THROW(parse_slice("x0=1"), std::invalid_argument);
  EXPECT_THROW(parse_slice("x3"), std::invalid_argument);
}

TEST(Pgm, ScalesMinToMaxWithComment) {
  const ReconstructionReport r = small_report(2.0);
  std::ostringstream o;
  write_report(o, r);
  std::istringstream in(o.str());
  const ReportTable t = read_report(in);
  std::ostringstream img;
  write_pgm(img, t, t.reconstructed, {});
  std::istringstream p(img.str());
  std::string magic, comment;
  std::getline(p, magic);
  std::getline(p, comment);
  EXPECT_EQ(magic, "P2");
  EXPECT_EQ(comment, "# min 0 max 10");
  int w, h, maxv;
  p >> w >> h >> maxv;
  EXPECT_EQ(w, 4);
  EXPECT_EQ(h, 3);
  EXPECT_EQ(maxv, 255);
  std::vector<int> px(w * h);
  for (int& v : px) p >> v;
  // top row holds the largest second coordinate: values 2..5 scaled by 255/5
  EXPECT_EQ(px[0], 102);
  EXPECT_EQ(px[3], 255);
  EXPECT_EQ(px[8], 0);
}

TEST(Pgm, ZeroFieldIsUniform) {
  const ReconstructionReport r = small_report(0.0);
  std::ostringstream o;
  write_report(o, r);
  std::istringstream in(o.str());
  const ReportTable t = read_report(in);
  std::ostringstream img;
  write_pgm(img, t, t.reconstructed, {});
  std::istringstream p(img.str());
  std::string line;
  std::getline(p, line);
  std::getline(p, line);
  int w, h, maxv;
  p >> w >> h >> maxv;
  int v, first = -1;
  while (p >> v) {
    if (first < 0) first = v;
    EXPECT_EQ(v, first);
  }
}

TEST(Pgm, SliceLeavesTwoAxes) {
  ReportTable t;
  t.n = 3;
  for (double z : {-0.1, 0.0, 0.1})
    for (double y : {0.0, 0.1})
      for (double x : {0.0, 0.1, 0.2}) {
        t.points.push_back({x, y, z});
        t.reconstructed.push_back(x + y + z);
      }
  t.truth = t.reconstructed;
  std::ostringstream img;
  EXPECT_THROW(write_pgm(img, t, t.reconstructed, {}), std::invalid_argument);
  write_pgm(img, t, t.reconstructed, parse_slice("x3=0"));
  EXPECT_NE(img.str().find("3 2\n255\n"), std::string::npos);
  EXPECT_THROW(write_pgm(img, t, t.reconstructed, parse_slice("x3=0.5")), std::invalid_argument);
}

TEST(Config, MinimalUsesDefaults) {
  const RunConfig c = parse_config_text(R"({"space": {"kind": "euclidean", "n": 2}})");
  EXPECT_EQ(c.space, SpaceSpec(SpaceKind::euclidean, 2, 1.0));
  EXPECT_EQ(c.phantom.bumps.size(), 1u);
  EXPECT_EQ(boundary_points(c), 256u);
  EXPECT_EQ(t_grid(c).size(), 800u);
  EXPECT_EQ(c.method, Formula::direct);
  EXPECT_FALSE(c.alpha.has_value());
}

TEST(Config, FullDocument) {
  const RunConfig c = parse_config_text(R"({
    "space": {"kind": "sphere", "n": 3, "radius": 1.2},
    "phantom": [{"center": [0.2, 0.1, 0.0], "radius": 0.3, "amplitude": 2.0}],
    "grids": {"boundary_points": 32, "t_points": 300, "quadrature_order": 40, "fd_step": 0.005,
              "recon": {"points_per_axis": 9, "extent": 0.8, "offsets": [0.1]}},
    "alpha": 1.0, "seed": 9})");
  EXPECT_EQ(c.space.kind, SpaceKind::sphere);
  ASSERT_EQ(c.phantom.bumps[0].center.size(), 4u);
  EXPECT_NEAR(c.phantom.bumps[0].center[3], std::sqrt(1.0 - 0.05), 1e-15);
  EXPECT_EQ(c.grids.quadrature_order, 40);
  EXPECT_EQ(c.grids.recon.offsets, std::vector<double>{0.1});
  EXPECT_EQ(*c.alpha, 1.0);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(inversion_options(c).fd_step, 0.005);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_error("[1, 2]"), "config");
  EXPECT_EQ(config_error("{"), "config");
  EXPECT_EQ(config_error(R"({"grids": {}})"), "config.space");
  EXPECT_EQ(config_error(R"({"space": {"kind": "torus", "n": 2}})"), "config.space.kind");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 1}})"), "config.space.n");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "extra": 1})"), "config.extra");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "phantom": [{"center": [0.9, 0.0], "radius": 0.3}]})"),
            "config.phantom");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "phantom": [{"center": "x", "radius": 0.3}]})"),
            "config.phantom[0].center");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "grids": {"fd_step": 0}})"), "config.grids.fd_step");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "grids": {"t_points": 10}})"), "config.grids.t_points");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 3}, "grids": {"boundary_points": 7}})"),
            "config.grids.boundary_points");
  EXPECT_EQ(config_error(R"({"space": {"kind": "sphere", "n": 2}, "method": "modified"})"), "config.method");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 3}, "alpha": -2})"), "config.alpha");
  EXPECT_EQ(config_error(R"({"space": {"kind": "hyperbolic", "n": 2}, "alpha": 1})"), "config.alpha");
  EXPECT_EQ(config_error(R"({"space": {"kind": "euclidean", "n": 2}, "grids": {"recon": {"extent": 1.5}}})"),
            "config.grids.recon.extent");
}
