#ifndef GEOMEANS_FORMATS_HPP
#define GEOMEANS_FORMATS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "forward.hpp"
#include "inversion.hpp"
#include "spaces.hpp"

namespace geomeans {

/** \brief Shortest decimal string that reads back to the same double. */
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw std::runtime_error(where + ": not a number: \"" + s + "\"");
  return v;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline nlohmann::json space_json(const SpaceSpec& s) {
  // radius as its shortest decimal so the JSON text is stable
  return {{"kind", to_string(s.kind)}, {"n", s.n}, {"radius", s.radius}};
}

inline SpaceSpec space_from_json(const nlohmann::json& j) {
  const std::string k = j.at("kind").get<std::string>();
  SpaceKind kind;
  if (k == "euclidean")
    kind = SpaceKind::euclidean;
  else if (k == "sphere")
    kind = SpaceKind::sphere;
  else if (k == "hyperbolic")
    kind = SpaceKind::hyperbolic;
  else
    throw std::runtime_error("unknown space kind \"" + k + "\"");
  return SpaceSpec(kind, j.at("n").get<int>(), j.at("radius").get<double>());
}

}  // namespace detail

inline constexpr const char* means_magic = "# geomeans-means v1";

/**
 * \brief Writes MeanData as CSV: magic line, "# " + JSON metadata, header
 * center_idx,t,value, then one row per (centre, t).
 */
inline void write_means(std::ostream& out, const MeanData& d) {
  d.validate();
  if (d.boundary.resolution == 0) throw std::invalid_argument("write_means: boundary grid has no resolution to record");
  nlohmann::json meta;
  meta["space"] = detail::space_json(d.space);
  meta["boundary_points"] = d.boundary.resolution;
  meta["centers"] = d.centers();
  meta["t_grid"] = {{"first", d.tgrid.first()}, {"last", d.tgrid.last()}, {"count", d.tgrid.size()}};
  meta["alpha"] = d.alpha ? nlohmann::json(*d.alpha) : nlohmann::json(nullptr);
  out << means_magic << '\n' << "# " << meta.dump() << '\n' << "center_idx,t,value\n";
  std::vector<std::string> ts(d.tgrid.size());
  for (std::size_t j = 0; j < ts.size(); ++j) ts[j] = format_double(d.tgrid[j]);
  for (std::size_t i = 0; i < d.centers(); ++i) {
    const auto row = d.row(i);
    const std::string idx = std::to_string(i);
    for (std::size_t j = 0; j < ts.size(); ++j) out << idx << ',' << ts[j] << ',' << format_double(row[j]) << '\n';
  }
  if (!out) throw std::runtime_error("write_means: write failed");
}

inline MeanData read_means(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != means_magic) throw std::runtime_error("read_means: missing \"# geomeans-means v1\" header");
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("read_means: missing metadata line");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(line.substr(2));
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("read_means: bad metadata: ") + e.what());
  }
  MeanData d;
  try {
    d.space = detail::space_from_json(meta.at("space"));
    d.boundary = boundary_grid(d.space, meta.at("boundary_points").get<std::size_t>());
    const auto& tg = meta.at("t_grid");
    d.tgrid = TGrid(tg.at("first").get<double>(), tg.at("last").get<double>(), tg.at("count").get<std::size_t>());
    if (!meta.at("alpha").is_null()) d.alpha = meta.at("alpha").get<double>();
    if (meta.at("centers").get<std::size_t>() != d.boundary.size())
      throw std::runtime_error("centre count does not match the boundary grid");
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("read_means: bad metadata: ") + e.what());
  }
  if (!std::getline(in, line) || line != "center_idx,t,value") throw std::runtime_error("read_means: missing column header");
  const std::size_t nt = d.tgrid.size();
  d.values.assign(d.boundary.size() * nt, 0.0);
  std::vector<char> seen(d.values.size(), 0);
  std::size_t lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    const std::string where = "read_means: line " + std::to_string(lineno);
    if (f.size() != 3) throw std::runtime_error(where + ": expected 3 fields");
    std::size_t idx = 0;
    const auto r = std::from_chars(f[0].data(), f[0].data() + f[0].size(), idx);
    if (r.ec != std::errc() || r.ptr != f[0].data() + f[0].size() || idx >= d.boundary.size())
      throw std::runtime_error(where + ": bad centre index");
    const double t = parse_double(f[1], where);
    const double u = (t - d.tgrid.first()) / d.tgrid.step();
    const long j = std::lround(u);
    if (j < 0 || static_cast<std::size_t>(j) >= nt || std::abs(d.tgrid[j] - t) > 1e-9 * std::max(1.0, std::abs(t)))
      throw std::runtime_error(where + ": t = " + f[1] + " is not a grid node");
    const std::size_t k = idx * nt + static_cast<std::size_t>(j);
    if (seen[k]) throw std::runtime_error(where + ": duplicate row");
    seen[k] = 1;
    d.values[k] = parse_double(f[2], where);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::runtime_error("read_means: missing rows");
  d.validate();
  return d;
}

inline void save_means(const std::string& path, const MeanData& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_means(out, d);
}

inline MeanData load_means(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_means(in);
}

/** \brief Report CSV: x_1..x_n,f_true,f_rec rows and a "# " + JSON footer with the error norms. */
inline void write_report(std::ostream& out, const ReconstructionReport& r) {
  const int n = r.space.n;
  for (int k = 1; k <= n; ++k) out << 'x' << '_' << k << ',';
  out << "f_true,f_rec\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    for (double v : r.points[i]) out << format_double(v) << ',';
    out << format_double(r.truth[i]) << ',' << format_double(r.reconstructed[i]) << '\n';
  }
  nlohmann::json foot;
  foot["space"] = detail::space_json(r.space);
  foot["method"] = r.method;
  foot["points"] = r.points.size();
  foot["rel_l2"] = r.rel_l2;
  foot["sup_error"] = r.sup_error;
  foot["calibration"] = r.calibration;
  out << "# " << foot.dump() << '\n';
  if (!out) throw std::runtime_error("write_report: write failed");
}

inline void save_report(const std::string& path, const ReconstructionReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_report(out, r);
}

/** \brief Rows of a report file; footer fields in `footer`. */
struct ReportTable {
  int n = 0;
  std::vector<Point> points;
  std::vector<double> truth, reconstructed;
  nlohmann::json footer;
};

inline ReportTable read_report(std::istream& in) {
  ReportTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_report: empty file");
  const auto head = detail::split_csv(line);
  if (head.size() < 4 || head[head.size() - 2] != "f_true" || head.back() != "f_rec")
    throw std::runtime_error("read_report: header must be x_1,...,x_n,f_true,f_rec");
  t.n = static_cast<int>(head.size()) - 2;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      try {
        t.footer = nlohmann::json::parse(line.substr(2));
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("read_report: bad footer: ") + e.what());
      }
      continue;
    }
    const auto f = detail::split_csv(line);
    const std::string where = "read_report: line " + std::to_string(lineno);
    if (f.size() != head.size()) throw std::runtime_error(where + ": wrong field count");
    Point p(t.n);
    for (int k = 0; k < t.n; ++k) p[k] = parse_double(f[k], where);
    t.points.push_back(std::move(p));
    t.truth.push_back(parse_double(f[t.n], where));
    t.reconstructed.push_back(parse_double(f[t.n + 1], where));
  }
  return t;
}

inline ReportTable load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_report(in);
}

/** \brief "axis=value" with axis given as x3 or 3 (1-based). */
struct SliceSpec {
  int axis = -1;  ///< 0-based; -1 for no slice
  double value = 0.0;
};

inline SliceSpec parse_slice(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("slice: expected axis=value, got \"" + s + "\"");
  std::string axis = s.substr(0, eq);
  if (!axis.empty() && (axis[0] == 'x' || axis[0] == 'X')) axis.erase(0, 1);
  if (!axis.empty() && axis[0] == '_') axis.erase(0, 1);
  int k = 0;
  const auto r = std::from_chars(axis.data(), axis.data() + axis.size(), k);
  if (r.ec != std::errc() || r.ptr != axis.data() + axis.size() || k < 1)
    throw std::invalid_argument("slice: bad axis \"" + s.substr(0, eq) + "\"");
  return {k - 1, parse_double(s.substr(eq + 1), "slice value")};
}

/**
 * \brief Plain P2 image of one column of a report over the two coordinates that
 * vary after slicing.  Levels 0..255 by linear min-max scaling; grid cells
 * without a sample get level 0; a constant field gives a uniform image.
 */
inline void write_pgm(std::ostream& out, const ReportTable& t, const std::vector<double>& field, const SliceSpec& slice) {
  std::vector<std::size_t> rows;
  double tol = 0.0;
  if (slice.axis >= 0) {
    if (slice.axis >= t.n) throw std::invalid_argument("render: slice axis beyond the dimension");
    double spread = 0.0;
    for (const Point& p : t.points) spread = std::max(spread, std::abs(p[slice.axis]));
    tol = 1e-9 * std::max(1.0, spread);
  }
  for (std::size_t i = 0; i < t.points.size(); ++i)
    if (slice.axis < 0 || std::abs(t.points[i][slice.axis] - slice.value) <= tol) rows.push_back(i);
  if (rows.empty()) throw std::invalid_argument("render: no samples in the requested slice");
  std::vector<int> axes;
  for (int k = 0; k < t.n; ++k) {
    if (k == slice.axis) continue;
    for (std::size_t i : rows)
      if (t.points[i][k] != t.points[rows[0]][k]) {
        axes.push_back(k);
        break;
      }
  }
  if (axes.size() != 2)
    throw std::invalid_argument("render: the selected samples vary along " + std::to_string(axes.size()) +
                                " axes; choose a slice that leaves exactly 2");
  std::map<double, std::size_t> xs, ys;
  for (std::size_t i : rows) {
    xs.emplace(t.points[i][axes[0]], 0);
    ys.emplace(t.points[i][axes[1]], 0);
  }
  std::size_t c = 0;
  for (auto& [k, v] : xs) v = c++;
  c = 0;
  for (auto& [k, v] : ys) v = c++;
  double lo = field[rows[0]], hi = field[rows[0]];
  for (std::size_t i : rows) {
    lo = std::min(lo, field[i]);
    hi = std::max(hi, field[i]);
  }
  const std::size_t w = xs.size(), h = ys.size();
  std::vector<int> img(w * h, 0);
  for (std::size_t i : rows) {
    const int level = hi > lo ? static_cast<int>(std::lround(255.0 * (field[i] - lo) / (hi - lo))) : 0;
    // image rows run from the largest second coordinate down
    img[(h - 1 - ys[t.points[i][axes[1]]]) * w + xs[t.points[i][axes[0]]]] = level;
  }
  out << "P2\n# min " << format_double(lo) << " max " << format_double(hi) << '\n' << w << ' ' << h << "\n255\n";
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t q = 0; q < w; ++q) out << (q ? " " : "") << img[r * w + q];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_pgm: write failed");
}

}  // namespace geomeans

#endif
