#pragma once

// Artifact writers: CSV tables, JSON reports, and a log-log SVG rate plot.
// Output is locale independent and byte-stable for identical inputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tfhom/cell.hpp"
#include "tfhom/envelopes.hpp"
#include "tfhom/errors.hpp"
#include "tfhom/homogenize.hpp"
#include "tfhom/tfhj.hpp"

namespace tfhom::io {

using Json = nlohmann::ordered_json;

/// 12 significant digits, '.' decimal point; "nan" for NaN.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io: cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("io: write failed for " + path.string());
}

inline std::string effective_table_csv(const EffectiveTable& t) {
  std::string s = "p,hbar,fit_slope\n";
  for (std::size_t j = 0; j < t.p_grid().size(); ++j)
    s += fmt(t.p_grid()[j]) + "," + fmt(t.hbar()[j]) + "," + fmt(t.fit_slope()[j]) + "\n";
  return s;
}

/// Rows t,x,u for the requested time levels, in the given order.
inline std::string snapshots_csv(const FieldHistory& f, const std::vector<int>& levels) {
  std::string s = "t,x,u\n";
  for (int n : levels) {
    if (n < 0 || n > f.n_steps()) throw DomainError("snapshot level out of range");
    const auto row = f.row(n);
    for (int i = 0; i < f.n_cells(); ++i) s += fmt(f.time(n)) + "," + fmt(f.grid().node(i)) + "," + fmt(row[i]) + "\n";
  }
  return s;
}

inline std::string errors_csv(const RateReport& r) {
  std::string s = "eps,error\n";
  for (std::size_t k = 0; k < r.errors.size(); ++k) s += fmt(r.eps_ladder[k]) + "," + fmt(r.errors[k]) + "\n";
  return s;
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const RateReport& r) {
  Json j;
  j["eps"] = r.eps_ladder;
  j["error"] = r.errors;
  j["fitted_order"] = r.fitted_order ? Json(*r.fitted_order) : Json(nullptr);
  j["nu"] = r.nu;
  j["theorem_exponent"] = r.theorem_exponent;
  j["pass"] = r.pass;
  j["alpha"] = r.alpha ? Json(*r.alpha) : Json("classical");
  j["strictly_decreasing"] = r.strictly_decreasing;
  j["degenerate"] = r.degenerate;
  j["failure"] = r.failure.empty() ? Json(nullptr) : Json(r.failure);
  return j;
}

inline Json to_json(const BoundCheck& b) {
  Json j;
  j["ok"] = b.ok;
  j["measured"] = number_or_null(b.measured);
  j["bound"] = number_or_null(b.bound);
  return j;
}

inline Json to_json(const Lemma36Report& r) {
  Json j;
  j["delta"] = r.delta;
  j["holder_m"] = r.holder_m;
  j["alpha"] = r.alpha;
  j["grid_slack"] = r.grid_slack;
  j["c_const"] = r.c_const;
  j["a_ordering"] = to_json(r.ordering);
  j["b_lipschitz"] = to_json(r.lipschitz);
  j["c_argpoint"] = to_json(r.argpoint);
  j["d_distance"] = to_json(r.distance);
  j["e_holder"] = to_json(r.holder);
  j["all_ok"] = r.all_ok();
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {
inline std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}
}  // namespace detail

/// log10(error) against log10(eps): data points, the least-squares line, and
/// a reference line of slope theorem_exponent through the first point.
inline std::string rate_plot_svg(const RateReport& r) {
  using detail::f3;
  const double w = 640, h = 480, ml = 70, mr = 20, mt = 30, mb = 60;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < r.errors.size(); ++k) {
    if (r.errors[k] > 0.0 && r.eps_ladder[k] > 0.0) {
      lx.push_back(std::log10(r.eps_ladder[k]));
      ly.push_back(std::log10(r.errors[k]));
    }
  }
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
    << " " << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (lx.size() < 2) {
    s << "<text x=\"" << w / 2 << "\" y=\"" << h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\">no positive errors to plot</text>\n</svg>\n";
    return s.str();
  }
  double x0 = *std::min_element(lx.begin(), lx.end()), x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(ly.begin(), ly.end()), y1 = *std::max_element(ly.begin(), ly.end());
  const double px = 0.1 * (x1 - x0 + 1e-12), py = 0.15 * (y1 - y0 + 0.1);
  x0 -= px;
  x1 += px;
  y0 -= py;
  y1 += py;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

  s << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  for (double t = std::ceil(x0 * 2) / 2; t <= x1; t += 0.5)
    s << "<text x=\"" << f3(sx(t)) << "\" y=\"" << h - mb + 18 << "\" text-anchor=\"middle\">" << f3(t) << "</text>\n";
  for (double t = std::ceil(y0 * 4) / 4; t <= y1; t += 0.25)
    s << "<text x=\"" << ml - 6 << "\" y=\"" << f3(sy(t) + 4) << "\" text-anchor=\"end\">" << f3(t) << "</text>\n";
  s << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">log10(eps)</text>\n";
  s << "<text x=\"18\" y=\"" << (mt + h - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (mt + h - mb) / 2 << ")\">log10(sup error)</text>\n";

  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t k = 0; k < lx.size(); ++k) s << (k ? " " : "") << f3(sx(lx[k])) << "," << f3(sy(ly[k]));
  s << "\"/>\n";
  for (std::size_t k = 0; k < lx.size(); ++k)
    s << "<circle cx=\"" << f3(sx(lx[k])) << "\" cy=\"" << f3(sy(ly[k])) << "\" r=\"4\" fill=\"steelblue\"/>\n";

  const double xa = lx.front(), xb = lx.back();
  if (r.fitted_order) {
    const LineFit fit = least_squares(lx, ly);
    s << "<line x1=\"" << f3(sx(xa)) << "\" y1=\"" << f3(sy(fit.intercept + fit.slope * xa)) << "\" x2=\""
      << f3(sx(xb)) << "\" y2=\"" << f3(sy(fit.intercept + fit.slope * xb))
      << "\" stroke=\"darkorange\" stroke-dasharray=\"6 3\"/>\n";
  }
  const double ref = r.theorem_exponent;
  s << "<line x1=\"" << f3(sx(xa)) << "\" y1=\"" << f3(sy(ly.front())) << "\" x2=\"" << f3(sx(xb)) << "\" y2=\""
    << f3(sy(ly.front() + ref * (xb - xa))) << "\" stroke=\"gray\" stroke-dasharray=\"2 3\"/>\n";
  s << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 5 << "\">fitted order "
    << (r.fitted_order ? f3(*r.fitted_order) : std::string("n/a")) << ", reference slope " << f3(ref) << "</text>\n";
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace tfhom::io
