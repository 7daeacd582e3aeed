#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>

#include "malleable/cli.hpp"

namespace malleable::cli {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 40, kTop = 40, kBottom = 70;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string frontier_svg(const std::vector<RateLossPoint>& points, double h_x, double h_y) {
  double kmin = h_x, kmax = h_x, lmin = h_y, lmax = h_y;
  for (const auto& p : points) {
    kmax = std::max(kmax, h_x + p.k_loss);
    lmax = std::max(lmax, h_y + p.l_loss);
  }
  // Leave room around a degenerate single point.
  const double kpad = std::max((kmax - kmin) * 0.1, 0.05), lpad = std::max((lmax - lmin) * 0.1, 0.05);
  kmin -= kpad;
  kmax += kpad;
  lmin -= lpad;
  lmax += lpad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double k) { return kLeft + (k - kmin) / (kmax - kmin) * pw; };
  auto sy = [&](double l) { return kTop + ph - (l - lmin) / (lmax - lmin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
     << num(kTop + ph) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
     << num(kTop + ph) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double k = kmin + (kmax - kmin) * i / 4.0, l = lmin + (lmax - lmin) * i / 4.0;
    os << "<text x=\"" << num(sx(k)) << "\" y=\"" << num(kTop + ph + 20) << "\" font-size=\"12\" text-anchor=\"middle\">"
       << tick(k) << "</text>\n";
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(l) + 4) << "\" font-size=\"12\" text-anchor=\"end\">"
       << tick(l) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 20)
     << "\" font-size=\"16\" text-anchor=\"middle\">K</text>\n";
  os << "<text x=\"20\" y=\"" << num(kTop + ph / 2) << "\" font-size=\"16\" text-anchor=\"middle\">L</text>\n";
  if (points.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i) os << ' ';
      os << num(sx(h_x + points[i].k_loss)) << ',' << num(sy(h_y + points[i].l_loss));
    }
    os << "\"/>\n";
  }
  for (const auto& p : points)
    os << "<circle cx=\"" << num(sx(h_x + p.k_loss)) << "\" cy=\"" << num(sy(h_y + p.l_loss))
       << "\" r=\"3\" fill=\"steelblue\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace malleable::cli
