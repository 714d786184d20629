#include "mcbap/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcbap/io.hpp"

namespace mcbap {

namespace {

constexpr double kW = 960, kH = 640;
constexpr double kMarginL = 60, kMarginR = 20, kMarginT = 40, kMarginB = 46;

std::string ship_color(int ship) {
  int hue = (ship * 47) % 360;
  std::ostringstream os;
  os << "hsl(" << hue << ",62%,55%)";
  return os.str();
}

}  // namespace

std::string render_port_svg(const Instance& inst, const Solution& sol, int port) {
  const Port& p = inst.ports[port];
  double t_max = 24;
  for (std::size_t k = 0; k < inst.externals.size(); ++k)
    if (inst.externals[k].port == port)
      t_max = std::max(t_max, inst.externals[k].start + inst.externals[k].duration);
  for (const PortCall& c : inst.calls) {
    if (c.port != port) continue;
    t_max = std::max(t_max, c.lft);
    if (c.id < static_cast<int>(sol.scheduled.size()) && sol.scheduled[c.id]) {
      double h = handling_time(inst, c, sol.assignments[c.id].position);
      t_max = std::max(t_max, sol.assignments[c.id].start + h);
    }
  }
  t_max *= 1.05;

  double sx = (kW - kMarginL - kMarginR) / p.quay_length;
  double sy = (kH - kMarginT - kMarginB) / t_max;
  auto X = [&](double m) { return kMarginL + m * sx; };
  auto Y = [&](double h) { return kMarginT + h * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<text x=\"" << kMarginL << "\" y=\"20\" font-size=\"15\">" << p.code
      << " &#8212; berth plan</text>\n";
  svg << "<rect x=\"" << X(0) << "\" y=\"" << Y(0) << "\" width=\"" << p.quay_length * sx
      << "\" height=\"" << t_max * sy << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // axis ticks
  double xstep = p.quay_length / 8;
  for (int i = 0; i <= 8; ++i) {
    double m = i * xstep;
    svg << "<text x=\"" << X(m) << "\" y=\"" << kH - kMarginB + 16
        << "\" text-anchor=\"middle\">" << std::llround(m) << "</text>\n";
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">quay position (m)</text>\n";
  int tticks = 8;
  for (int i = 0; i <= tticks; ++i) {
    double h = t_max * i / tticks;
    svg << "<text x=\"" << kMarginL - 8 << "\" y=\"" << Y(h) + 4
        << "\" text-anchor=\"end\">" << std::llround(h) << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << kH / 2
      << "\" transform=\"rotate(-90 14 " << kH / 2 << ")\" text-anchor=\"middle\">time (h)</text>\n";

  for (std::size_t k = 0; k < inst.externals.size(); ++k) {
    const ExternalBerth& e = inst.externals[k];
    if (e.port != port) continue;
    svg << "<rect x=\"" << X(e.position) << "\" y=\"" << Y(e.start) << "\" width=\""
        << e.length * sx << "\" height=\"" << e.duration * sy
        << "\" fill=\"#aaa\" stroke=\"#666\" fill-opacity=\"0.8\"/>\n";
  }
  for (const PortCall& c : inst.calls) {
    if (c.port != port || c.id >= static_cast<int>(sol.scheduled.size()) ||
        !sol.scheduled[c.id])
      continue;
    const Assignment& a = sol.assignments[c.id];
    const Ship& ship = inst.ships[c.ship];
    double h = handling_time(inst, c, a.position);
    svg << "<rect x=\"" << X(a.position) << "\" y=\"" << Y(a.start) << "\" width=\""
        << ship.length * sx << "\" height=\"" << h * sy << "\" fill=\"" << ship_color(c.ship)
        << "\" stroke=\"#222\" fill-opacity=\"0.85\"/>\n";
    svg << "<text x=\"" << X(a.position + ship.length / 2) << "\" y=\""
        << Y(a.start + h / 2) + 4 << "\" text-anchor=\"middle\">" << c.ship << "."
        << c.call_index << "</text>\n";
    // window markers across the rectangle's quay span
    auto marker = [&](double t, const char* color) {
      svg << "<line x1=\"" << X(a.position) << "\" x2=\"" << X(a.position + ship.length)
          << "\" y1=\"" << Y(t) << "\" y2=\"" << Y(t) << "\" stroke=\"" << color
          << "\" stroke-dasharray=\"4 3\" stroke-width=\"1.4\"/>\n";
    };
    marker(c.est, "#1a7f37");
    marker(c.eft, "#b58900");
    marker(c.lft, "#c0392b");
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> write_solution_svgs(const Instance& inst, const Solution& sol,
                                             const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;
  for (std::size_t p = 0; p < inst.ports.size(); ++p) {
    std::string path = out_dir + "/" + inst.ports[p].code + ".svg";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << render_port_svg(inst, sol, static_cast<int>(p));
    files.push_back(path);
  }
  return files;
}

}  // namespace mcbap
