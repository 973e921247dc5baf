#include "lobarena/util/svg.hpp"

#include <cstdio>
#include <fstream>

#include "lobarena/util/error.hpp"

namespace lobarena {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill,
                     const std::string& stroke) {
  body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
        << "\"/>\n";
}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
  body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << fmt(stroke_width) << "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& points,
                         const std::string& stroke, double stroke_width) {
  if (points.empty()) return;
  body_ << "<polyline points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) body_ << ' ';
    body_ << fmt(points[i].first) << ',' << fmt(points[i].second);
  }
  body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << fmt(stroke_width) << "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, double font_size,
                     const std::string& anchor) {
  body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\""
        << fmt(font_size) << "\" font-family=\"monospace\" text-anchor=\"" << anchor
        << "\">" << escape_xml(content) << "</text>\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
      << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << ' '
      << fmt(height_) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width_) << "\" height=\"" << fmt(height_)
      << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void SvgCanvas::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open svg output: ", path);
  out << str();
  if (!out) throw Error("failed writing svg: ", path);
}

}  // namespace lobarena
