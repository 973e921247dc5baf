#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lobarena {

// Minimal deterministic SVG builder. Coordinates are emitted with fixed
// precision so identical inputs produce byte-identical files.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none");
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke, double stroke_width = 1.0);
  void text(double x, double y, const std::string& content, double font_size = 12.0,
            const std::string& anchor = "start");

  std::string str() const;
  void write(const std::string& path) const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

}  // namespace lobarena
