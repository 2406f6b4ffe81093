#pragma once

#include <complex>
#include <string>

namespace render {

// Minimal SVG writer over the fixed viewport [-10,10]^2 (infinity clipped).
class SvgCanvas {
public:
    explicit SvgCanvas(int size_px = 800);

    void circle(std::complex<double> center, double radius, const std::string& stroke,
                const std::string& fill, double stroke_width = 1.0, double fill_opacity = 1.0);
    void dot(std::complex<double> at, double radius_px, const std::string& fill);
    void segment(std::complex<double> a, std::complex<double> b, const std::string& stroke,
                 double stroke_width = 1.0);

    std::string finish() const;

private:
    double px(double x) const;
    double py(double y) const;
    double scale(double r) const;

    int size_;
    std::string body_;
};

// Color for a 1-based depth, cycling a fixed palette.
std::string depth_color(int depth);

} // namespace render
