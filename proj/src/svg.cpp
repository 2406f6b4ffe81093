#include "render/svg.hpp"

#include <array>
#include <cstdio>

namespace render {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

SvgCanvas::SvgCanvas(int size_px) : size_(size_px) {}

double SvgCanvas::px(double x) const { return (x + 10.0) / 20.0 * size_; }
double SvgCanvas::py(double y) const { return (10.0 - y) / 20.0 * size_; }
double SvgCanvas::scale(double r) const { return r / 20.0 * size_; }

void SvgCanvas::circle(std::complex<double> center, double radius, const std::string& stroke,
                       const std::string& fill, double stroke_width, double fill_opacity) {
    body_ += "<circle cx=\"" + num(px(center.real())) + "\" cy=\"" + num(py(center.imag())) +
             "\" r=\"" + num(scale(radius)) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(stroke_width) + "\" fill=\"" + fill + "\" fill-opacity=\"" +
             num(fill_opacity) + "\"/>\n";
}

void SvgCanvas::dot(std::complex<double> at, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + num(px(at.real())) + "\" cy=\"" + num(py(at.imag())) +
             "\" r=\"" + num(radius_px) + "\" stroke=\"none\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::segment(std::complex<double> a, std::complex<double> b,
                        const std::string& stroke, double stroke_width) {
    body_ += "<line x1=\"" + num(px(a.real())) + "\" y1=\"" + num(py(a.imag())) + "\" x2=\"" +
             num(px(b.real())) + "\" y2=\"" + num(py(b.imag())) + "\" stroke=\"" + stroke +
             "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

std::string SvgCanvas::finish() const {
    std::string s = std::to_string(size_);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s +
           "\" viewBox=\"0 0 " + s + " " + s + "\">\n" +
           "<rect width=\"" + s + "\" height=\"" + s + "\" fill=\"white\"/>\n" + body_ +
           "</svg>\n";
}

std::string depth_color(int depth) {
    static const std::array<const char*, 10> palette = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    };
    int i = depth - 1;
    if (i < 0) i = 0;
    return palette[std::size_t(i) % palette.size()];
}

} // namespace render
