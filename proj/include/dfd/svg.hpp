#pragma once

#include <string>
#include <vector>

namespace dfd::svg {

// Minimal SVG builder producing deterministic, byte-stable markup. Numbers
// are fixed to two decimals so equal inputs serialize identically.
class Doc {
public:
    Doc(double width, double height, const std::string& header_comment);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0);
    void rect(double x, double y, double w, double h, const std::string& fill);
    void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1.0);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5);
    void text(double x, double y, const std::string& content, int font_size = 11,
              const std::string& anchor = "start", const std::string& fill = "#333333");

    std::string str() const;

private:
    double width_, height_;
    std::string body_;
    std::string header_comment_;
};

// Maps a data value into pixel space.
struct Scale {
    double dlo = 0, dhi = 1, plo = 0, phi = 1;
    double operator()(double v) const {
        if (dhi == dlo) return (plo + phi) / 2.0;
        return plo + (v - dlo) / (dhi - dlo) * (phi - plo);
    }
};

std::string escape(const std::string& s);

}  // namespace dfd::svg
