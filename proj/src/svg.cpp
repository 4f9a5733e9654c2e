#include "dfd/svg.hpp"

#include <cstdio>

namespace dfd::svg {

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
}  // namespace

std::string escape(const std::string& s) {
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

Doc::Doc(double width, double height, const std::string& header_comment)
    : width_(width), height_(height), header_comment_(header_comment) {}

void Doc::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Doc::rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\"/>\n";
}

void Doc::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
             "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
}

void Doc::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width) {
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) body_ += " ";
        body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
}

void Doc::text(double x, double y, const std::string& content, int font_size, const std::string& anchor,
               const std::string& fill) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(font_size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\">" +
             escape(content) + "</text>\n";
}

std::string Doc::str() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<!-- " + header_comment_ + " -->\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" fill=\"#ffffff\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
}

}  // namespace dfd::svg
