#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gravre/errors.hpp"

namespace gravre::cli {

namespace {

constexpr double kW = 640, kH = 480, kMargin = 60;

std::string attr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else if (c == '&')
            out += "&amp;";
        else
            out += c;
    }
    return out;
}

}  // namespace

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Csv::row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += fmt_num(values[i]);
    }
    lines_.push_back(std::move(line));
}

void Csv::row_text(const std::vector<std::string>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += values[i];
    }
    lines_.push_back(std::move(line));
}

std::string Csv::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& l : lines_) out += l + '\n';
    return out;
}

Svg::Svg(double x_lo, double x_hi, double y_lo, double y_hi, std::string x_label, std::string y_label)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {
    if (!(x_hi_ > x_lo_)) x_hi_ = x_lo_ + 1.0;
    if (!(y_hi_ > y_lo_)) y_hi_ = y_lo_ + 1.0;
}

double Svg::px(double x) const { return kMargin + (x - x_lo_) / (x_hi_ - x_lo_) * (kW - 2 * kMargin); }
double Svg::py(double y) const { return kH - kMargin - (y - y_lo_) / (y_hi_ - y_lo_) * (kH - 2 * kMargin); }
bool Svg::in_range(double x, double y) const {
    return std::isfinite(x) && std::isfinite(y) && x >= x_lo_ && x <= x_hi_ && y >= y_lo_ && y <= y_hi_;
}

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width,
                   bool dashed) {
    // split at points outside the window
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        items_.push_back("<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + attr(width) + "\"" +
                         (dashed ? " stroke-dasharray=\"5,4\"" : "") + " points=\"" + cur + "\"/>");
        cur.clear();
    };
    for (const auto& [x, y] : pts) {
        if (!in_range(x, y)) {
            flush();
            continue;
        }
        cur += attr(px(x)) + "," + attr(py(y)) + " ";
    }
    flush();
}

void Svg::points(const std::vector<std::pair<double, double>>& pts, const std::string& color, double radius) {
    for (const auto& [x, y] : pts) {
        if (!in_range(x, y)) continue;
        items_.push_back("<circle cx=\"" + attr(px(x)) + "\" cy=\"" + attr(py(y)) + "\" r=\"" + attr(radius) +
                         "\" fill=\"" + color + "\"/>");
    }
}

void Svg::vline(double x, const std::string& color, bool dashed, const std::string& label) {
    if (!(x >= x_lo_ && x <= x_hi_)) return;
    items_.push_back("<line x1=\"" + attr(px(x)) + "\" y1=\"" + attr(py(y_lo_)) + "\" x2=\"" + attr(px(x)) +
                     "\" y2=\"" + attr(py(y_hi_)) + "\" stroke=\"" + color + "\"" +
                     (dashed ? " stroke-dasharray=\"2,3\"" : "") + "/>");
    if (!label.empty())
        items_.push_back("<text x=\"" + attr(px(x) + 2) + "\" y=\"" + attr(py(y_hi_) + 12) +
                         "\" font-size=\"10\">" + escape(label) + "</text>");
}

void Svg::hline(double y, const std::string& color, bool dashed, const std::string& label) {
    if (!(y >= y_lo_ && y <= y_hi_)) return;
    items_.push_back("<line x1=\"" + attr(px(x_lo_)) + "\" y1=\"" + attr(py(y)) + "\" x2=\"" + attr(px(x_hi_)) +
                     "\" y2=\"" + attr(py(y)) + "\" stroke=\"" + color + "\"" +
                     (dashed ? " stroke-dasharray=\"2,3\"" : "") + "/>");
    if (!label.empty())
        items_.push_back("<text x=\"" + attr(px(x_hi_) - 40) + "\" y=\"" + attr(py(y) - 2) +
                         "\" font-size=\"10\">" + escape(label) + "</text>");
}

void Svg::rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity) {
    const double a = px(std::max(x0, x_lo_)), b = px(std::min(x1, x_hi_));
    const double c = py(std::min(y1, y_hi_)), d = py(std::max(y0, y_lo_));
    if (!(b > a) || !(d > c)) return;
    items_.push_back("<rect x=\"" + attr(a) + "\" y=\"" + attr(c) + "\" width=\"" + attr(b - a) + "\" height=\"" +
                     attr(d - c) + "\" fill=\"" + fill + "\" fill-opacity=\"" + attr(opacity) + "\"/>");
}

void Svg::hatch(double x0, double y0, double x1, double y1, const std::string& color) {
    const double a = px(std::max(x0, x_lo_)), b = px(std::min(x1, x_hi_));
    const double c = py(std::min(y1, y_hi_)), d = py(std::max(y0, y_lo_));
    if (!(b > a) || !(d > c)) return;
    items_.push_back("<rect x=\"" + attr(a) + "\" y=\"" + attr(c) + "\" width=\"" + attr(b - a) + "\" height=\"" +
                     attr(d - c) + "\" fill=\"url(#hatch-" + color.substr(1) + ")\"/>");
}

void Svg::title(const std::string& t) { title_ = t; }

std::string Svg::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
       << kW << ' ' << kH << "\">\n";
    // hatch patterns for the colors used
    os << "<defs>";
    for (const char* c : {"444444", "1f77b4", "d62728", "2ca02c"}) {
        os << "<pattern id=\"hatch-" << c
           << "\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">"
           << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#" << c << "\" stroke-width=\"1\"/></pattern>";
    }
    os << "</defs>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& it : items_) os << it << '\n';
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin << "\" height=\""
       << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
       << escape(x_label_) << "</text>\n";
    os << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 " << kH / 2
       << ")\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label_) << "</text>\n";
    os << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 15 << "\" font-size=\"10\">" << attr(x_lo_)
       << "</text>\n";
    os << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 15 << "\" text-anchor=\"end\" font-size=\"10\">"
       << attr(x_hi_) << "</text>\n";
    os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kH - kMargin << "\" text-anchor=\"end\" font-size=\"10\">"
       << attr(y_lo_) << "</text>\n";
    os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 10 << "\" text-anchor=\"end\" font-size=\"10\">"
       << attr(y_hi_) << "</text>\n";
    if (!title_.empty())
        os << "<text x=\"" << kW / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">" << escape(title_)
           << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace gravre::cli
