#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace gravre::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "gravre/1";

/// Full round-trip decimal (17 significant digits).
std::string fmt_num(double v);

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& values);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::string> lines_;
};

/// Minimal SVG plot: data coordinates mapped into a fixed canvas with axes.
class Svg {
public:
    Svg(double x_lo, double x_hi, double y_lo, double y_hi, std::string x_label, std::string y_label);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width = 1.5,
                  bool dashed = false);
    void points(const std::vector<std::pair<double, double>>& pts, const std::string& color, double radius = 2.0);
    void vline(double x, const std::string& color, bool dashed = true, const std::string& label = "");
    void hline(double y, const std::string& color, bool dashed = true, const std::string& label = "");
    void rect(double x0, double y0, double x1, double y1, const std::string& fill, double opacity = 1.0);
    void hatch(double x0, double y0, double x1, double y1, const std::string& color);
    void title(const std::string& t);
    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;
    bool in_range(double x, double y) const;

    double x_lo_, x_hi_, y_lo_, y_hi_;
    std::string x_label_, y_label_, title_;
    std::vector<std::string> items_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace gravre::cli
