#include "drsm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drsm/harness.hpp"

namespace drsm {

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (epoch, value > 0)
};

double column_value(const RunRecord& r, int col) {
  switch (col) {
    case 1: return r.beta;
    case 2: return r.consensus_error;
    case 3: return r.objective_at_ima;
    case 4: return r.recovery_error;
    case 5: return r.prox_gap;
    case 6: return r.wall_ms;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

int column_index(const std::string& column) {
  const std::vector<std::string> names = {"epoch",
                                          "beta_k",
                                          "consensus_error",
                                          "objective_at_ima",
                                          "recovery_error",
                                          "prox_gap",
                                          "wall_ms"};
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i] == column) return static_cast<int>(i);
  }
  throw ConfigError("plot: unknown column '" + column + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void emit_plot(const std::vector<std::filesystem::path>& csvs,
               const std::string& column, const std::filesystem::path& out) {
  const int col = column_index(column);
  std::vector<Series> series;
  double xmin = 0.0, xmax = 1.0, lymin = 0.0, lymax = 1.0;
  bool have_range = false;
  for (const auto& path : csvs) {
    const auto records = read_csv(path);
    if (records.empty()) {
      throw ConfigError("plot: " + path.string() + " has no data rows");
    }
    Series s;
    s.label = path.stem().string();
    for (const auto& r : records) {
      const double v = column_value(r, col);
      if (std::isnan(v) || v <= 0.0) continue;  // log axis
      const double e = static_cast<double>(r.epoch);
      const double lv = std::log10(v);
      if (!have_range) {
        xmin = xmax = e;
        lymin = lymax = lv;
        have_range = true;
      } else {
        xmin = std::min(xmin, e);
        xmax = std::max(xmax, e);
        lymin = std::min(lymin, lv);
        lymax = std::max(lymax, lv);
      }
      s.points.emplace_back(e, lv);
    }
    series.push_back(std::move(s));
  }
  if (!have_range) throw ConfigError("plot: no positive values for column " + column);
  if (xmax == xmin) xmax = xmin + 1.0;
  if (lymax == lymin) lymax = lymin + 1.0;

  const double width = 840.0, height = 560.0;
  const double ml = 80.0, mr = 20.0, mt = 40.0, mb = 50.0;
  const auto sx = [&](double e) {
    return ml + (e - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  const auto sy = [&](double lv) {
    return height - mb - (lv - lymin) / (lymax - lymin) * (height - mt - mb);
  };

  std::ofstream os(out);
  if (!os) throw ConfigError("plot: cannot open " + out.string() + " for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
     << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << column << "</text>\n";

  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
     << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << height - mb << "\" stroke=\"black\"/>\n";

  // x ticks: five evenly spaced epochs
  for (int i = 0; i <= 4; ++i) {
    const double e = xmin + (xmax - xmin) * i / 4.0;
    os << "<line x1=\"" << sx(e) << "\" y1=\"" << height - mb << "\" x2=\"" << sx(e)
       << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << sx(e) << "\" y=\"" << height - mb + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << fmt(std::round(e)) << "</text>\n";
  }
  // y ticks: decades
  const int dlo = static_cast<int>(std::ceil(lymin));
  const int dhi = static_cast<int>(std::floor(lymax));
  for (int d = dlo; d <= dhi; ++d) {
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(d) << "\" x2=\"" << ml
       << "\" y2=\"" << sy(d) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << ml - 8 << "\" y=\"" << sy(d) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
       << d << "</text>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 8]
       << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [e, lv] : s.points) os << sx(e) << "," << sy(lv) << " ";
    os << "\"/>\n";
  }

  // legend, top right
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = mt + 16.0 * static_cast<double>(i);
    os << "<rect x=\"" << width - mr - 180 << "\" y=\"" << y - 9
       << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[i % 8] << "\"/>\n"
       << "<text x=\"" << width - mr - 162 << "\" y=\"" << y + 2
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].label
       << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw ConfigError("plot: write failed for " + out.string());
}

}  // namespace drsm
