#include "rpm/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

#include "rpm/csv_io.hpp"

namespace rpm {
namespace {

// Axis values sort numerically when every label parses as a number, lexically otherwise.
struct AxisLess {
  bool numeric = true;
  bool operator()(const std::string& a, const std::string& b) const {
    if (numeric) return parse_double(a) < parse_double(b);
    return a < b;
  }
};

bool all_numeric(const std::vector<std::string>& labels) {
  for (const auto& l : labels) {
    try {
      parse_double(l);
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  return true;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw std::invalid_argument("summary CSV has no column named '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

// white -> dark green
std::string color_for(double rate) {
  const double t = std::clamp(rate, 0.0, 1.0);
  const auto channel = [&](double lo, double hi) {
    return static_cast<int>(std::lround(lo + (hi - lo) * t));
  };
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(247, 0), channel(252, 109),
                channel(245, 44));
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

HeatmapInfo emit_heatmap(const std::filesystem::path& summary_csv, const std::string& x_field,
                         const std::string& y_field, const std::filesystem::path& svg_out) {
  std::ifstream in(summary_csv);
  if (!in) throw std::runtime_error("cannot open " + summary_csv.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(summary_csv.string() + ": empty file");
  const auto header = split_fields(line);
  const std::size_t xi = column_of(header, x_field);
  const std::size_t yi = column_of(header, y_field);
  const std::size_t ri = column_of(header, "success_rate");
  const auto ti = std::find(header.begin(), header.end(), "trials");
  const bool weighted = ti != header.end();

  struct Acc {
    double weight = 0.0;
    double total = 0.0;
  };
  std::vector<std::string> xs, ys;
  std::vector<std::tuple<std::string, std::string, double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != header.size()) throw std::runtime_error("summary CSV: ragged row");
    const double rate = parse_double(f[ri]);
    const double w =
        weighted ? parse_double(f[static_cast<std::size_t>(ti - header.begin())]) : 1.0;
    rows.emplace_back(f[xi], f[yi], rate, w);
    xs.push_back(f[xi]);
    ys.push_back(f[yi]);
  }
  if (rows.empty()) throw std::runtime_error("summary CSV has no data rows");

  const AxisLess xless{all_numeric(xs)};
  const AxisLess yless{all_numeric(ys)};
  std::sort(xs.begin(), xs.end(), xless);
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [&](const auto& a, const auto& b) { return !xless(a, b) && !xless(b, a); }),
           xs.end());
  std::sort(ys.begin(), ys.end(), yless);
  ys.erase(std::unique(ys.begin(), ys.end(),
                       [&](const auto& a, const auto& b) { return !yless(a, b) && !yless(b, a); }),
           ys.end());

  auto index_of = [](const std::vector<std::string>& axis, const std::string& v, const AxisLess& less) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), v, less);
    return static_cast<std::size_t>(it - axis.begin());
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> grid;
  for (const auto& [x, y, rate, w] : rows) {
    auto& acc = grid[{index_of(xs, x, xless), index_of(ys, y, yless)}];
    acc.weight += w;
    acc.total += rate * w;
  }

  const int cell = 48, left = 90, top = 40, bottom = 70, right = 30;
  const int width = left + cell * static_cast<int>(xs.size()) + right;
  const int height = top + cell * static_cast<int>(ys.size()) + bottom;

  std::ofstream out(svg_out);
  if (!out) throw std::runtime_error("cannot write " + svg_out.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<title>success rate: " << escape(y_field) << " vs " << escape(x_field) << "</title>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << "success rate</text>\n";

  for (const auto& [key, acc] : grid) {
    const auto [cx, cy] = key;
    const double rate = acc.weight > 0 ? acc.total / acc.weight : 0.0;
    // first y value at the bottom
    const int px = left + cell * static_cast<int>(cx);
    const int py = top + cell * (static_cast<int>(ys.size()) - 1 - static_cast<int>(cy));
    out << "<rect class=\"cell\" x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell
        << "\" height=\"" << cell << "\" fill=\"" << color_for(rate)
        << "\" stroke=\"#999\"><title>" << escape(x_field) << "=" << escape(xs[cx]) << ", "
        << escape(y_field) << "=" << escape(ys[cy]) << ": " << format_double(rate)
        << "</title></rect>\n";
    char label[32];
    std::snprintf(label, sizeof label, "%.2f", rate);
    out << "<text x=\"" << px + cell / 2 << "\" y=\"" << py + cell / 2 + 4
        << "\" text-anchor=\"middle\" fill=\"" << (rate > 0.6 ? "#fff" : "#000") << "\">"
        << label << "</text>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << "<text x=\"" << left + cell * static_cast<int>(i) + cell / 2 << "\" y=\""
        << top + cell * static_cast<int>(ys.size()) + 16 << "\" text-anchor=\"middle\">"
        << escape(xs[i]) << "</text>\n";
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    out << "<text x=\"" << left - 6 << "\" y=\""
        << top + cell * (static_cast<int>(ys.size()) - 1 - static_cast<int>(j)) + cell / 2 + 4
        << "\" text-anchor=\"end\">" << escape(ys[j]) << "</text>\n";
  }
  out << "<text class=\"axis-label\" x=\"" << left + cell * static_cast<int>(xs.size()) / 2
      << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">" << escape(x_field)
      << "</text>\n";
  out << "<text class=\"axis-label\" x=\"20\" y=\"" << top + cell * static_cast<int>(ys.size()) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + cell * static_cast<int>(ys.size()) / 2 << ")\">" << escape(y_field) << "</text>\n";
  out << "</svg>\n";

  return {xs.size(), ys.size(), grid.size()};
}

}  // namespace rpm
