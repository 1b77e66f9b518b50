#include "airgap/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace airgap::report {

namespace {

std::string num(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string svg_open(double w, double h, const std::string& title) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w, 0) << "\" height=\"" << num(h, 0)
    << "\" viewBox=\"0 0 " << num(w, 0) << ' ' << num(h, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<title>" << esc(title) << "</title>\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << num(w / 2, 1) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
    << "</text>\n";
  return o.str();
}

// Piecewise-linear viridis approximation, t in [0, 1].
std::string color_scale(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

std::string snr_csv(const SnrEstimate& s) {
  if (s.is_high()) return "high";
  if (s.is_no_response()) return "none";
  return csv_num(s.db());
}

struct Axis {
  double lo, hi, px0, px1;
  double map(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

std::string axes(const Axis& x, const Axis& y, const std::string& xlabel, const std::string& ylabel,
                 const std::vector<std::pair<double, std::string>>& xticks,
                 const std::vector<std::pair<double, std::string>>& yticks) {
  std::ostringstream o;
  o << "<g stroke=\"black\" fill=\"none\">"
    << "<line x1=\"" << num(x.px0) << "\" y1=\"" << num(y.px0) << "\" x2=\"" << num(x.px1) << "\" y2=\""
    << num(y.px0) << "\"/>"
    << "<line x1=\"" << num(x.px0) << "\" y1=\"" << num(y.px0) << "\" x2=\"" << num(x.px0) << "\" y2=\""
    << num(y.px1) << "\"/></g>\n";
  for (const auto& [v, label] : xticks)
    o << "<text x=\"" << num(x.map(v)) << "\" y=\"" << num(y.px0 + 14) << "\" text-anchor=\"middle\">" << esc(label)
      << "</text>\n";
  for (const auto& [v, label] : yticks)
    o << "<text x=\"" << num(x.px0 - 4) << "\" y=\"" << num(y.map(v) + 4) << "\" text-anchor=\"end\">" << esc(label)
      << "</text>\n";
  o << "<text x=\"" << num((x.px0 + x.px1) / 2) << "\" y=\"" << num(y.px0 + 30) << "\" text-anchor=\"middle\">"
    << esc(xlabel) << "</text>\n"
    << "<text transform=\"translate(" << num(x.px0 - 42) << ' ' << num((y.px0 + y.px1) / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << esc(ylabel) << "</text>\n";
  return o.str();
}

}  // namespace

Figure heatmap(std::span<const SensitivityRecord> records, double threshold_db) {
  const auto cells = spectra(records);
  std::vector<int> paths;
  std::vector<PathConfig> configs;
  for (const auto& c : cells) {
    if (std::find(paths.begin(), paths.end(), c.path) == paths.end()) paths.push_back(c.path);
    if (std::find(configs.begin(), configs.end(), c.config) == configs.end()) configs.push_back(c.config);
  }
  std::sort(paths.begin(), paths.end());

  constexpr double cw = 22, ch = 9, left = 60, top = 40, db_max = 40.0;
  const double w = left + cw * static_cast<double>(configs.size()) + 140;
  const double h = top + ch * static_cast<double>(paths.size()) + 120;

  std::ostringstream svg, csv;
  svg << svg_open(w, h, "Peak SNR per reception path and configuration");
  svg << "<defs><pattern id=\"high\" width=\"4\" height=\"4\" patternUnits=\"userSpaceOnUse\">"
      << "<rect width=\"4\" height=\"4\" fill=\"" << color_scale(1.0) << "\"/>"
      << "<path d=\"M0,4 L4,0\" stroke=\"black\" stroke-width=\"1\"/></pattern></defs>\n";
  csv << "path,config,peak_freq_hz,peak_snr_db,sensitive\n";

  std::map<std::pair<int, int>, const SnrSpectrum*> lookup;
  for (const auto& c : cells) lookup[{c.path, c.config.index()}] = &c;

  for (std::size_t r = 0; r < paths.size(); ++r) {
    const double y = top + ch * static_cast<double>(r);
    if (paths.size() <= 100 && (r % 5 == 0 || paths.size() <= 20))
      svg << "<text x=\"" << num(left - 4) << "\" y=\"" << num(y + ch - 1) << "\" text-anchor=\"end\" font-size=\"8\">"
          << paths[r] << "</text>\n";
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const auto it = lookup.find({paths[r], configs[k].index()});
      if (it == lookup.end()) continue;
      const auto [freq, snr] = peak_snr(*it->second);
      std::string fill = "#dddddd";
      if (snr.is_high())
        fill = "url(#high)";
      else if (snr.is_finite())
        fill = color_scale(snr.db() / db_max);
      svg << "<rect class=\"cell\" x=\"" << num(left + cw * static_cast<double>(k)) << "\" y=\"" << num(y)
          << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"" << fill << "\"><title>path "
          << paths[r] << ' ' << configs[k].to_string() << ": " << esc(snr.to_string()) << "</title></rect>\n";
      csv << paths[r] << ',' << configs[k].to_string() << ',' << csv_num(freq) << ',' << snr_csv(snr) << ','
          << (classify_sensitive(*it->second, threshold_db) ? 1 : 0) << '\n';
    }
  }
  const double by = top + ch * static_cast<double>(paths.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double x = left + cw * (static_cast<double>(k) + 0.5);
    svg << "<text transform=\"translate(" << num(x + 3) << ' ' << num(by + 6)
        << ") rotate(90)\" font-size=\"8\">" << esc(configs[k].to_string()) << "</text>\n";
  }
  const double lx = left + cw * static_cast<double>(configs.size()) + 20;
  for (int i = 0; i <= 8; ++i) {
    const double db = db_max * (8 - i) / 8.0;
    svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(top + 12.0 * i) << "\" width=\"14\" height=\"12\" fill=\""
        << color_scale(db / db_max) << "\"/><text x=\"" << num(lx + 18) << "\" y=\"" << num(top + 12.0 * i + 10)
        << "\">" << num(db, 0) << " dB</text>\n";
  }
  svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(top + 120) << "\" width=\"14\" height=\"12\" fill=\"url(#high)\"/>"
      << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(top + 130) << "\">high</text>\n"
      << "<rect x=\"" << num(lx) << "\" y=\"" << num(top + 136) << "\" width=\"14\" height=\"12\" fill=\"#dddddd\"/>"
      << "<text x=\"" << num(lx + 18) << "\" y=\"" << num(top + 146) << "\">no response</text>\n";
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

Figure spectrum(const SnrSpectrum& s, double threshold_db) {
  if (s.points.empty()) throw std::invalid_argument("empty spectrum");
  double lo_db = 0.0, hi_db = threshold_db + 5.0;
  for (const auto& [f, snr] : s.points)
    if (snr.is_finite()) {
      lo_db = std::min(lo_db, std::floor(snr.db() / 10.0) * 10.0);
      hi_db = std::max(hi_db, std::ceil(snr.db() / 10.0) * 10.0);
    }
  const double top_db = hi_db + 5.0;  // "high" points are drawn here
  const double f0 = s.points.front().first, f1 = std::max(s.points.back().first, f0 + 1.0);
  const Axis x{f0, f1, 70, 620}, y{lo_db, top_db, 340, 40};

  std::ostringstream svg, csv;
  svg << svg_open(660, 390, "SNR over frequency, path " + std::to_string(s.path) + " " + s.config.to_string());
  std::vector<std::pair<double, std::string>> xt, yt;
  for (int i = 0; i <= 4; ++i) {
    const double f = f0 + (f1 - f0) * i / 4.0;
    xt.emplace_back(f, num(f / 1e6, 0));
  }
  for (double d = lo_db; d <= hi_db + 1e-9; d += 10.0) yt.emplace_back(d, num(d, 0));
  yt.emplace_back(top_db, "high");
  svg << axes(x, y, "Frequency (MHz)", "SNR (dB)", xt, yt);
  svg << "<line x1=\"" << num(x.px0) << "\" x2=\"" << num(x.px1) << "\" y1=\"" << num(y.map(threshold_db))
      << "\" y2=\"" << num(y.map(threshold_db)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  csv << "freq_hz,snr_db\n";
  std::string path;
  for (const auto& [f, snr] : s.points) {
    csv << csv_num(f) << ',' << snr_csv(snr) << '\n';
    if (snr.is_no_response()) continue;
    const double v = snr.is_high() ? top_db : snr.db();
    path += (path.empty() ? "M" : " L") + num(x.map(f)) + "," + num(y.map(v));
    svg << "<circle cx=\"" << num(x.map(f)) << "\" cy=\"" << num(y.map(v)) << "\" r=\"2.5\" fill=\""
        << (snr.is_high() ? "crimson" : "steelblue") << "\"/>\n";
  }
  if (!path.empty()) svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"steelblue\"/>\n";
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

Figure ber_curve(std::span<const io::BerPoint> points) {
  if (points.empty()) throw std::invalid_argument("no BER points");
  double p0 = points.front().power_dbm, p1 = p0;
  for (const auto& p : points) {
    p0 = std::min(p0, p.power_dbm);
    p1 = std::max(p1, p.power_dbm);
  }
  if (p1 <= p0) p1 = p0 + 1.0;
  double floor_ber = 1e-5;
  for (const auto& p : points)
    if (p.total_bits > 0) floor_ber = std::min(floor_ber, 0.5 / static_cast<double>(p.total_bits));
  const double lo = std::floor(std::log10(floor_ber));
  const Axis x{p0, p1, 70, 620}, y{lo, 0.0, 340, 40};

  std::ostringstream svg, csv;
  svg << svg_open(660, 390, "Bit error rate against transmit power");
  std::vector<std::pair<double, std::string>> xt, yt;
  for (const auto& p : points) xt.emplace_back(p.power_dbm, num(p.power_dbm, 1));
  for (double e = lo; e <= 0.0; e += 1.0) yt.emplace_back(e, "1e" + num(e, 0));
  svg << axes(x, y, "Transmit power (dBm)", "BER", xt, yt);

  csv << "power_dbm,incident_dbm,ber,oracle_ber,error_count,total_bits\n";
  std::string measured, oracle;
  for (const auto& p : points) {
    csv << csv_num(p.power_dbm) << ',' << csv_num(p.incident_dbm) << ',' << csv_num(p.ber) << ','
        << csv_num(p.oracle_ber) << ',' << p.error_count << ',' << p.total_bits << '\n';
    const double m = std::log10(std::max(p.ber, floor_ber));
    const double o = std::log10(std::max(p.oracle_ber, floor_ber));
    measured += (measured.empty() ? "M" : " L") + num(x.map(p.power_dbm)) + "," + num(y.map(m));
    oracle += (oracle.empty() ? "M" : " L") + num(x.map(p.power_dbm)) + "," + num(y.map(o));
    svg << "<circle cx=\"" << num(x.map(p.power_dbm)) << "\" cy=\"" << num(y.map(m))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg << "<path d=\"" << measured << "\" fill=\"none\" stroke=\"steelblue\"/>\n"
      << "<path d=\"" << oracle << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n"
      << "<text x=\"480\" y=\"60\" fill=\"steelblue\">measured</text>"
      << "<text x=\"480\" y=\"76\" fill=\"gray\">Q(d/2&#963;)</text>\n</svg>\n";
  return {svg.str(), csv.str()};
}

Figure eye(std::span<const int> samples, std::size_t sps, double phase, std::size_t max_symbols) {
  if (sps < 2) throw std::invalid_argument("samples_per_symbol must be >= 2");
  const std::size_t n_sym = std::min(samples.size() / sps, max_symbols);
  if (n_sym < 3) throw std::invalid_argument("eye diagram needs at least three symbols");
  const auto shown = samples.first(n_sym * sps);
  const auto [mn, mx] = std::minmax_element(shown.begin(), shown.end());
  const double lo = *mn, hi = std::max<double>(*mx, *mn + 1);
  const Axis x{0.0, 2.0, 70, 620}, y{lo, hi, 340, 40};

  std::ostringstream svg, csv;
  svg << svg_open(660, 390, "Eye diagram, " + std::to_string(sps) + " samples per symbol");
  svg << axes(x, y, "Time (symbols)", "ADC code", {{0.0, "0"}, {1.0, "1"}, {2.0, "2"}},
              {{lo, num(lo, 0)}, {hi, num(hi, 0)}});
  csv << "trace_start,t_symbols,code\n";
  const auto start0 = static_cast<long>(std::lround((phase >= 0.5 ? phase - 1.0 : phase) * static_cast<double>(sps)));
  for (std::size_t k = 0; k + 1 < n_sym; ++k) {
    const long s = start0 + static_cast<long>(k * sps);
    if (s < 0 || static_cast<std::size_t>(s) + 2 * sps > samples.size()) continue;
    std::string path;
    for (std::size_t i = 0; i < 2 * sps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(sps);
      const int v = samples[static_cast<std::size_t>(s) + i];
      csv << s << ',' << csv_num(t) << ',' << v << '\n';
      path += (path.empty() ? "M" : " L") + num(x.map(t)) + "," + num(y.map(v));
    }
    svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.25\"/>\n";
  }
  svg << "</svg>\n";
  return {svg.str(), csv.str()};
}

}  // namespace airgap::report
