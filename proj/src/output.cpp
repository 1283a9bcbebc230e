#include "viscotherm/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace viscotherm {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) {
    // from_chars does not read "inf"/"nan" spellings produced elsewhere; fall back.
    try {
      std::size_t used = 0;
      x = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + text + "'");
    }
  }
  return x;
}

void write_states_csv(const std::filesystem::path& path, const Trajectory& traj, int stride) {
  if (stride < 1) throw std::invalid_argument("states stride must be >= 1");
  std::ofstream out = open_out(path);
  out << "t,x,v,u,theta\n";
  const auto& x = traj.grid.x();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != traj.states.size()) continue;
    const State& s = traj.states[k];
    for (std::size_t i = 0; i < x.size(); ++i) write_row(out, {s.t, x[i], s.v[i], s.u[i], s.theta[i]});
  }
}

std::vector<State> read_states_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t ct = table.column("t"), cv = table.column("v"), cu = table.column("u"),
                    cth = table.column("theta");
  std::vector<State> out;
  for (const auto& row : table.rows) {
    const double t = parse_double(row.at(ct));
    if (out.empty() || out.back().t != t) {
      out.emplace_back();
      out.back().t = t;
    }
    out.back().v.push_back(parse_double(row.at(cv)));
    out.back().u.push_back(parse_double(row.at(cu)));
    out.back().theta.push_back(parse_double(row.at(cth)));
  }
  return out;
}

void write_energy_csv(const std::filesystem::path& path, const EnergyReport& r) {
  std::ofstream out = open_out(path);
  out << "t,kinetic,elastic,thermal,total,cum_diss_vxx,cum_diss_uxx,balance_residual\n";
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    write_row(out, {r.t[k], r.kinetic[k], r.elastic[k], r.thermal[k], r.total[k],
                    r.cum_diss_vxx[k], r.cum_diss_uxx[k], r.balance_residual[k]});
  }
}

void write_estimates_csv(const std::filesystem::path& path,
                         const std::vector<EstimateReport>& reports) {
  std::ofstream out = open_out(path);
  out << "p,q,r,I5,I6,I7,I8\n";
  for (const auto& e : reports) write_row(out, {e.p, e.q, e.r, e.i5, e.i6, e.i7, e.i8});
}

void write_weak_residuals_csv(const std::filesystem::path& path,
                              const WeakResidualReport& report) {
  std::ofstream out = open_out(path);
  out << "test,has_momentum,wu,wu_limit,wt\n";
  for (const auto& row : report.rows) {
    out << row.id << ',' << (row.has_momentum ? 1 : 0) << ',' << format_double(row.wu) << ','
        << format_double(row.wu_limit) << ',' << format_double(row.wt) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  std::ofstream out = open_out(path);
  out << "eps_a,eps_b,d_v,d_u,d_theta,d_flux\n";
  for (std::size_t j = 0; j < sweep.d_v.size(); ++j) {
    write_row(out, {sweep.epsilons[j], sweep.epsilons[j + 1], sweep.d_v[j], sweep.d_u[j],
                    sweep.d_theta[j], sweep.d_flux[j]});
  }
}

void write_refinement_csv(const std::filesystem::path& path, const RefinementTable& table) {
  std::ofstream out = open_out(path);
  out << "n_nodes,dx,dt,err_v,err_u,err_theta,err_max,spatial_order,temporal_order\n";
  for (std::size_t l = 0; l < table.levels.size(); ++l) {
    const RefinementLevel& lv = table.levels[l];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double so = l == 0 ? nan : table.spatial_order[l - 1];
    const double to = l == 0 ? nan : table.temporal_order[l - 1];
    write_row(out, {static_cast<double>(lv.n_nodes), lv.dx, lv.dt, lv.err_v, lv.err_u,
                    lv.err_theta, lv.err_max, so, to});
  }
}

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::vector<SvgSeries>& series,
                         bool log_y) {
  constexpr double W = 640, H = 400, ml = 70, mr = 150, mt = 40, mb = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (ty(y) - y0) / (y1 - y0) * (H - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(title)
      << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
      << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double yy = H - mb - (fy - y0) / (y1 - y0) * (H - mt - mb);
    std::ostringstream lx, ly;
    lx.precision(3);
    ly.precision(3);
    lx << fx;
    if (log_y) ly << "1e" << fy; else ly << fy;
    out << "<text x=\"" << px(fx) << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
        << lx.str() << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << yy + 4 << "\" text-anchor=\"end\">" << ly.str()
        << "</text>\n";
  }
  out << "<text x=\"" << ml + (W - ml - mr) / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  for (std::size_t j = 0; j < series.size(); ++j) {
    const auto& s = series[j];
    const char* color = colors[j % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0)) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    const double ly = mt + 16 * (static_cast<double>(j) + 1);
    out << "<line x1=\"" << W - mr + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - mr + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - mr + 35 << "\" y=\"" << ly << "\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::invalid_argument("csv: no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path.string());
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.rows.push_back(split(line));
    if (table.rows.back().size() != table.header.size()) {
      throw std::runtime_error("csv: ragged row in " + path.string());
    }
  }
  return table;
}

}  // namespace viscotherm
