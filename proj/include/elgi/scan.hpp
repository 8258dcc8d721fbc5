#ifndef ELGI_SCAN_HPP
#define ELGI_SCAN_HPP

// Grid drivers that turn the library into data tables.
//
// A ScanResult is a list of columns plus rows of cells; a cell is a number,
// a string, or missing (NaN).  CSV writes metadata as leading "# key: value"
// lines, then a header and one line per row; JSON writes {meta, columns, rows}.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "elgi/parallel.hpp"
#include "elgi/semiclassics.hpp"
#include "elgi/shannon_cone.hpp"
#include "elgi/temporal.hpp"
#include "elgi/wigner.hpp"

#ifndef ELGI_VERSION_STRING
#define ELGI_VERSION_STRING "0.1.0"
#endif

namespace elgi {

inline constexpr const char* version_string = ELGI_VERSION_STRING;

struct ExclusionWindow {
  double center = 0.0;
  double half_width = 0.0;
};

struct GridSpec {
  std::string parameter = "beta";
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  std::vector<ExclusionWindow> windows;

  void validate() const {
    if (!(start < stop)) throw std::domain_error("GridSpec: start must be below stop");
    if (points < 2) throw std::domain_error("GridSpec: at least 2 points");
    for (const auto& w : windows) {
      if (!(w.half_width >= 0.0)) throw std::domain_error("GridSpec: negative window half-width");
      if (w.center < start || w.center > stop) throw std::domain_error("GridSpec: window centre outside the grid");
    }
  }

  /// Inclusive, evenly spaced.
  double value(int i) const { return i == points - 1 ? stop : start + (stop - start) * i / (points - 1); }

  bool excluded(double x) const {
    return std::any_of(windows.begin(), windows.end(),
                       [&](const ExclusionWindow& w) { return std::abs(x - w.center) < w.half_width; });
  }
};

using Cell = std::variant<double, std::string>;

inline constexpr double missing = std::numeric_limits<double>::quiet_NaN();

struct ScanResult {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("ScanResult: no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
  }

  double number(std::size_t row, const std::string& name) const {
    const auto& c = rows.at(row).at(column(name));
    return std::holds_alternative<double>(c) ? std::get<double>(c) : missing;
  }

  std::vector<double> numbers(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, name));
    return out;
  }
};

namespace detail {

inline std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Fills the standard metadata keys.  The timestamp comes only from
/// SOURCE_DATE_EPOCH so that output is reproducible.
inline void stamp(ScanResult& r, const std::string& scan) {
  r.meta["scan"] = scan;
  r.meta["version"] = version_string;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) r.meta["timestamp"] = epoch;
  else r.meta["timestamp"] = nullptr;
}

inline nlohmann::ordered_json grid_json(const GridSpec& g) {
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (const auto& x : g.windows) w.push_back({{"center", x.center}, {"half_width", x.half_width}});
  return {{"parameter", g.parameter}, {"start", g.start}, {"stop", g.stop}, {"points", g.points}, {"windows", w}};
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ScanResult& r) {
  for (const auto& [key, value] : r.meta.items()) os << "# " << key << ": " << value.dump() << "\n";
  for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << detail::csv_field(r.columns[c]);
  os << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (const double* x = std::get_if<double>(&row[c])) os << detail::format_number(*x);
      else os << detail::csv_field(std::get<std::string>(row[c]));
    }
    os << "\n";
  }
}

inline nlohmann::ordered_json to_json(const ScanResult& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (const double* x = std::get_if<double>(&cell)) {
        if (std::isfinite(*x)) out.push_back(*x);
        else out.push_back(nullptr);
      } else {
        out.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(out));
  }
  return {{"meta", r.meta}, {"columns", r.columns}, {"rows", std::move(rows)}};
}

inline void write_json(std::ostream& os, const ScanResult& r) { os << to_json(r).dump(1) << "\n"; }

inline ScanResult from_json(const nlohmann::ordered_json& j) {
  ScanResult r;
  r.meta = j.at("meta");
  r.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    std::vector<Cell> cells;
    for (const auto& cell : row) {
      if (cell.is_null()) cells.emplace_back(missing);
      else if (cell.is_string()) cells.emplace_back(cell.get<std::string>());
      else cells.emplace_back(cell.get<double>());
    }
    r.rows.push_back(std::move(cells));
  }
  return r;
}

/// Half-width around multiples of pi inside which large-j asymptotics are not trusted.
inline double breakdown_half_width(Spin spin) { return std::max(0.1, 5.0 * std::pow(spin.big_j(), -2.0 / 3.0)); }

inline bool near_multiple_of_pi(double angle, double half_width) {
  const double k = std::round(angle / std::numbers::pi);
  return std::abs(angle - k * std::numbers::pi) < half_width;
}

// ---------------------------------------------------------------------------
// Violation landscape for equally spaced schedules

struct Fig2Options {
  Spin spin{4};
  int n = 3;
  GridSpec grid{"beta_step", 0.0, std::numbers::pi, 181, {}};
  std::vector<double> state;  // diagonal weights; empty means maximally mixed
  bool members = true;        // emit every inequality value, not only minima
  RedundancyRule rule = RedundancyRule::OrderGraded;
  int threads = 1;
};

inline ScanResult scan_fig2(const Fig2Options& opt) {
  opt.grid.validate();
  if (opt.n < 3 || opt.n > 4) throw std::domain_error("scan_fig2: n must be 3 or 4");
  const bool mixed = opt.state.empty();
  const InitialState state = mixed ? InitialState::maximally_mixed(opt.spin) : InitialState(opt.spin, opt.state);

  std::vector<InequalityFamily> families;
  for (int k = 2; k <= opt.n; ++k) families.push_back(elgi_family(opt.n, k, opt.rule));
  const auto chain = chain_family(opt.n);

  ScanResult r;
  detail::stamp(r, "fig2");
  r.meta["j"] = opt.spin.to_string();
  r.meta["n"] = opt.n;
  r.meta["schedule"] = "equally spaced, angle i*beta_step";
  r.meta["state"] = mixed ? nlohmann::ordered_json("mixed") : nlohmann::ordered_json(opt.state);
  r.meta["redundancy"] = opt.rule == RedundancyRule::Global ? "global" : "order-graded";
  r.meta["grid"] = detail::grid_json(opt.grid);

  r.columns.push_back(opt.grid.parameter);
  nlohmann::ordered_json legend = nlohmann::ordered_json::object();
  for (const auto& f : families) {
    if (!opt.members) break;
    for (std::size_t m = 0; m < f.members.size(); ++m) {
      char name[32];
      std::snprintf(name, sizeof name, "o%d_%03zu", f.order, m + 1);
      r.columns.push_back(name);
      legend[name] = f.members[m].label() + " : " + f.members[m].expression();
    }
  }
  for (const auto& f : families) r.columns.push_back("min_order" + std::to_string(f.order));
  r.columns.push_back("min_chain");
  if (opt.members) r.meta["members"] = legend;

  std::vector<int> kept;
  std::vector<double> dropped;
  for (int i = 0; i < opt.grid.points; ++i) {
    if (opt.grid.excluded(opt.grid.value(i))) dropped.push_back(opt.grid.value(i));
    else kept.push_back(i);
  }
  r.meta["excluded"] = dropped;

  const auto subsets = all_subsets(opt.n);
  r.rows.resize(kept.size());
  parallel_for(kept.size(), opt.threads, [&](std::size_t slot) {
    const double step = opt.grid.value(kept[slot]);
    const auto sched = Schedule::equally_spaced(opt.n, step);
    const auto h = mixed ? mixed_entropy_vector(opt.spin, sched, subsets) : entropy_vector(state, sched, subsets);
    std::vector<Cell> row{step};
    std::vector<double> minima;
    for (const auto& f : families) {
      double lo = HUGE_VAL;
      for (const auto& m : f.members) {
        const double v = evaluate(m, h).value;
        lo = std::min(lo, v);
        if (opt.members) row.emplace_back(v);
      }
      minima.push_back(lo);
    }
    for (double v : minima) row.emplace_back(v);
    double lo = HUGE_VAL;
    for (const auto& m : chain.members) lo = std::min(lo, evaluate(m, h).value);
    row.emplace_back(lo);
    r.rows[slot] = std::move(row);
  });
  return r;
}

// ---------------------------------------------------------------------------
// D_{2,3} against its large-j limit for angles (0, 2 beta, 3 beta)

/// Windows around beta where beta or 3 beta is a multiple of pi.
inline std::vector<ExclusionWindow> fig3_windows(Spin spin) {
  const double w = breakdown_half_width(spin);
  const double pi = std::numbers::pi;
  return {{0.0, w}, {pi / 3, w}, {2 * pi / 3, w}, {pi, w}};
}

inline GridSpec fig3_grid(Spin spin, int points = 512) {
  return {"beta", 0.0, std::numbers::pi, points, fig3_windows(spin)};
}

inline ScanResult scan_fig3(Spin spin, const GridSpec& grid, int threads = 1) {
  grid.validate();
  ScanResult r;
  detail::stamp(r, "fig3");
  r.meta["j"] = spin.to_string();
  r.meta["schedule"] = "angles (0, 2*beta, 3*beta)";
  r.meta["target"] = "D_2,3, maximally mixed";
  r.meta["grid"] = detail::grid_json(grid);
  r.columns = {"beta", "D23_exact", "asymptote", "asymptote_negated", "deviation"};

  std::vector<int> kept;
  std::vector<double> dropped;
  for (int i = 0; i < grid.points; ++i) {
    if (grid.excluded(grid.value(i))) dropped.push_back(grid.value(i));
    else kept.push_back(i);
  }
  r.meta["excluded"] = dropped;

  r.rows.resize(kept.size());
  parallel_for(kept.size(), threads, [&](std::size_t slot) {
    const double beta = grid.value(kept[slot]);
    const double exact = mixed_state_closed_form(spin, Schedule({0.0, 2 * beta, 3 * beta}, true), DTarget::pair(1, 2));
    const double s1 = std::abs(std::sin(beta)), s3 = std::abs(std::sin(3 * beta));
    const double asym = (s1 < 1e-12 || s3 < 1e-12) ? missing : std::log(s3 / s1);
    r.rows[slot] = {beta, exact, asym, -asym, std::abs(exact - asym)};
  });
  return r;
}

inline double max_deviation(const ScanResult& r, const std::string& column = "deviation") {
  double worst = 0.0;
  for (double v : r.numbers(column))
    if (!std::isnan(v)) worst = std::max(worst, v);
  return worst;
}

// ---------------------------------------------------------------------------
// Region maps

inline std::vector<double> fig4_betas() {
  const double pi = std::numbers::pi;
  return {pi / 12, pi / 6, pi / 3, pi / 2};
}

inline ScanResult scan_fig4(Spin spin, const std::vector<double>& betas, int threads = 1) {
  ScanResult r;
  detail::stamp(r, "fig4");
  r.meta["j"] = spin.to_string();
  r.meta["betas"] = betas;
  r.meta["boundary_width"] = default_boundary_width(spin);
  r.columns = {"beta", "m", "n", "d2", "R", "region"};

  const int dim = spin.dim();
  std::vector<std::vector<std::vector<Cell>>> blocks(betas.size());
  std::vector<double> fractions(betas.size());
  parallel_for(betas.size(), threads, [&](std::size_t b) {
    const double beta = betas[b];
    const auto d = d_matrix(spin, beta);
    auto& block = blocks[b];
    block.reserve(static_cast<std::size_t>(dim) * dim);
    int allowed = 0;
    for (int col = 0; col < dim; ++col)
      for (int row = 0; row < dim; ++row) {
        const auto m = MagneticIndex::from_row(spin, col);
        const auto n = MagneticIndex::from_row(spin, row);
        const double rr = discriminant(spin, m, n, beta);
        allowed += rr > 0.0;
        const double e = d(row, col);
        block.push_back({beta, m.m(), n.m(), e * e, rr, classify_region(spin, m, n, beta).to_string()});
      }
    fractions[b] = static_cast<double>(allowed) / (static_cast<double>(dim) * dim);
  });
  nlohmann::ordered_json frac = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < betas.size(); ++b) {
    frac.push_back({{"beta", betas[b]},
                    {"allowed_fraction", fractions[b]},
                    {"ellipse_area_fraction", std::numbers::pi * std::abs(std::sin(betas[b])) / 4}});
    for (auto& row : blocks[b]) r.rows.push_back(std::move(row));
  }
  r.meta["fractions"] = frac;
  return r;
}

// ---------------------------------------------------------------------------
// Growth of D_{2,3} when beta_{1,3} is a multiple of pi

inline ScanResult scan_singularity(const std::vector<Spin>& spins, double beta23, int threads = 1) {
  if (near_multiple_of_pi(beta23, 1e-9)) throw std::domain_error("scan_singularity: beta23 must avoid multiples of pi");
  const double pi = std::numbers::pi;
  ScanResult r;
  detail::stamp(r, "singularity");
  r.meta["beta23"] = beta23;
  r.meta["schedule"] = "angles (0, beta13 - beta23, beta13), beta13 = pi + delta";
  nlohmann::ordered_json js = nlohmann::ordered_json::array();
  for (Spin s : spins) js.push_back(s.to_string());
  r.meta["j"] = js;
  r.columns = {"j", "delta_kind", "delta", "beta13", "D23", "log_dim", "ratio"};

  struct Job {
    Spin spin;
    std::string kind;
    double delta;
  };
  std::vector<Job> jobs;
  for (Spin s : spins) {
    const double big_j = s.big_j();
    jobs.push_back({s, "0", 0.0});
    for (auto [kind, d] : {std::pair<const char*, double>{"1/J", 1.0 / big_j},
                           {"J^-2/3", std::pow(big_j, -2.0 / 3.0)},
                           {"0.1", 0.1}}) {
      jobs.push_back({s, std::string("-") + kind, -d});
      jobs.push_back({s, std::string("+") + kind, d});
    }
  }
  r.rows.resize(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto& job = jobs[i];
    const double beta13 = pi + job.delta;
    // angles (0, beta13 - beta23, beta13); the last pair is a boundary pair of n = 3
    const double d23 = wigner_entropy(job.spin, beta13) - wigner_entropy(job.spin, beta23);
    const double log_dim = std::log(static_cast<double>(job.spin.dim()));
    r.rows[i] = {job.spin.j(), job.kind, job.delta, beta13, d23, log_dim, d23 / log_dim};
  });
  return r;
}

// ---------------------------------------------------------------------------
// WKB and entropy-asymptote errors along a beta grid

struct WkbErrorOptions {
  Spin spin{400};
  GridSpec grid{"beta", 0.05, std::numbers::pi - 0.05, 32, {}};
  int stride = 4;  // sample every stride-th m and n
  int threads = 1;
};

inline ScanResult scan_wkb_error(const WkbErrorOptions& opt) {
  opt.grid.validate();
  if (opt.stride < 1) throw std::domain_error("scan_wkb_error: stride must be positive");
  const Spin spin = opt.spin;
  const double big_j = spin.big_j();
  const double window = breakdown_half_width(spin);
  const double eps = default_boundary_width(spin);

  ScanResult r;
  detail::stamp(r, "wkb-error");
  r.meta["j"] = spin.to_string();
  r.meta["grid"] = detail::grid_json(opt.grid);
  r.meta["stride"] = opt.stride;
  r.meta["breakdown_half_width"] = window;
  r.columns = {"beta",         "in_window",  "allowed_points", "wkb_envelope_error", "forbidden_points",
               "decay_margin", "H_exact",    "H_asymptote",    "entropy_deviation"};

  std::vector<int> kept;
  std::vector<double> dropped;
  for (int i = 0; i < opt.grid.points; ++i) {
    if (opt.grid.excluded(opt.grid.value(i))) dropped.push_back(opt.grid.value(i));
    else kept.push_back(i);
  }
  r.meta["excluded"] = dropped;

  r.rows.resize(kept.size());
  parallel_for(kept.size(), opt.threads, [&](std::size_t slot) {
    const double beta = opt.grid.value(kept[slot]);
    const bool in_window = near_multiple_of_pi(beta, window);
    const auto d = d_matrix(spin, beta);
    const double h = wigner_entropy(d);

    double env_err = missing, margin = missing;
    int n_allowed = 0, n_forbidden = 0;
    const bool wkb_ok = beta > 0.0 && beta < std::numbers::pi;
    for (int col = 0; wkb_ok && col < spin.dim(); col += opt.stride)
      for (int row = 0; row < spin.dim(); row += opt.stride) {
        const auto m = MagneticIndex::from_row(spin, col);
        const auto n = MagneticIndex::from_row(spin, row);
        const auto ri = ReducedIndices::of(spin, m, n);
        const double rr = discriminant(ri.mu, ri.nu, beta);
        const double exact = d(row, col);
        const double dist = radial_distance(ri.mu, ri.nu, beta);
        if (dist < -eps) {
          const auto w = d_wkb(spin, m, n, beta);
          if (std::abs(w.zeta) <= 2.0 || !w.reliable) continue;
          const double err = std::abs(w.value - exact) / std::sqrt(2.0 * allowed_envelope(big_j, rr));
          env_err = std::isnan(env_err) ? err : std::max(env_err, err);
          ++n_allowed;
        } else if (dist > 5.0 * eps && exact != 0.0) {
          const auto tp = turning_points(ri.mu, ri.nu);
          const Branch br = beta < tp.beta_plus ? Branch::Plus : Branch::Minus;
          const double s = action(ri.mu, ri.nu, beta, br);
          const double mg = 2.0 * std::log(std::abs(exact)) - log_forbidden_bound(big_j, s, rr);
          margin = std::isnan(margin) ? mg : std::max(margin, mg);
          ++n_forbidden;
        }
      }
    const double asym = in_window ? missing : entropy_asymptotic(spin, beta);
    r.rows[slot] = {beta,   in_window ? 1.0 : 0.0, static_cast<double>(n_allowed), env_err, static_cast<double>(n_forbidden),
                    margin, h,                     asym,                           std::abs(h - asym)};
  });
  return r;
}

}  // namespace elgi

#endif  // ELGI_SCAN_HPP
