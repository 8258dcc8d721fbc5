// elgi: command-line front end.
//
// Exit codes: 0 success, 1 a numeric guarantee failed, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "elgi/elgi.hpp"

namespace {

using namespace elgi;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct numeric_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string format = "csv";
  std::string path;
  int threads = default_thread_count();
};

void add_output(CLI::App* cmd, Output& out, const std::vector<std::string>& formats) {
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("--output,-o", out.path, "Write to this file instead of stdout");
  cmd->add_option("--threads", out.threads, "Worker threads (default from ELGI_THREADS)")->check(CLI::PositiveNumber);
}

// Writes through a file or stdout.
void emit(const Output& out, const std::function<void(std::ostream&)>& body) {
  if (out.path.empty() || out.path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw usage_error("--output: cannot open '" + out.path + "'");
  body(f);
}

void emit_table(const Output& out, const ScanResult& r) {
  emit(out, [&](std::ostream& os) {
    if (out.format == "json") write_json(os, r);
    else write_csv(os, r);
  });
}

template <class F>
auto flag_guard(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw usage_error(flag + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw usage_error(flag + ": " + e.what());
  }
}

Spin spin_flag(const std::string& text, const std::string& flag = "--j") {
  return flag_guard(flag, [&] { return parse_spin(text); });
}

double angle_flag(const std::string& text, const std::string& flag) {
  return flag_guard(flag, [&] { return parse_angle(text); });
}

std::string m_label(MagneticIndex m) {
  const int t = m.twice_m();
  if (t % 2 == 0) return std::to_string(t / 2);
  return std::to_string(t) + "/2";
}

// ---------------------------------------------------------------------------
// dmat

struct DmatArgs {
  std::string j, beta;
  bool check = false;
  double gate = 1e-10;
  Output out;
};

int run_dmat(const DmatArgs& a) {
  const Spin spin = spin_flag(a.j);
  const double beta = angle_flag(a.beta, "--beta");
  const auto d = d_matrix(spin, beta);
  ScanResult r;
  r.meta["command"] = "dmat";
  r.meta["j"] = spin.to_string();
  r.meta["beta"] = beta;
  r.meta["layout"] = "row n (bra), column m (ket), both from +j down to -j";
  if (a.check) {
    const double defect = d.orthogonality_defect();
    r.meta["gate"] = a.gate;
    r.columns = {"j", "beta", "orthogonality_defect", "pass"};
    r.rows.push_back({spin.j(), beta, defect, std::string(defect <= a.gate ? "yes" : "no")});
    emit_table(a.out, r);
    if (!(defect <= a.gate)) throw numeric_failure("orthogonality defect " + std::to_string(defect) + " above gate");
    return 0;
  }
  r.columns.push_back("n\\m");
  for (int c = 0; c < d.dim(); ++c) r.columns.push_back(m_label(MagneticIndex::from_row(spin, c)));
  for (int row = 0; row < d.dim(); ++row) {
    std::vector<Cell> cells{m_label(MagneticIndex::from_row(spin, row))};
    for (int c = 0; c < d.dim(); ++c) cells.emplace_back(d(row, c));
    r.rows.push_back(std::move(cells));
  }
  emit_table(a.out, r);
  return 0;
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyArgs {
  std::string j, beta;
  bool asymptote = false;
  Output out;
};

int run_entropy(const EntropyArgs& a) {
  const Spin spin = spin_flag(a.j);
  const auto betas = flag_guard("--beta", [&] { return parse_angle_list(a.beta); });
  ScanResult r;
  r.meta["command"] = "entropy";
  r.meta["j"] = spin.to_string();
  r.columns = {"beta", "H"};
  if (a.asymptote) {
    r.columns.push_back("asymptote");
    r.columns.push_back("difference");
  }
  for (double beta : betas) {
    const double h = wigner_entropy(spin, beta);
    std::vector<Cell> row{beta, h};
    if (a.asymptote) {
      const double s = std::abs(std::sin(beta));
      const double asym = s < 1e-12 ? missing : entropy_asymptotic(spin, beta);
      row.emplace_back(asym);
      row.emplace_back(h - asym);
    }
    r.rows.push_back(std::move(row));
  }
  emit_table(a.out, r);
  return 0;
}

// ---------------------------------------------------------------------------
// ineq

struct IneqArgs {
  int n = 3;
  int order = 0;  // 0: n
  std::string redundancy = "graded";
  std::string basis = "elementary";
  std::string input;
  // eval
  std::string angles, omega, times, j = "1", state = "mixed", family = "d";
  double tolerance = default_violation_tolerance;
  Output out{"text"};
};

RedundancyRule rule_of(const std::string& s) { return s == "global" ? RedundancyRule::Global : RedundancyRule::OrderGraded; }

InequalityFamily build_family(const IneqArgs& a) {
  const int k = a.order == 0 ? a.n : a.order;
  return flag_guard("--n/--order", [&] {
    if (a.n < 2 || a.n > 8) throw std::domain_error("n must lie in 2..8");
    if (k < 1 || k > a.n) throw std::domain_error("order must lie in 1..n");
    if (a.basis == "elemental") {
      const auto base = elemental_inequalities(a.n);
      return k == a.n ? base : project_to_order(base, k, rule_of(a.redundancy));
    }
    return elgi_family(a.n, k, rule_of(a.redundancy));
  });
}

InequalityFamily read_family_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw usage_error("--input: cannot open '" + path + "'");
  return flag_guard("--input", [&] { return read_family(f); });
}

void emit_family(const Output& out, const InequalityFamily& f) {
  if (out.format == "text") {
    emit(out, [&](std::ostream& os) { write_family(os, f); });
    return;
  }
  ScanResult r;
  r.meta["command"] = "ineq";
  r.meta["n"] = f.n;
  r.meta["order"] = f.order;
  r.meta["size"] = f.size();
  r.columns = {"label", "expression"};
  for (const auto& m : f.members) r.rows.push_back({m.label(), m.expression()});
  emit_table(out, r);
}

int run_ineq_list(const IneqArgs& a) {
  emit_family(a.out, build_family(a));
  return 0;
}

int run_ineq_project(const IneqArgs& a) {
  if (a.input.empty()) throw usage_error("--input is required");
  const auto f = read_family_file(a.input);
  if (a.order < 1 || a.order > f.n) throw usage_error("--order: must lie in 1..n");
  emit_family(a.out, project_to_order(f, a.order, rule_of(a.redundancy)));
  return 0;
}

Schedule schedule_of(const IneqArgs& a) {
  if (!a.angles.empty()) {
    if (!a.omega.empty() || !a.times.empty()) throw usage_error("--angles: give either --angles or --omega with --times");
    return flag_guard("--angles", [&] { return Schedule(parse_angle_list(a.angles), true); });
  }
  if (a.omega.empty() || a.times.empty()) throw usage_error("--angles: a schedule is required (--angles, or --omega and --times)");
  const double omega = angle_flag(a.omega, "--omega");
  const auto times = flag_guard("--times", [&] { return parse_number_list(a.times); });
  return flag_guard("--times", [&] { return Schedule::from_times(omega, times, true); });
}

int run_ineq_eval(const IneqArgs& a) {
  const Spin spin = spin_flag(a.j);
  const Schedule sched = schedule_of(a);
  const int n = sched.n();
  const bool mixed = a.state == "mixed";
  const InitialState state = flag_guard("--state", [&] {
    return mixed ? InitialState::maximally_mixed(spin) : InitialState(spin, parse_number_list(a.state));
  });

  InequalityFamily fam;
  if (!a.input.empty()) {
    fam = read_family_file(a.input);
  } else if (a.family == "d") {
    std::vector<Inequality> ms;
    for (int i = 0; i < n; ++i) ms.push_back(d_single(n, i));
    for (int i = 0; i + 1 < n; ++i) ms.push_back(d_pair(n, i, i + 1));
    fam = InequalityFamily{n, n, ms};
  } else if (a.family == "chain") {
    fam = flag_guard("--family", [&] { return chain_family(n); });
  } else if (a.family == "elemental") {
    fam = elemental_inequalities(n);
  } else {
    IneqArgs b = a;
    b.n = n;
    fam = build_family(b);
  }
  if (fam.n != n) throw usage_error("--input: family has n=" + std::to_string(fam.n) + " but the schedule has " + std::to_string(n) + " times");

  const auto subsets = all_subsets(n);
  const auto h = mixed ? mixed_entropy_vector(spin, sched, subsets)
                       : flag_guard("--state", [&] { return entropy_vector(state, sched, subsets); });
  ScanResult r;
  r.meta["command"] = "ineq eval";
  r.meta["j"] = spin.to_string();
  r.meta["angles"] = sched.angles();
  r.meta["state"] = mixed ? nlohmann::ordered_json("mixed") : nlohmann::ordered_json(state.diag());
  r.meta["tolerance"] = a.tolerance;
  r.columns = {"label", "expression", "value", "status"};
  int violated = 0;
  for (const auto& m : fam.members) {
    const auto rep = evaluate(m, h, a.tolerance);
    violated += rep.violated;
    r.rows.push_back({m.label(), m.expression(), rep.value, std::string(rep.violated ? "violated" : "satisfied")});
  }
  r.meta["violated"] = violated;
  Output out = a.out;
  if (out.format == "text") out.format = "csv";
  emit_table(out, r);
  return 0;
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
  std::string j;
  int n = 3;
  int points = 0;
  std::string start, stop, state = "mixed", betas, j_list = "10,20,40,80,160", beta23 = "1.0";
  bool no_members = false, no_windows = false;
  std::string redundancy = "graded";
  int stride = 4;
  Output out;
};

GridSpec grid_flags(const ScanArgs& a, GridSpec g) {
  if (a.points) g.points = a.points;
  if (!a.start.empty()) g.start = angle_flag(a.start, "--start");
  if (!a.stop.empty()) g.stop = angle_flag(a.stop, "--stop");
  if (a.no_windows) g.windows.clear();
  std::erase_if(g.windows, [&](const ExclusionWindow& w) { return w.center < g.start || w.center > g.stop; });
  flag_guard("--points/--start/--stop", [&] {
    g.validate();
    return 0;
  });
  return g;
}

int run_scan_fig2(const ScanArgs& a) {
  Fig2Options opt;
  opt.spin = spin_flag(a.j.empty() ? "2" : a.j);
  opt.n = a.n;
  if (opt.n < 3 || opt.n > 4) throw usage_error("--n: must be 3 or 4");
  opt.grid = grid_flags(a, opt.grid);
  if (a.state != "mixed") opt.state = flag_guard("--state", [&] { return parse_number_list(a.state); });
  opt.members = !a.no_members;
  opt.rule = rule_of(a.redundancy);
  opt.threads = a.out.threads;
  emit_table(a.out, flag_guard("--state", [&] { return scan_fig2(opt); }));
  return 0;
}

int run_scan_fig3(const ScanArgs& a) {
  const Spin spin = spin_flag(a.j.empty() ? "100" : a.j);
  emit_table(a.out, scan_fig3(spin, grid_flags(a, fig3_grid(spin)), a.out.threads));
  return 0;
}

int run_scan_fig4(const ScanArgs& a) {
  const Spin spin = spin_flag(a.j.empty() ? "200" : a.j);
  const auto betas = a.betas.empty() ? fig4_betas() : flag_guard("--betas", [&] { return parse_angle_list(a.betas); });
  emit_table(a.out, scan_fig4(spin, betas, a.out.threads));
  return 0;
}

int run_scan_singularity(const ScanArgs& a) {
  std::vector<Spin> spins;
  for (const auto& s : flag_guard("--j-list", [&] { return split_list(a.j_list); })) spins.push_back(spin_flag(s, "--j-list"));
  const double beta23 = angle_flag(a.beta23, "--beta23");
  emit_table(a.out, flag_guard("--beta23", [&] { return scan_singularity(spins, beta23, a.out.threads); }));
  return 0;
}

int run_scan_wkb(const ScanArgs& a) {
  WkbErrorOptions opt;
  opt.spin = spin_flag(a.j.empty() ? "200" : a.j);
  opt.grid = grid_flags(a, opt.grid);
  if (a.stride < 1) throw usage_error("--stride: must be positive");
  opt.stride = a.stride;
  opt.threads = a.out.threads;
  emit_table(a.out, scan_wkb_error(opt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic Leggett-Garg inequalities for a driven spin"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);
  std::function<int()> action;

  DmatArgs dmat;
  auto* c_dmat = app.add_subcommand("dmat", "Wigner small-d matrix for (j, beta)");
  c_dmat->add_option("--j", dmat.j, "Spin: p/2, integer or decimal")->required();
  c_dmat->add_option("--beta", dmat.beta, "Rotation angle (e.g. 1.2, pi/3)")->required();
  c_dmat->add_flag("--check-orthogonality", dmat.check, "Print the orthogonality defect instead of the matrix");
  c_dmat->add_option("--gate", dmat.gate, "Defect gate for --check-orthogonality");
  add_output(c_dmat, dmat.out, {"csv", "json"});
  c_dmat->callback([&] { action = [&] { return run_dmat(dmat); }; });

  EntropyArgs ent;
  auto* c_ent = app.add_subcommand("entropy", "Wigner-matrix entropy H_j(beta)");
  c_ent->add_option("--j", ent.j, "Spin")->required();
  c_ent->add_option("--beta", ent.beta, "Angle or comma list of angles")->required();
  c_ent->add_flag("--with-asymptote", ent.asymptote, "Add the large-j asymptote and the difference");
  add_output(c_ent, ent.out, {"csv", "json"});
  c_ent->callback([&] { action = [&] { return run_entropy(ent); }; });

  IneqArgs ineq;
  auto* c_ineq = app.add_subcommand("ineq", "Entropic inequality families");
  c_ineq->require_subcommand(1);
  auto* c_list = c_ineq->add_subcommand("list", "Generate the order-k family for n times");
  auto* c_proj = c_ineq->add_subcommand("project", "Project a family file to a lower order");
  auto* c_eval = c_ineq->add_subcommand("eval", "Evaluate inequalities on a spin schedule");
  for (auto* c : {c_list, c_proj, c_eval}) {
    c->add_option("--redundancy", ineq.redundancy, "graded (default) or global")->check(CLI::IsMember({"graded", "global"}));
    add_output(c, ineq.out, {"text", "csv", "json"});
  }
  c_list->add_option("--n", ineq.n, "Number of measurement times")->required();
  c_list->add_option("--order", ineq.order, "Order k (default n)");
  c_list->add_option("--basis", ineq.basis, "elementary (default) or elemental")->check(CLI::IsMember({"elementary", "elemental"}));
  c_list->callback([&] { action = [&] { return run_ineq_list(ineq); }; });
  c_proj->add_option("--input", ineq.input, "Family file")->required();
  c_proj->add_option("--order", ineq.order, "Target order")->required();
  c_proj->callback([&] { action = [&] { return run_ineq_project(ineq); }; });
  c_eval->add_option("--n", ineq.n, "Number of times (checked against the schedule)");
  c_eval->add_option("--angles", ineq.angles, "Comma list of rotation angles omega*t_i");
  c_eval->add_option("--omega", ineq.omega, "Precession frequency, with --times");
  c_eval->add_option("--times", ineq.times, "Comma list of times, with --omega");
  c_eval->add_option("--j", ineq.j, "Spin");
  c_eval->add_option("--state", ineq.state, "mixed or comma list of diagonal weights");
  c_eval->add_option("--family", ineq.family, "d (default), order, chain or elemental")
      ->check(CLI::IsMember({"d", "order", "chain", "elemental"}));
  c_eval->add_option("--order", ineq.order, "Order for --family order");
  c_eval->add_option("--input", ineq.input, "Family file to evaluate instead of --family");
  c_eval->add_option("--tolerance", ineq.tolerance, "Violation tolerance");
  c_eval->callback([&] {
    action = [&] {
      if (c_eval->count("--n") && !ineq.angles.empty() && static_cast<int>(split_list(ineq.angles).size()) != ineq.n)
        throw usage_error("--n: does not match the number of --angles");
      return run_ineq_eval(ineq);
    };
  });

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Figure and validation scans");
  c_scan->require_subcommand(1);
  auto* s_fig2 = c_scan->add_subcommand("fig2", "Inequality values along equally spaced schedules");
  auto* s_fig3 = c_scan->add_subcommand("fig3", "D_2,3 against its asymptote, angles (0, 2b, 3b)");
  auto* s_fig4 = c_scan->add_subcommand("fig4", "|d|^2 maps with region tags");
  auto* s_sing = c_scan->add_subcommand("singularity", "D_2,3 growth with beta_13 = pi");
  auto* s_wkb = c_scan->add_subcommand("wkb-error", "WKB and entropy-asymptote errors");
  for (auto* c : {s_fig2, s_fig3, s_fig4, s_sing, s_wkb}) add_output(c, scan.out, {"csv", "json"});
  for (auto* c : {s_fig2, s_fig3, s_fig4, s_wkb}) c->add_option("--j", scan.j, "Spin");
  for (auto* c : {s_fig2, s_fig3, s_wkb}) {
    c->add_option("--points", scan.points, "Grid points")->check(CLI::Range(2, 1000000));
    c->add_option("--start", scan.start, "Grid start");
    c->add_option("--stop", scan.stop, "Grid stop");
    c->add_flag("--no-windows", scan.no_windows, "Keep points inside exclusion windows");
  }
  s_fig2->add_option("--n", scan.n, "3 or 4");
  s_fig2->add_option("--state", scan.state, "mixed or comma list of diagonal weights");
  s_fig2->add_flag("--no-members", scan.no_members, "Only family minima");
  s_fig2->add_option("--redundancy", scan.redundancy, "graded or global")->check(CLI::IsMember({"graded", "global"}));
  s_fig4->add_option("--betas", scan.betas, "Comma list of angles");
  s_sing->add_option("--j-list", scan.j_list, "Comma list of spins");
  s_sing->add_option("--beta23", scan.beta23, "Angle between the last two times");
  s_wkb->add_option("--stride", scan.stride, "Sample every stride-th m and n");
  s_fig2->callback([&] { action = [&] { return run_scan_fig2(scan); }; });
  s_fig3->callback([&] { action = [&] { return run_scan_fig3(scan); }; });
  s_fig4->callback([&] { action = [&] { return run_scan_fig4(scan); }; });
  s_sing->callback([&] { action = [&] { return run_scan_singularity(scan); }; });
  s_wkb->callback([&] { action = [&] { return run_scan_wkb(scan); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const size_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
