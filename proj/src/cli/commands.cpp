#include "gmelab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmelab/boundent.hpp"
#include "gmelab/gme.hpp"
#include "gmelab/io.hpp"
#include "gmelab/separability.hpp"
#include "gmelab/states.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab::cli {

namespace {

using nlohmann::json;

// Numbers enter JSON already cut to the CSV precision so both formats agree.
double round12(double v) { return std::stod(format_number(v)); }

// Evaluates fn(i) for i in [0, n) on up to thread_budget() threads; results
// keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(thread_budget(), static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string join_rows(const std::string& header, const std::vector<std::string>& rows) {
  std::string s = header + "\n";
  for (const auto& r : rows) s += r + "\n";
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string cut_label(const Partition& p) {
  std::string s;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (b) s += "|";
    for (int party : p.blocks[b]) s += std::to_string(party + 1);
  }
  return s;
}

// ---- commands ------------------------------------------------------------

CommandResult cmd_thresholds(const RunConfig& cfg) {
  const int n_hi = cfg.n_max.value_or(cfg.n);
  std::vector<ThresholdReport> rows;
  for (int n = cfg.n; n <= n_hi; ++n) {
    rows.push_back(single_copy_threshold(n));
    for (int k = 2; k <= cfg.k_max; ++k) rows.push_back(k_copy_threshold(n, k));
    rows.push_back(partition_separability_threshold(n));
  }
  if (cfg.format == output_format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.n_qubits}, {"k", r.k}, {"p_threshold", round12(r.p_threshold)},
                     {"kind", std::string(to_string(r.kind))}});
    }
    return {dump(arr)};
  }
  std::vector<std::string> lines;
  for (const auto& r : rows) lines.push_back(threshold_csv_row(r));
  return {join_rows(threshold_csv_header(), lines)};
}

CommandResult cmd_concurrence(const RunConfig& cfg) {
  const auto ps = cfg.p_grid.points();
  for (double p : ps) IsotropicGHZ(cfg.n, p);  // range check before any output
  struct Row {
    double p, c;
  };
  const auto rows = parallel_map<Row>(ps.size(), [&](std::size_t i) {
    return Row{ps[i], gm_concurrence_xform(isotropic_ghz(cfg.n, ps[i]))};
  });
  if (cfg.format == output_format::json) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"p", round12(r.p)}, {"C_GM", round12(r.c)}, {"is_gme", r.c > 0}});
    return {dump(arr)};
  }
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back(format_number(r.p) + "," + format_number(r.c) + "," + (r.c > 0 ? "true" : "false"));
  }
  return {join_rows("p,C_GM,is_gme", lines)};
}

CommandResult cmd_verify_decomposition(const RunConfig& cfg) {
  if (cfg.n != 3) throw error(errc::unsupported, "the two-copy decomposition exists for N = 3 only");
  const double tol = cfg.tol.value_or(tol::decomp);
  const auto ps = cfg.p_grid.points();
  const auto reports = parallel_map<BisepDecomposition>(ps.size(), [&](std::size_t i) {
    return two_copy_decomposition(ps[i]);
  });
  CommandResult res;
  double worst = 0.0;
  for (const auto& d : reports) worst = std::max(worst, d.residual_max);
  if (worst > tol) {
    res.exit_code = kExitNumerical;
    res.message = "decomposition residual " + format_number(worst) + " exceeds " + format_number(tol);
  }
  if (cfg.format == output_format::json) {
    json arr = json::array();
    for (const auto& d : reports) {
      arr.push_back({{"p", round12(d.p)},
                     {"residual_max", round12(d.residual_max)},
                     {"weights",
                      {{"diagonal", round12(d.weights.diagonal)},
                       {"gamma1", round12(d.weights.gamma1)},
                       {"gamma2", round12(d.weights.gamma2)},
                       {"sigma", round12(d.weights.sigma)}}},
                     {"diag_min", round12(d.diag_min)},
                     {"valid", d.valid},
                     {"gamma1_correction_applied", d.gamma1_correction ? json(*d.gamma1_correction) : json(nullptr)}});
    }
    res.output = dump(arr);
    return res;
  }
  std::vector<std::string> lines;
  for (const auto& d : reports) {
    lines.push_back(format_number(d.p) + "," + format_number(d.residual_max) + "," + format_number(d.diag_min) + "," +
                    (d.valid ? "true" : "false") + "," + d.gamma1_correction.value_or(""));
  }
  res.output = join_rows("p,residual_max,diag_min,valid,gamma1_correction_applied", lines);
  return res;
}

CommandResult cmd_ppt_scan(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(tol::psd);
  if (!cfg.state_path.empty()) {
    // Imported state: every subsystem is a party.
    const DensityMatrix rho = read_density_file(cfg.state_path);
    const int parties = static_cast<int>(rho.subsystem_count());
    const auto cuts = bipartitions(parties);
    const auto mins = parallel_map<double>(cuts.size(), [&](std::size_t i) {
      return partial_transpose(rho, cuts[i].far_side()).min_eigenvalue();
    });
    const double scale = std::max(1.0, std::abs(rho.trace()));
    if (cfg.format == output_format::json) {
      json arr = json::array();
      for (std::size_t i = 0; i < cuts.size(); ++i)
        arr.push_back({{"cut", cut_label(cuts[i])}, {"pt_min_eig", round12(mins[i])}, {"ppt", mins[i] >= -tol * scale}});
      return {dump(arr)};
    }
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      lines.push_back(cut_label(cuts[i]) + "," + format_number(mins[i]) + "," +
                      (mins[i] >= -tol * scale ? "true" : "false"));
    }
    return {join_rows("cut,pt_min_eig,ppt", lines)};
  }

  const auto ps = cfg.p_grid.points();
  for (double p : ps) IsotropicGHZ(cfg.n, p);
  const auto cuts = bipartitions(cfg.n);
  struct Row {
    double p;
    std::size_t cut;
    double min_eig;
  };
  const std::size_t total = ps.size() * cuts.size();
  const auto rows = parallel_map<Row>(total, [&](std::size_t i) {
    const double p = ps[i / cuts.size()];
    const std::size_t c = i % cuts.size();
    return Row{p, c, pt_min_eig_isotropic(cfg.n, p, cuts[c])};
  });
  const double crit = ppt_crit(cfg.n);
  if (cfg.format == output_format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"p", round12(r.p)},
                     {"cut", cut_label(cuts[r.cut])},
                     {"pt_min_eig", round12(r.min_eig)},
                     {"flagged_eig", round12(pt_flagged_eigenvalue(cfg.n, r.p))},
                     {"ppt", r.min_eig >= -tol},
                     {"p_crit", round12(crit)}});
    }
    return {dump(arr)};
  }
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back(format_number(r.p) + "," + cut_label(cuts[r.cut]) + "," + format_number(r.min_eig) + "," +
                    format_number(pt_flagged_eigenvalue(cfg.n, r.p)) + "," + (r.min_eig >= -tol ? "true" : "false") +
                    "," + format_number(crit));
  }
  return {join_rows("p,cut,pt_min_eig,flagged_eig,ppt,p_crit", lines)};
}

CommandResult cmd_witness_scan(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(1e-10);
  const bool wedge = cfg.mode == "wedge";
  const auto ys = cfg.p_grid.points();
  struct Row {
    double x, y, z, closed, dense;
  };
  const auto rows = parallel_map<Row>(ys.size(), [&](std::size_t i) {
    const double y = ys[i];
    if (wedge) {
      const double x = cfg.x.value_or(y);
      const double closed = witness_trace_wedge(x, y);
      const double dense = witness_expectation(project_wedge_to_D(wedge_state(x, y)).unnormalized);
      return Row{x, y, NAN, closed, dense};
    }
    const double x = cfg.x.value_or(1.0);
    const double z = cfg.z.value_or(y);
    const double closed = witness_trace_triangle(x, y, z);
    const double dense = witness_expectation(project_triangle_to_D(triangle_state(x, y, z)).unnormalized);
    return Row{x, y, z, closed, dense};
  });
  CommandResult res;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.closed - r.dense));
  if (worst > tol) {
    res.exit_code = kExitNumerical;
    res.message = "closed form and dense witness traces differ by " + format_number(worst);
  }
  if (cfg.format == output_format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"x", round12(r.x)},
                     {"y", round12(r.y)},
                     {"z", wedge ? json(nullptr) : json(round12(r.z))},
                     {"closed_form", round12(r.closed)},
                     {"dense_trace", round12(r.dense)},
                     {"gme_detected", r.dense < 0}});
    }
    res.output = dump(arr);
    return res;
  }
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back(format_number(r.x) + "," + format_number(r.y) + "," + (wedge ? "" : format_number(r.z)) + "," +
                    format_number(r.closed) + "," + format_number(r.dense) + "," + (r.dense < 0 ? "true" : "false"));
  }
  res.output = join_rows("x,y,z,closed_form,dense_trace,gme_detected", lines);
  return res;
}

CommandResult cmd_locc_demo(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(1e-12);
  const double x = cfg.locc_x, y = cfg.locc_y, z = cfg.locc_z;
  const ProductFormState source = biseparable_source_state(cfg.probs, x, y, z);

  std::array<double, 3> cut_min{};
  for (int party = 0; party < 3; ++party) {
    const int far[1] = {party};
    cut_min[party] = source_pt_min_eigenvalue(source, far);
  }

  const LoccOutcome outcome = simulate_locc_triangle({source, source, source});
  const double diff = max_abs_diff(outcome.state.dense().matrix(), triangle_state(x, y, z).dense().matrix());
  const SubspaceProjection d = project_triangle_to_D(outcome.state);
  const double witness = witness_expectation(d.unnormalized);
  const double closed = witness_trace_triangle(x, y, z);
  const bool detected = witness < 0;

  if (!cfg.export_path.empty()) write_text_file(cfg.export_path, to_json(outcome.state).dump(2) + "\n");

  CommandResult res;
  if (diff > tol) {
    res.exit_code = kExitNumerical;
    res.message = "LOCC output differs from the triangle state by " + format_number(diff);
  }
  const std::string conclusion = detected ? "GME activated: witness = " + format_number(witness)
                                          : "not detected: witness = " + format_number(witness);
  if (cfg.format == output_format::json) {
    res.output = dump({{"probs", {round12(cfg.probs[0]), round12(cfg.probs[1]), round12(cfg.probs[2])}},
                       {"x", round12(x)},
                       {"y", round12(y)},
                       {"z", round12(z)},
                       {"source_pt_min_eig", {round12(cut_min[0]), round12(cut_min[1]), round12(cut_min[2])}},
                       {"step_probability",
                        {round12(outcome.step_probability[0]), round12(outcome.step_probability[1]),
                         round12(outcome.step_probability[2])}},
                       {"success_probability", round12(outcome.success_probability)},
                       {"max_abs_diff_vs_triangle", round12(diff)},
                       {"witness_trace", round12(witness)},
                       {"witness_closed_form", round12(closed)},
                       {"gme_detected", detected},
                       {"conclusion", conclusion}});
    return res;
  }
  std::ostringstream os;
  os << "source: probs " << format_number(cfg.probs[0]) << "," << format_number(cfg.probs[1]) << ","
     << format_number(cfg.probs[2]) << "  x=" << format_number(x) << " y=" << format_number(y)
     << " z=" << format_number(z) << "\n";
  for (int party = 0; party < 3; ++party) {
    os << "source PT min eigenvalue, party " << party + 1 << " vs rest: " << format_number(cut_min[party]) << "\n";
  }
  os << "projection success probabilities: " << format_number(outcome.step_probability[0]) << ", "
     << format_number(outcome.step_probability[1]) << ", " << format_number(outcome.step_probability[2])
     << " (total " << format_number(outcome.success_probability) << ")\n";
  os << "max |output - triangle state|: " << format_number(diff) << "\n";
  os << "witness trace (closed form " << format_number(closed) << "): " << format_number(witness) << "\n";
  os << conclusion << "\n";
  res.output = os.str();
  return res;
}

}  // namespace

std::vector<double> Grid::points() const {
  std::vector<double> out;
  if (steps == 1) return {start};
  for (int i = 0; i < steps; ++i) {
    // Endpoints exact; interior points by affine combination.
    out.push_back(i == steps - 1 ? stop : start + (stop - start) * i / (steps - 1));
  }
  return out;
}

void RunConfig::validate() const {
  if (p_grid.steps < 1) throw error(errc::invalid_argument, "--p-steps must be >= 1");
  if (!(p_grid.start <= p_grid.stop)) throw error(errc::invalid_argument, "--p-start must not exceed --p-stop");
  if (n < 2) throw error(errc::invalid_argument, "--n must be >= 2");
  if (n_max && *n_max < n) throw error(errc::invalid_argument, "--n-max must be >= --n");
  if (k_max < 1) throw error(errc::invalid_argument, "--kmax must be >= 1 (empty k range)");
  if (mode != "triangle" && mode != "wedge") throw error(errc::invalid_argument, "--mode must be triangle or wedge");
  if (tol && !(*tol > 0)) throw error(errc::invalid_argument, "--tol must be positive");
  if (cmd == command::concurrence || cmd == command::ppt_scan) {
    if (n > 12) throw error(errc::invalid_argument, "--n above 12 is beyond the dense scans");
  }
}

CommandResult run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.cmd) {
    case command::thresholds: return cmd_thresholds(cfg);
    case command::concurrence: return cmd_concurrence(cfg);
    case command::verify_decomposition: return cmd_verify_decomposition(cfg);
    case command::ppt_scan: return cmd_ppt_scan(cfg);
    case command::witness_scan: return cmd_witness_scan(cfg);
    case command::locc_demo: return cmd_locc_demo(cfg);
  }
  throw error(errc::invalid_argument, "unknown command");
}

int exit_code_for(errc code) noexcept { return code == errc::numerical_contract ? kExitNumerical : kExitConfig; }

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GME_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerics for multi-copy activation of genuine multipartite entanglement"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "qubit count N");
    sub->add_option("--p-start", cfg.p_grid.start, "first grid value");
    sub->add_option("--p-stop", cfg.p_grid.stop, "last grid value");
    sub->add_option("--p-steps", cfg.p_grid.steps, "number of grid points");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out_path, "output file (default: stdout)");
    sub->add_option("--tol", cfg.tol, "override the contract tolerance");
  };

  auto* thresholds = app.add_subcommand("thresholds", "k-copy activation thresholds and p_crit");
  add_common(thresholds);
  thresholds->add_option("--kmax", cfg.k_max, "largest copy count");
  thresholds->add_option("--n-max", cfg.n_max, "emit rows for N = n..n-max");

  auto* concurrence = app.add_subcommand("concurrence", "GM concurrence of rho(p) over a grid");
  add_common(concurrence);

  auto* verify = app.add_subcommand("verify-decomposition", "check the two-copy biseparable decomposition");
  add_common(verify);

  auto* ppt = app.add_subcommand("ppt-scan", "partial-transpose minimum eigenvalue across every cut");
  add_common(ppt);
  ppt->add_option("--state", cfg.state_path, "JSON state file to scan instead of rho(p)");

  auto* witness = app.add_subcommand("witness-scan", "closed-form and dense W3 traces over y");
  add_common(witness);
  witness->add_option("--mode", cfg.mode, "triangle or wedge");
  witness->add_option("--x", cfg.x, "fixed x (triangle default 1, wedge default x = y)");
  witness->add_option("--z", cfg.z, "fixed z (default z = y)");

  auto* locc = app.add_subcommand("locc-demo", "three-copy LOCC reduction to the PPT triangle");
  add_common(locc);
  std::vector<double> probs;
  locc->add_option("--probs", probs, "p1,p2,p3")->delimiter(',')->expected(3);
  locc->add_option("--x", cfg.locc_x, "C1C2 pair parameter");
  locc->add_option("--y", cfg.locc_y, "B1B3 pair parameter");
  locc->add_option("--z", cfg.locc_z, "A2A3 pair parameter");
  locc->add_option("--export", cfg.export_path, "write the resulting six-qutrit state as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (*thresholds) cfg.cmd = command::thresholds;
  else if (*concurrence) cfg.cmd = command::concurrence;
  else if (*verify) cfg.cmd = command::verify_decomposition;
  else if (*ppt) cfg.cmd = command::ppt_scan;
  else if (*witness) cfg.cmd = command::witness_scan;
  else cfg.cmd = command::locc_demo;
  cfg.format = format == "json" ? output_format::json : output_format::csv;
  if (!probs.empty()) std::copy(probs.begin(), probs.end(), cfg.probs.begin());
  // Grid defaults that make sense per command when the user gave none.
  auto default_grid = [&](CLI::App* sub, Grid g) {
    if (!sub->count("--p-start")) cfg.p_grid.start = g.start;
    if (!sub->count("--p-stop")) cfg.p_grid.stop = g.stop;
    if (!sub->count("--p-steps")) cfg.p_grid.steps = g.steps;
  };
  if (cfg.cmd == command::witness_scan) default_grid(witness, {0.2, 0.6, 9});
  if (cfg.cmd == command::verify_decomposition) default_grid(verify, {0.0, 0.3, 61});

  try {
    const CommandResult res = run(cfg);
    if (cfg.out_path.empty()) {
      out << res.output;
    } else {
      write_text_file(cfg.out_path, res.output);
    }
    if (!res.message.empty()) err << "error: " << res.message << "\n";
    return res.exit_code;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace gmelab::cli
