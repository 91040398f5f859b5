// bdcorr: command-line front end for the Bell diagonal correlation library.
//
//   bdcorr correlations --r 1,-0.6,0.6
//   bdcorr verify --samples 1000 --seed 7
//   bdcorr dynamics --model phaseflip --r 1,-0.6,0.6 --tau 5 --alpha 1 --tmax 3
//   bdcorr sweep --family werner --points 101
//   bdcorr freezing-scan --lambda1p 0.7,0.8,0.9
//
// Exit codes: 0 success, 1 verification failure, 2 usage or validation error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdcorr/dynamics.hpp"
#include "bdcorr/entropic.hpp"
#include "bdcorr/oracle.hpp"
#include "bdcorr/states.hpp"
#include "bdcorr/td_correlations.hpp"

namespace {

using namespace bdcorr;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += num(xs[i]);
  }
  return out;
}

struct StateInput {
  std::vector<double> r;
  std::vector<double> lambda;

  void add_to(CLI::App* cmd) {
    auto* opt_r = cmd->add_option("--r", r, "correlation coefficients R11,R22,R33")
                      ->delimiter(',')
                      ->expected(3);
    auto* opt_l = cmd->add_option("--lambda", lambda, "Bell weights l1+,l1-,l2+,l2-")
                      ->delimiter(',')
                      ->expected(4);
    opt_r->excludes(opt_l);
  }

  BellDiagonal resolve() const {
    if (r.empty() && lambda.empty()) {
      throw CLI::ValidationError("state", "one of --r or --lambda is required");
    }
    BellDiagonal s = !r.empty() ? BellDiagonal{r[0], r[1], r[2]}
                                : bd_from_spectrum(BellSpectrum{lambda[0], lambda[1], lambda[2], lambda[3]});
    require_physical(s);
    return s;
  }

  std::string echo() const {
    return !r.empty() ? "# r: " + join(r) + "\n" : "# lambda: " + join(lambda) + "\n";
  }
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {}

  std::ostream& stream() { return buf_; }

  void flush() {
    if (path_.empty()) {
      std::cout << buf_.str() << std::flush;
    } else {
      std::ofstream f(path_, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + path_);
      f << buf_.str();
    }
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

ordered_json bloch_json(const BlochQubit& q) { return ordered_json::array({q.v[0], q.v[1], q.v[2]}); }

ordered_json record_json(const CorrelationRecord& rec, double gap) {
  ordered_json j;
  j["metric"] = to_string(rec.metric);
  j["quantum"] = rec.quantum;
  j["classical"] = rec.classical;
  j["total"] = rec.total;
  j["witnesses"] = {
      {"closest_classical", {rec.closest_classical.r11, rec.closest_classical.r22, rec.closest_classical.r33}},
      {"classical_product", {{"a", bloch_json(rec.classical_product.a)}, {"b", bloch_json(rec.classical_product.b)}}},
      {"total_product", {{"a", bloch_json(rec.total_product.a)}, {"b", bloch_json(rec.total_product.b)}}},
  };
  j["gap"] = gap;
  return j;
}

// ---- correlations ----------------------------------------------------------

struct CorrelationsArgs {
  StateInput state;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 42;
};

int run_correlations(const CorrelationsArgs& a) {
  const BellDiagonal r = a.state.resolve();
  const CorrelationRecord td = correlations_td(r);
  const CorrelationRecord ent = correlations_ent(r);
  const double td_gap = td.classical + td.quantum - td.total;
  const double ent_gap = ent.total - ent.quantum - ent.classical;
  const MarginalBaseline base = marginal_baseline(r);
  const BellSpectrum sp = bd_spectrum(r);

  Output out(a.output);
  if (a.format == "json") {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "correlations";
    j["seed"] = a.seed;
    j["state"] = {{"r", {r.r11, r.r22, r.r33}}, {"lambda", {sp.l1p, sp.l1m, sp.l2p, sp.l2m}}};
    j["records"] = ordered_json::array({record_json(td, td_gap), record_json(ent, ent_gap)});
    j["marginal_baseline"] = {{"c_prime", base.c_prime}, {"t_prime", base.t_prime}};
    j["triangle_gap"] = td_gap;
    out.stream() << j.dump(2) << '\n';
  } else {
    std::ostream& os = out.stream();
    os << "# command: correlations\n# seed: " << a.seed << '\n' << a.state.echo();
    os << "# marginal_baseline: c_prime=" << num(base.c_prime) << " t_prime=" << num(base.t_prime) << '\n';
    os << "metric,quantum,classical,total,gap\n";
    os << to_string(td.metric) << ',' << num(td.quantum) << ',' << num(td.classical) << ','
       << num(td.total) << ',' << num(td_gap) << '\n';
    os << to_string(ent.metric) << ',' << num(ent.quantum) << ',' << num(ent.classical) << ','
       << num(ent.total) << ',' << num(ent_gap) << '\n';
  }
  out.flush();
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool full_scale = false;
  bool cold = false;
  int starts = 32;
  std::string output;
};

int run_verify(const VerifyArgs& a) {
  const std::size_t count = a.full_scale ? std::size_t{1000000} : a.samples;
  if (count < 1) throw CLI::ValidationError("--samples", "must be at least 1");
  OptimizerConfig cfg;
  cfg.seed = a.seed;
  cfg.starts = a.starts;
  cfg.analytic_warm_start = !a.cold;
  const VerifyReport rep = verify_sweep(count, a.seed, cfg, a.threads);

  Output out(a.output);
  std::ostream& os = out.stream();
  os << "# command: verify\n# seed: " << a.seed << "\n# samples: " << count
     << "\n# starts: " << cfg.starts << "\n# warm_start: " << (cfg.analytic_warm_start ? 1 : 0) << '\n';
  os << "r11,r22,r33,analytic_T,oracle_T,analytic_D,oracle_D\n";
  for (const VerifyRow& row : rep.rows) {
    os << num(row.state.r11) << ',' << num(row.state.r22) << ',' << num(row.state.r33) << ','
       << num(row.analytic_total) << ',' << num(row.oracle_total) << ',' << num(row.analytic_discord)
       << ',' << num(row.oracle_discord) << '\n';
  }
  os << "# summary: samples=" << count << " undercuts=" << rep.undercuts
     << " within_1e-4=" << rep.total_within << " max_abs_diff_T=" << num(rep.max_total_diff)
     << " max_abs_diff_D=" << num(rep.max_discord_diff) << '\n';
  out.flush();
  std::cerr << "grid refinements of the candidate set: " << rep.grid_refinements << " of " << count << '\n';
  return rep.undercuts == 0 ? kExitOk : kExitVerifyFailed;
}

// ---- dynamics --------------------------------------------------------------

void write_trajectory(std::ostream& os, const Trajectory& tr) {
  os << "time,r11,r22,r33,D_td,C_td,T_td,D_ent,C_ent,T_ent\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const BellDiagonal& r = tr.states[i];
    const CorrelationRecord& td = tr.td_records[i];
    const CorrelationRecord& ent = tr.ent_records[i];
    os << num(tr.times[i]) << ',' << num(r.r11) << ',' << num(r.r22) << ',' << num(r.r33) << ','
       << num(td.quantum) << ',' << num(td.classical) << ',' << num(td.total) << ',' << num(ent.quantum)
       << ',' << num(ent.classical) << ',' << num(ent.total) << '\n';
  }
  os << "# sudden_changes_D: " << join(tr.sudden_changes) << '\n';
  os << "# sudden_changes_C: " << join(tr.classical_changes) << '\n';
}

struct DynamicsArgs {
  StateInput state;
  std::string model;
  double tau = 5.0;
  double alpha = 1.0;
  double g = 1.0;
  double window = 3.0;
  std::size_t steps = 2000;
  std::uint64_t seed = 42;
  std::string output;
};

int run_dynamics(const DynamicsArgs& a) {
  const BellDiagonal r0 = a.state.resolve();
  ChannelParams params = a.model == "phaseflip" ? ChannelParams{PhaseFlipParams{a.tau, a.alpha}}
                                                : ChannelParams{RandomFieldParams{a.g}};
  const Trajectory tr = trajectory(r0, params, a.window, a.steps);

  Output out(a.output);
  std::ostream& os = out.stream();
  os << "# command: dynamics\n# seed: " << a.seed << "\n# model: " << a.model << '\n' << a.state.echo();
  if (a.model == "phaseflip") {
    os << "# tau: " << num(a.tau) << "\n# alpha: " << num(a.alpha) << "\n# time: nu = t / (2 tau)\n";
  } else {
    os << "# g: " << num(a.g) << "\n# time: g t\n";
  }
  os << "# window: " << num(a.window) << "\n# steps: " << a.steps
     << "\n# freezing_condition: " << (freezing_condition(r0, params) ? 1 : 0) << '\n';
  write_trajectory(os, tr);
  out.flush();
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string family;
  std::size_t points = 101;
  std::uint64_t seed = 42;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  if (a.points < 2) throw CLI::ValidationError("--points", "must be at least 2");
  const bool werner_family = a.family == "werner";
  const std::vector<double> boundaries = werner_family ? std::vector<double>{0.8} : std::vector<double>{0.5, 0.75};
  const double half_step = 0.5 / static_cast<double>(a.points - 1);

  Output out(a.output);
  std::ostream& os = out.stream();
  os << "# command: sweep\n# seed: " << a.seed << "\n# family: " << a.family << "\n# points: " << a.points
     << '\n';
  os << (werner_family ? "# state: (r, -r, r)\n" : "# state: (c, -c, 1)\n");
  os << "# boundaries: " << join(boundaries) << '\n';
  os << "parameter,D_td,C_td,T_td,boundary\n";
  for (std::size_t i = 0; i < a.points; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(a.points - 1);
    const BellDiagonal r = werner_family ? werner(p) : rank2(p);
    bool flagged = false;
    for (double b : boundaries) flagged = flagged || std::abs(p - b) <= half_step * (1.0 + 1e-9);
    os << num(p) << ',' << num(td_discord(r)) << ',' << num(td_classical(r)) << ',' << num(td_total(r).value)
       << ',' << (flagged ? 1 : 0) << '\n';
  }
  out.flush();
  return kExitOk;
}

// ---- freezing-scan ---------------------------------------------------------

struct FreezingArgs {
  std::vector<double> lambda1p{0.7, 0.8, 0.9, 1.0};
  double window = 3.14;
  std::size_t steps = 2000;
  std::uint64_t seed = 42;
  std::string output_dir;
  std::string output;
};

int run_freezing(const FreezingArgs& a) {
  const std::vector<FreezingScanEntry> scan = freezing_scaling_scan(a.lambda1p, a.window, a.steps);
  if (!a.output_dir.empty()) std::filesystem::create_directories(a.output_dir);

  Output out(a.output);
  std::ostream& os = out.stream();
  os << "# command: freezing-scan\n# seed: " << a.seed << "\n# model: randomfield\n# window: " << num(a.window)
     << "\n# steps: " << a.steps << "\n# lambda1p: " << join(a.lambda1p) << '\n';
  os << "lambda1p,r22_0,plateau,closed_form_gt,detected_gt,trajectory_file\n";
  for (const FreezingScanEntry& e : scan) {
    std::string file;
    if (!a.output_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof name, "freezing_l%.6g.csv", e.lambda1p);
      file = (std::filesystem::path(a.output_dir) / name).string();
      std::ofstream f(file, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + file);
      f << "# command: freezing-scan\n# seed: " << a.seed << "\n# model: randomfield\n# lambda1p: "
        << num(e.lambda1p) << "\n# r: " << num(e.initial.r11) << ',' << num(e.initial.r22) << ','
        << num(e.initial.r33) << "\n# time: g t\n";
      write_trajectory(f, e.trajectory);
    }
    os << num(e.lambda1p) << ',' << num(e.initial.r22) << ',' << num(e.plateau) << ','
       << num(e.closed_form_change) << ',' << (e.detected_change ? num(*e.detected_change) : std::string())
       << ',' << file << '\n';
  }
  out.flush();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-distance and relative-entropy correlations of Bell diagonal states"};
  app.require_subcommand(1);

  CorrelationsArgs corr;
  auto* c = app.add_subcommand("correlations", "correlation hierarchy of one state");
  corr.state.add_to(c);
  c->add_option("--format", corr.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  c->add_option("--output,-o", corr.output, "write to file instead of stdout");
  c->add_option("--seed", corr.seed, "echoed in the output");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "compare closed forms with numerical oracles on sampled states");
  v->add_option("--samples", ver.samples, "number of sampled states");
  v->add_option("--seed", ver.seed, "sampling and optimizer seed");
  v->add_option("--threads", ver.threads, "worker threads (output does not depend on it)");
  v->add_option("--starts", ver.starts, "random optimizer starts per oracle");
  v->add_flag("--full-scale", ver.full_scale, "use 10^6 samples");
  v->add_flag("--cold", ver.cold, "do not seed the oracles with the closed-form witnesses");
  v->add_option("--output,-o", ver.output, "write to file instead of stdout");

  DynamicsArgs dyn;
  auto* d = app.add_subcommand("dynamics", "trajectory under a non-Markovian channel");
  dyn.state.add_to(d);
  d->add_option("--model", dyn.model, "phaseflip or randomfield")
      ->required()
      ->check(CLI::IsMember({"phaseflip", "randomfield"}));
  d->add_option("--tau", dyn.tau, "phase flip memory time");
  d->add_option("--alpha", dyn.alpha, "phase flip coupling |alpha|");
  d->add_option("--g", dyn.g, "random field coupling");
  d->add_option("--tmax,--gtmax", dyn.window, "end of the time window (nu or g t)");
  d->add_option("--steps", dyn.steps, "grid points");
  d->add_option("--seed", dyn.seed, "echoed in the output");
  d->add_option("--output,-o", dyn.output, "write to file instead of stdout");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "correlations along the Werner or rank-2 line");
  s->add_option("--family", sw.family, "werner or rank2")->required()->check(CLI::IsMember({"werner", "rank2"}));
  s->add_option("--points", sw.points, "grid points on [0, 1]");
  s->add_option("--seed", sw.seed, "echoed in the output");
  s->add_option("--output,-o", sw.output, "write to file instead of stdout");

  FreezingArgs fr;
  auto* f = app.add_subcommand("freezing-scan", "freezing length versus lambda1+ under random fields");
  f->add_option("--lambda1p", fr.lambda1p, "values of lambda1+ in (1/2, 1]")->delimiter(',');
  f->add_option("--gtmax", fr.window, "end of the g t window");
  f->add_option("--steps", fr.steps, "grid points");
  f->add_option("--seed", fr.seed, "echoed in the output");
  f->add_option("--output-dir", fr.output_dir, "directory for per-value trajectory CSVs");
  f->add_option("--output,-o", fr.output, "write the summary to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return run_correlations(corr);
    if (v->parsed()) return run_verify(ver);
    if (d->parsed()) return run_dynamics(dyn);
    if (s->parsed()) return run_sweep(sw);
    if (f->parsed()) return run_freezing(fr);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bdcorr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
