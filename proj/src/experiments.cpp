#include "cosim/experiments.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cosim/csv.hpp"
#include "cosim/errors.hpp"

namespace cosim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<CosimConfig> with_steps(const CosimConfig& base, std::span<const double> steps) {
  std::vector<CosimConfig> out;
  for (double h : steps) {
    CosimConfig c = base;
    c.macro_step = h;
    out.push_back(c);
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("malformed number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

}  // namespace

void StudySpec::validate() const {
  for (const auto& [field, values] : sweep) {
    if (field != "H") throw std::invalid_argument("unsupported sweep field '" + field + "'");
    if (values.empty()) throw std::invalid_argument("empty sweep for '" + field + "'");
  }
  if (kind == StudyKind::Convergence && sweep.size() != 1) {
    throw std::invalid_argument("convergence study sweeps exactly H");
  }
  for (double h : macro_steps()) {
    CosimConfig c = base;
    c.macro_step = h;
    c.validate();
  }
}

std::vector<double> StudySpec::macro_steps() const {
  for (const auto& [field, values] : sweep) {
    if (field == "H") return values;
  }
  return {base.macro_step};
}

double max_state_error(const TrajectoryRecord& cosim, const TrajectoryRecord& reference) {
  if (cosim.exchange.size() != reference.exchange.size()) {
    throw std::invalid_argument("max_state_error: exchange grids differ");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < cosim.exchange.size(); ++j) {
    const auto& a = cosim.exchange[j].x;
    const auto& b = reference.exchange[j].x;
    if (a.size() != b.size()) throw std::invalid_argument("max_state_error: state dimensions differ");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

std::vector<EocRow> convergence_study(const StudySpec& spec, Execution exec) {
  spec.validate();
  const std::vector<double> steps = spec.macro_steps();
  const std::vector<CosimConfig> configs = with_steps(spec.base, steps);
  const std::vector<SweepResult> results = run_sweep(configs, exec);
  const double floor = 100.0 * std::max(spec.base.micro.abs_tol, spec.base.micro.rel_tol);

  std::vector<EocRow> rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EocRow row;
    row.H = steps[i];
    row.eoc = kNaN;
    if (!results[i].record) {
      row.failed = true;
      row.err = std::numeric_limits<double>::infinity();
      row.note = results[i].error;
    } else {
      row.err = max_state_error(*results[i].record, reference_run(configs[i]));
      row.floor_limited = row.err <= floor;
      if (!std::isfinite(row.err)) row.failed = true;
    }
    if (i > 0 && !row.failed && !rows.back().failed) {
      const double ratio = steps[i - 1] / steps[i];
      if (std::abs(ratio - 2.0) < 1e-9) row.eoc = std::log2(rows.back().err / row.err);
      row.non_monotone = row.err > 1.1 * rows.back().err;
    }
    if (row.floor_limited) row.note = "floor-limited";
    rows.push_back(row);
  }
  return rows;
}

std::string_view to_string(EnergyTrend trend) {
  switch (trend) {
    case EnergyTrend::Decaying: return "decaying";
    case EnergyTrend::Bounded: return "bounded";
    case EnergyTrend::Growing: return "growing";
  }
  return "unknown";
}

EnergyTrend classify_energy(double ratio) {
  if (!(ratio <= kGrowingEnergyRatio)) return EnergyTrend::Growing;  // NaN / inf count as growth
  if (ratio < kDecayingEnergyRatio) return EnergyTrend::Decaying;
  return EnergyTrend::Bounded;
}

EnergyTrace energy_trace(const TrajectoryRecord& rec, double macro_step) {
  EnergyTrace tr;
  tr.H = macro_step;
  if (rec.exchange.empty()) throw std::invalid_argument("energy_trace: empty record");
  const double e0 = rec.exchange.front().E;
  for (const auto& r : rec.exchange) {
    tr.t.push_back(r.t);
    tr.E.push_back(r.E);
    tr.ratio.push_back(e0 != 0.0 ? r.E / e0 : kNaN);
  }
  tr.trend = classify_energy(tr.ratio.back());
  return tr;
}

std::vector<EnergyTrace> energy_drift_study(const StudySpec& spec, Execution exec) {
  spec.validate();
  const std::vector<double> steps = spec.macro_steps();
  const std::vector<CosimConfig> configs = with_steps(spec.base, steps);
  const std::vector<SweepResult> results = run_sweep(configs, exec);
  std::vector<EnergyTrace> out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (results[i].record) {
      out.push_back(energy_trace(*results[i].record, steps[i]));
    } else {
      EnergyTrace tr;
      tr.H = steps[i];
      tr.failed = true;
      tr.trend = EnergyTrend::Growing;
      tr.note = results[i].error;
      out.push_back(tr);
    }
  }
  return out;
}

double oscillation_metric(std::span<const double> t, std::span<const double> v, std::span<const double> v_ref) {
  if (t.size() != v.size() || t.size() != v_ref.size() || t.size() < 2) {
    throw std::invalid_argument("oscillation_metric: grid mismatch");
  }
  const double t_mid = 0.5 * (t.front() + t.back());
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_mid) continue;
    const double d = v[i] - v_ref[i];
    sum += d * d;
    ++count;
  }
  return std::sqrt(sum / static_cast<double>(count));
}

double oscillation_metric(const TrajectoryRecord& cosim, const TrajectoryRecord& reference, std::size_t state_index) {
  if (cosim.dense.size() != reference.dense.size()) throw std::invalid_argument("oscillation_metric: grid mismatch");
  std::vector<double> t, v, v_ref;
  for (std::size_t i = 0; i < cosim.dense.size(); ++i) {
    if (cosim.dense[i].t != reference.dense[i].t) throw std::invalid_argument("oscillation_metric: grid mismatch");
    t.push_back(cosim.dense[i].t);
    v.push_back(cosim.dense[i].x.at(state_index));
    v_ref.push_back(reference.dense[i].x.at(state_index));
  }
  return oscillation_metric(t, v, v_ref);
}

std::vector<OscillationRow> oscillation_study(const StudySpec& spec, Execution exec) {
  spec.validate();
  std::vector<OscillationRow> rows;
  for (double h : spec.macro_steps()) {
    CosimConfig base = spec.base;
    base.macro_step = h;
    auto variant = [&](std::string label, bool smoothing, CorrectionPolicy policy) {
      OscillationRow r;
      r.label = std::move(label);
      r.config = base;
      r.config.smoothing = smoothing;
      r.config.policy = policy;
      rows.push_back(std::move(r));
    };
    variant("raw", false, CorrectionPolicy::None);
    variant("raw+classic1", false, CorrectionPolicy::Classic1);
    variant("smoothed", true, CorrectionPolicy::None);
    for (auto p : {CorrectionPolicy::Classic1, CorrectionPolicy::Smooth1, CorrectionPolicy::Smooth2,
                   CorrectionPolicy::Smooth4, CorrectionPolicy::SplitEarly}) {
      variant("smoothed+" + std::string(to_string(p)), true, p);
    }
  }
  std::vector<CosimConfig> configs;
  for (const auto& r : rows) configs.push_back(r.config);
  const std::vector<SweepResult> results = run_sweep(configs, exec);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!results[i].record) {
      rows[i].failed = true;
      rows[i].metric = std::numeric_limits<double>::infinity();
      continue;
    }
    const TrajectoryRecord ref = reference_run(rows[i].config);
    rows[i].metric =
        oscillation_metric(*results[i].record, ref, rows[i].config.model.receiver_velocity_index());
  }
  return rows;
}

namespace {

struct CliOptions {
  std::string model = "spring-mass";
  int ext = 0;
  std::string smoothing = "off";
  std::string bc = "none";
  std::string steps = "0.2";
  double t_end = 10.0;
  double micro_tol = 1e-10;
  int dense = 20;
  std::string out;
  std::string params;
  long seed = 0;
  bool parallel = false;
};

void add_common(CLI::App* app, CliOptions& o) {
  app->add_option("--model", o.model, "spring-mass | double-spring-mass | moving-ground");
  app->add_option("--ext", o.ext, "extrapolation order (0 or 1)");
  app->add_option("--smoothing", o.smoothing, "on | off");
  app->add_option("--bc", o.bc, "none | classic1 | smooth1 | smooth2 | smooth4 | split-early");
  app->add_option("--H", o.steps, "macro step, or a comma-separated list for studies");
  app->add_option("--t-end", o.t_end, "end time");
  app->add_option("--micro-tol", o.micro_tol, "absolute and relative tolerance of the micro integrator");
  app->add_option("--dense", o.dense, "dense output points per macro step");
  app->add_option("--out", o.out, "output CSV path");
  app->add_option("--params", o.params, "model overrides k=v,...");
  app->add_option("--seed", o.seed, "accepted for interface stability; runs are deterministic");
  app->add_flag("--parallel", o.parallel, "run sweep points on OpenMP threads");
}

CosimConfig to_config(const CliOptions& o) {
  CosimConfig c;
  c.model = Model::from_name(o.model, parse_overrides(o.params));
  if (o.ext != 0 && o.ext != 1) throw std::invalid_argument("--ext must be 0 or 1");
  c.ext_order = o.ext;
  if (o.smoothing != "on" && o.smoothing != "off") throw std::invalid_argument("--smoothing must be on or off");
  c.smoothing = o.smoothing == "on";
  c.policy = parse_policy(o.bc);
  c.t_end = o.t_end;
  c.micro.abs_tol = o.micro_tol;
  c.micro.rel_tol = o.micro_tol;
  c.dense_per_step = o.dense;
  c.macro_step = parse_list(o.steps).front();
  return c;
}

void print_flag(std::ostream& out, bool on, const char* name, bool& first) {
  if (!on) return;
  out << (first ? "" : "|") << name;
  first = false;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit co-simulation with smoothing and balance correction"};
  app.require_subcommand(1);
  CliOptions opts;
  std::string study_kind;
  CLI::App* run = app.add_subcommand("run", "single co-simulation run, CSV output");
  add_common(run, opts);
  CLI::App* study = app.add_subcommand("study", "convergence | energy | oscillation study");
  study->add_option("kind", study_kind, "convergence | energy | oscillation")->required();
  add_common(study, opts);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const CosimConfig config = to_config(opts);
    const Execution exec = opts.parallel ? Execution::Parallel : Execution::Serial;
    if (run->parsed()) {
      const TrajectoryRecord rec = run_cosimulation(config);
      for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
      if (opts.out.empty()) {
        write_exchange_csv(out, rec);
      } else {
        write_record(opts.out, rec);
      }
      return 0;
    }

    StudySpec spec;
    spec.base = config;
    spec.sweep = {{"H", parse_list(opts.steps)}};
    std::ostringstream table;
    if (study_kind == "convergence") {
      spec.kind = StudyKind::Convergence;
      table << "H,err,eoc,flags\n";
      for (const auto& r : convergence_study(spec, exec)) {
        table << format_double(r.H) << ',' << format_double(r.err) << ',' << format_double(r.eoc) << ',';
        bool first = true;
        print_flag(table, r.failed, "failed", first);
        print_flag(table, r.floor_limited, "floor-limited", first);
        print_flag(table, r.non_monotone, "non-monotone", first);
        table << '\n';
      }
    } else if (study_kind == "energy") {
      spec.kind = StudyKind::EnergyDrift;
      table << "H,E_end_over_E0,trend\n";
      for (const auto& r : energy_drift_study(spec, exec)) {
        table << format_double(r.H) << ',' << format_double(r.failed ? kNaN : r.ratio.back()) << ','
              << (r.failed ? "failed" : to_string(r.trend)) << '\n';
      }
    } else if (study_kind == "oscillation") {
      spec.kind = StudyKind::Oscillation;
      table << "H,variant,metric\n";
      for (const auto& r : oscillation_study(spec, exec)) {
        table << format_double(r.config.macro_step) << ',' << r.label << ',' << format_double(r.metric) << '\n';
      }
    } else {
      err << "error: unknown study '" << study_kind << "'\n";
      return 2;
    }
    out << table.str();
    if (!opts.out.empty()) {
      std::ofstream f(opts.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + opts.out);
      f << table.str();
    }
    return 0;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cosim
