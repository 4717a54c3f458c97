#include "cosim/master.hpp"

#include <cmath>
#include <exception>
#include <optional>
#include <stdexcept>

#include "cosim/errors.hpp"

namespace cosim {

namespace {

double grid_time(long j, double h) { return static_cast<double>(j) * h; }

std::vector<std::size_t> state_offsets(const SplitSystemSpec& split) {
  std::vector<std::size_t> off;
  std::size_t acc = 0;
  for (const auto& s : split.subsystems) {
    off.push_back(acc);
    acc += s.initial_state.size();
  }
  return off;
}

std::vector<double> channel_values(const SplitSystemSpec& split, const std::vector<std::size_t>& offsets,
                                   std::span<const double> global, double t) {
  std::vector<std::vector<double>> outs;
  for (std::size_t i = 0; i < split.subsystems.size(); ++i) {
    const auto& s = split.subsystems[i];
    std::vector<double> y(s.n_outputs);
    s.output(t, global.subspan(offsets[i], s.initial_state.size()), y);
    outs.push_back(std::move(y));
  }
  std::vector<double> v;
  for (const auto& ch : split.channels) v.push_back(outs[ch.from_subsystem][ch.from_output]);
  return v;
}

void require_finite(std::span<const double> v, double t) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("co-simulation: non-finite state at t=" + std::to_string(t));
  }
}

}  // namespace

long CosimConfig::steps() const {
  if (!(macro_step > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("macro step and t_end must be positive");
  const double ratio = t_end / macro_step;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(static_cast<double>(n) * macro_step - t_end) > 1e-12 * std::max(1.0, t_end)) {
    throw std::invalid_argument("macro step must divide t_end");
  }
  return n;
}

void CosimConfig::validate() const {
  steps();
  if (ext_order != 0 && ext_order != 1) throw std::invalid_argument("extrapolation order must be 0 or 1");
  if (dense_per_step < 1) throw std::invalid_argument("dense points per macro step must be >= 1");
  MicroIntegrator check(micro);
  (void)check;
}

Subsystem::Subsystem(SubsystemSpec spec)
    : spec_(std::move(spec)), state_(spec_.initial_state), accum_(spec_.n_outputs, 0.0) {}

std::vector<double> Subsystem::outputs(double t) const {
  std::vector<double> y(spec_.n_outputs);
  spec_.output(t, state_, y);
  return y;
}

std::vector<std::vector<double>> micro_advance(Subsystem& sub, std::span<const InputRealization> inputs, double t0,
                                               double t1, const MicroIntegrator& integrator,
                                               std::span<const double> sample_times) {
  const SubsystemSpec& spec = sub.spec_;
  if (inputs.size() != spec.n_inputs) throw std::invalid_argument("micro_advance: input count mismatch");
  const std::size_t n = sub.state_.size();
  const std::size_t m = spec.n_outputs;

  std::vector<double> y(n + m, 0.0);
  std::copy(sub.state_.begin(), sub.state_.end(), y.begin());
  std::vector<double> u(spec.n_inputs);
  std::vector<double> out(m);
  auto rhs = [&](double t, std::span<const double> z, std::span<double> dz) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = inputs[k](t);
    spec.derivative(t, z.first(n), u, dz.first(n));
    spec.output(t, z.first(n), out);
    for (std::size_t k = 0; k < m; ++k) dz[n + k] = out[k];
  };

  std::vector<std::vector<double>> samples;
  double t = t0;
  for (double ts : sample_times) {
    if (!(ts > t) || !(ts < t1)) throw std::invalid_argument("micro_advance: sample times must be increasing in (t0, t1)");
    integrator.advance(rhs, y, t, ts, sub.step_hint);
    samples.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    t = ts;
  }
  integrator.advance(rhs, y, t, t1, sub.step_hint);
  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), sub.state_.begin());
  std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), sub.accum_.begin());
  return samples;
}

TrajectoryRecord run_cosimulation(const CosimConfig& config) {
  config.validate();
  const long n_steps = config.steps();
  const double h = config.macro_step;
  const Model& model = config.model;
  const SplitSystemSpec split = model.split();
  const std::size_t m = split.channels.size();
  const MicroIntegrator integrator(config.micro);

  std::vector<Subsystem> subs;
  for (const auto& s : split.subsystems) subs.emplace_back(s);

  // channel feeding input i of subsystem s
  std::vector<std::vector<std::size_t>> feeder(subs.size());
  for (std::size_t s = 0; s < subs.size(); ++s) feeder[s].assign(subs[s].spec().n_inputs, 0);
  for (std::size_t k = 0; k < m; ++k) feeder[split.channels[k].to_subsystem][split.channels[k].to_input] = k;

  auto global_state = [&] {
    std::vector<double> x;
    for (const auto& s : subs) x.insert(x.end(), s.state().begin(), s.state().end());
    return x;
  };
  auto exchange_values = [&](double t) {
    std::vector<double> v(m);
    std::vector<std::vector<double>> outs;
    for (const auto& s : subs) outs.push_back(s.outputs(t));
    for (std::size_t k = 0; k < m; ++k) v[k] = outs[split.channels[k].from_subsystem][split.channels[k].from_output];
    return v;
  };

  TrajectoryRecord rec;
  rec.n_states = split.state_dim();
  rec.n_channels = m;
  rec.balance.resize(m);

  std::vector<std::vector<SamplePoint>> history(m);
  std::vector<std::optional<ExtrapolantSegment>> previous(m);
  std::vector<BalanceLedger> ledgers(m);

  {
    ExchangeRow row;
    row.t = 0.0;
    row.x = global_state();
    row.y = exchange_values(0.0);
    row.dE.assign(m, 0.0);
    row.E = model.energy(0.0, row.x);
    row.E_ref = model.energy(0.0, model.analytic_reference(0.0));
    for (std::size_t k = 0; k < m; ++k) history[k].push_back({0.0, row.y[k]});
    rec.exchange.push_back(std::move(row));
  }

  std::vector<InputRealization> realizations;
  for (long j = 1; j <= n_steps; ++j) {
    const double a = grid_time(j - 1, h);
    const double b = grid_time(j, h);
    const Interval interval{a, b};

    realizations.clear();
    std::vector<double> ext_integral(m);
    for (std::size_t k = 0; k < m; ++k) {
      if (history[k].back().t > a) throw std::logic_error("exchange causality violated");
      const ExtrapolantSegment base = extrapolate(history[k], config.ext_order, interval);
      ext_integral[k] = base.integral();
      const bool blend = config.smoothing && previous[k].has_value();
      std::optional<ExtrapolantSegment> prev;
      if (blend) prev = prolong(*previous[k], interval);
      double switch_part = 0.0;
      if (config.policy == CorrectionPolicy::SplitEarly && blend) {
        // Known before the interval is integrated, so refeed starts now.
        switch_part = ext_integral[k] - realize(&*prev, base, true, {}, interval).integrate(false);
        ledgers[k].schedule_switch_part(switch_part, a, h, static_cast<int>(j));
      }
      rec.balance[k].switch_part.push_back(switch_part);
      realizations.push_back(
          realize(blend ? &*prev : nullptr, base, blend, ledgers[k].active_on(a, b), interval));
      previous[k] = base;
    }
    if (config.keep_realizations) rec.realized.push_back(realizations);
    if (j == 1) {
      for (std::size_t k = 0; k < m; ++k) rec.exchange.front().u_used.push_back(realizations[k](a));
    }

    std::vector<double> sample_times;
    for (int i = 1; i < config.dense_per_step; ++i) sample_times.push_back(a + h * i / config.dense_per_step);

    std::vector<std::vector<InputRealization>> inputs(subs.size());
    for (std::size_t s = 0; s < subs.size(); ++s) {
      for (std::size_t k : feeder[s]) inputs[s].push_back(realizations[k]);
    }

    std::vector<std::vector<std::vector<double>>> samples(subs.size());
    std::vector<std::exception_ptr> failures(subs.size());
    const std::vector<double> x_start = global_state();
    const long n_subs = static_cast<long>(subs.size());
#pragma omp parallel for schedule(static) if (config.parallel_subsystems)
    for (long s = 0; s < n_subs; ++s) {
      try {
        samples[s] = micro_advance(subs[s], inputs[s], a, b, integrator, sample_times);
      } catch (...) {
        failures[s] = std::current_exception();
      }
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }

    for (int i = 0; i < config.dense_per_step; ++i) {
      DenseRow row;
      row.t = i == 0 ? a : sample_times[i - 1];
      if (i == 0) {
        row.x = x_start;
      } else {
        for (std::size_t s = 0; s < subs.size(); ++s) {
          row.x.insert(row.x.end(), samples[s][i - 1].begin(), samples[s][i - 1].end());
        }
      }
      for (std::size_t k = 0; k < m; ++k) {
        row.u_real.push_back(realizations[k](row.t));
        row.corr.push_back(realizations[k].correction(row.t));
      }
      rec.dense.push_back(std::move(row));
    }

    ExchangeRow row;
    row.t = b;
    row.x = global_state();
    require_finite(row.x, b);
    row.y = exchange_values(b);
    for (std::size_t k = 0; k < m; ++k) {
      const Channel& ch = split.channels[k];
      const double true_int = subs[ch.from_subsystem].accumulators()[ch.from_output];
      const double used = realizations[k].integrate(false);
      const BalanceError err = split_error(true_int, ext_integral[k], used, static_cast<int>(j));
      ledgers[k].schedule(err, b, h, config.policy);
      ChannelBalance& bal = rec.balance[k];
      bal.true_integral.push_back(true_int);
      bal.used_integral.push_back(used);
      bal.delivered.push_back(realizations[k].correction_integral());
      row.dE.push_back(err.total);
      row.u_used.push_back(realizations[k](b));
      history[k].push_back({b, row.y[k]});
    }
    row.E = model.energy(b, row.x);
    row.E_ref = model.energy(b, model.analytic_reference(b));
    rec.exchange.push_back(std::move(row));
  }

  {
    DenseRow row;
    row.t = grid_time(n_steps, h);
    row.x = global_state();
    for (std::size_t k = 0; k < m; ++k) {
      row.u_real.push_back(realizations[k](row.t));
      row.corr.push_back(realizations[k].correction(row.t));
    }
    rec.dense.push_back(std::move(row));
  }

  const double t_end = grid_time(n_steps, h);
  for (std::size_t k = 0; k < m; ++k) {
    rec.balance[k].scheduled = ledgers[k].scheduled();
    rec.balance[k].closure = ledgers[k].closure_report(t_end);
    std::size_t crossing = 0;
    for (const auto& e : ledgers[k].entries()) crossing += e.shape.t_end() > t_end ? 1 : 0;
    if (crossing > 0) {
      rec.warnings.push_back("channel " + std::to_string(k) + ": " + std::to_string(crossing) +
                             " correction(s) extend past t_end; residual reported, not flushed");
    }
  }
  return rec;
}

TrajectoryRecord reference_run(const CosimConfig& config) {
  config.validate();
  const long n_steps = config.steps();
  const double h = config.macro_step;
  const Model& model = config.model;
  const SplitSystemSpec split = model.split();
  const auto offsets = state_offsets(split);
  const std::size_t m = split.channels.size();

  TrajectoryRecord rec;
  rec.n_states = model.dim();
  rec.n_channels = m;
  rec.balance.resize(m);

  for (long j = 0; j <= n_steps; ++j) {
    const double t = grid_time(j, h);
    ExchangeRow row;
    row.t = t;
    row.x = model.analytic_reference(t);
    row.y = channel_values(split, offsets, row.x, t);
    row.u_used = row.y;
    row.dE.assign(m, 0.0);
    row.E = model.energy(t, row.x);
    row.E_ref = row.E;
    rec.exchange.push_back(std::move(row));

    const int per_step = j < n_steps ? config.dense_per_step : 1;
    for (int i = 0; i < per_step; ++i) {
      DenseRow d;
      d.t = i == 0 ? t : t + h * i / config.dense_per_step;
      d.x = model.analytic_reference(d.t);
      d.u_real = channel_values(split, offsets, d.x, d.t);
      d.corr.assign(m, 0.0);
      rec.dense.push_back(std::move(d));
    }
  }
  return rec;
}

}  // namespace cosim
