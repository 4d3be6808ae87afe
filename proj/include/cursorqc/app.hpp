#pragma once

// Scenario runner behind the command-line tool: configuration, CSV emission
// and the self-validation suite.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cursorqc/cursor_kernel.hpp"
#include "cursorqc/machine.hpp"
#include "cursorqc/measurement.hpp"
#include "cursorqc/qubit_grover.hpp"
#include "cursorqc/random.hpp"

namespace cursorqc::app {

enum class Mode { grover, custom, validate };
enum class Emission { bloch, entropy, success, collapse, energy, variance };

inline constexpr std::array<Emission, 6> kAllEmissions = {Emission::bloch,   Emission::entropy,
                                                          Emission::success, Emission::collapse,
                                                          Emission::energy,  Emission::variance};

inline std::string_view emission_name(Emission e) {
  switch (e) {
    case Emission::bloch: return "bloch";
    case Emission::entropy: return "entropy";
    case Emission::success: return "success";
    case Emission::collapse: return "collapse";
    case Emission::energy: return "energy";
    case Emission::variance: return "variance";
  }
  return "";
}

inline std::string_view emission_file(Emission e) {
  switch (e) {
    case Emission::bloch: return "bloch.csv";
    case Emission::entropy: return "entropy.csv";
    case Emission::success: return "success.csv";
    case Emission::collapse: return "collapse_q.csv";
    case Emission::energy: return "energy.csv";
    case Emission::variance: return "variance.csv";
  }
  return "";
}

struct RunConfig {
  Mode mode = Mode::grover;
  std::optional<unsigned> mu;
  std::optional<double> s, theta, alpha;
  double lambda = 1.0;
  std::optional<double> t_max;  // default 2 s / lambda
  // Sampling step of the emitted time series; in validate mode, the RK4 step
  // of the oracle integrations.
  std::optional<double> dt;
  std::optional<double> tau;  // default: optimal_tau
  std::filesystem::path out_dir = ".";
  std::set<Emission> emit;  // empty: everything
};

inline constexpr double kDefaultSampleStep = 0.5;
inline constexpr double kDefaultOdeStep = 0.005;
inline constexpr unsigned kDefaultValidateMu = 5;
inline constexpr std::size_t kMaxSites = 4097;

namespace detail {

inline std::string trim(std::string_view v) {
  const auto b = v.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = v.find_last_not_of(" \t\r\n");
  return std::string(v.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || !std::isfinite(out))
    throw std::invalid_argument("option " + key + ": not a number: '" + value + "'");
  return out;
}

}  // namespace detail

inline Mode parse_mode(const std::string& v) {
  if (v == "grover") return Mode::grover;
  if (v == "custom") return Mode::custom;
  if (v == "validate") return Mode::validate;
  throw std::invalid_argument("unknown mode '" + v + "' (expected grover, custom or validate)");
}

inline Emission parse_emission(const std::string& v) {
  for (auto e : kAllEmissions)
    if (emission_name(e) == v) return e;
  throw std::invalid_argument("unknown emission '" + v +
                              "' (expected bloch, entropy, success, collapse, energy or variance)");
}

/// Applies one `key=value` setting. Keys match the long command-line flags
/// without dashes prefix; '_' and '-' are interchangeable.
inline void apply_setting(RunConfig& cfg, std::string key, const std::string& raw) {
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string value = detail::trim(raw);
  if (key == "mode") {
    cfg.mode = parse_mode(value);
  } else if (key == "mu") {
    const double m = detail::parse_double(key, value);
    if (m < 1 || m != std::floor(m) || m > 30) throw std::invalid_argument("option mu: must be an integer in [1, 30]");
    cfg.mu = static_cast<unsigned>(m);
  } else if (key == "s") {
    cfg.s = detail::parse_double(key, value);
  } else if (key == "theta") {
    cfg.theta = detail::parse_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = detail::parse_double(key, value);
  } else if (key == "lambda") {
    cfg.lambda = detail::parse_double(key, value);
  } else if (key == "t-max") {
    cfg.t_max = detail::parse_double(key, value);
  } else if (key == "dt") {
    cfg.dt = detail::parse_double(key, value);
  } else if (key == "tau") {
    cfg.tau = detail::parse_double(key, value);
  } else if (key == "out-dir") {
    cfg.out_dir = value;
  } else if (key == "emit") {
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::trim(item);
      if (!item.empty()) cfg.emit.insert(parse_emission(item));
    }
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
}

/// key=value per line; blank lines and lines starting with '#' are ignored.
inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, detail::trim(t.substr(0, eq)), t.substr(eq + 1));
  }
}

inline void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

/// The qubit model a (checked) config describes.
inline QubitExample model_of(const RunConfig& cfg) {
  if (cfg.mode == Mode::custom) {
    return qubit_example(static_cast<std::size_t>(*cfg.s), *cfg.theta, *cfg.alpha, cfg.lambda);
  }
  return grover_params(cfg.mu.value_or(kDefaultValidateMu), cfg.lambda);
}

/// Throws std::invalid_argument describing the first violated rule.
inline void check_config(const RunConfig& cfg) {
  using cursorqc::detail::require;
  require(cfg.lambda > 0.0, "lambda must be > 0");
  if (cfg.mode == Mode::grover) {
    require(cfg.mu.has_value(), "grover mode requires --mu");
    require(grover_params(*cfg.mu).s <= kMaxSites, "mu must be <= 12 (at most 4097 cursor sites)");
    require(!cfg.s && !cfg.theta && !cfg.alpha, "grover mode does not accept --s, --theta or --alpha");
  } else if (cfg.mode == Mode::custom) {
    require(cfg.s && cfg.theta && cfg.alpha, "custom mode requires --s, --theta and --alpha");
    require(!cfg.mu, "custom mode does not accept --mu");
    require(*cfg.s >= 1.0 && *cfg.s == std::floor(*cfg.s) && *cfg.s <= double(kMaxSites),
            "s must be an integer in [1, " + std::to_string(kMaxSites) + "]");
  } else {
    require(!cfg.s && !cfg.theta && !cfg.alpha, "validate mode does not accept --s, --theta or --alpha");
    require(!cfg.dt || *cfg.dt > 0.0, "dt must be > 0");
    require(!cfg.mu || grover_params(*cfg.mu).s <= kMaxSites, "mu must be <= 12 (at most 4097 cursor sites)");
    return;
  }
  const double s = cfg.mode == Mode::custom ? *cfg.s : static_cast<double>(grover_params(*cfg.mu).s);
  const double t_max = cfg.t_max.value_or(2.0 * s / cfg.lambda);
  const double dt = cfg.dt.value_or(kDefaultSampleStep);
  require(t_max > 0.0, "t-max must be > 0");
  require(dt > 0.0 && dt <= t_max, "dt must satisfy 0 < dt <= t-max");
  require(t_max / dt <= 1e7, "t-max/dt yields too many samples");
  if (cfg.tau) require(*cfg.tau >= 0.0, "tau must be >= 0");
}

/// Fixed 12-significant-digit rendering.
inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::vector<double> sample_times(double t_max, double dt) {
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12) + 1e-9));
  std::vector<double> ts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) ts[i] = static_cast<double>(i) * dt;
  return ts;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << header << '\n';
  }

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("error while writing " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Executes a grover/custom scenario and writes the requested CSVs.
/// Returns 0 on success; on failure writes a message to `err` and returns 1.
inline int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    check_config(cfg);
    if (cfg.mode == Mode::validate) throw std::invalid_argument("run: validate mode must go through validate()");
    const QubitExample model = model_of(cfg);
    const auto spec = build_spectrum(model.s, model.lambda);
    const double t_max = cfg.t_max.value_or(2.0 * static_cast<double>(model.s) / model.lambda);
    const double dt = cfg.dt.value_or(kDefaultSampleStep);
    const auto times = sample_times(t_max, dt);

    std::set<Emission> emit = cfg.emit;
    if (emit.empty()) emit.insert(kAllEmissions.begin(), kAllEmissions.end());

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.out_dir))
      throw std::runtime_error("cannot create output directory " + cfg.out_dir.string());

    const bool needs_series = emit.count(Emission::bloch) || emit.count(Emission::entropy) ||
                              emit.count(Emission::success) || emit.count(Emission::variance);
    if (needs_series) {
      std::optional<CsvWriter> bloch, entropy, success, variance;
      const auto open = [&](Emission e, std::optional<CsvWriter>& w, std::string_view header) {
        if (emit.count(e)) w.emplace(cfg.out_dir / emission_file(e), header);
      };
      open(Emission::bloch, bloch, "t,s1,s3,r,gamma");
      open(Emission::entropy, entropy, "t,S_nats");
      open(Emission::success, success, "t,p_target,p_undesired");
      open(Emission::variance, variance, "t,varQ");
      for (double t : times) {
        const auto a = amplitude(spec, t);
        const auto b = bloch_at(model, a);
        if (bloch) bloch->row({num(t), num(b.s1), num(b.s3), num(b.r()), num(b.gamma())});
        if (entropy) entropy->row({num(t), num(entropy_closed(b))});
        if (success) success->row({num(t), num(0.5 * (1.0 + b.s3)), num(0.5 * (1.0 - b.s3))});
        if (variance) variance->row({num(t), num(position_variance(a))});
      }
      for (auto* w : {&bloch, &entropy, &success, &variance})
        if (*w) (*w)->close();
    }

    if (emit.count(Emission::collapse) || emit.count(Emission::energy)) {
      double tau = 0.0;
      if (cfg.tau) {
        tau = *cfg.tau;
      } else {
        const auto opt = optimal_tau(model, std::min(0.05, 0.1 / model.lambda));
        tau = opt.tau;
        log << "tau=" << num(opt.tau) << " p_max=" << num(opt.p_max) << '\n';
      }
      const auto state = evolve(qubit_program(model), initial_register(model), spec, tau);
      const auto outcomes = collapse(state);
      const auto b = bloch_at(model, state.amplitudes);
      log << "S(tau)=" << num(entropy_closed(b)) << " nats, P(outcome 1)=" << num(outcomes[0].probability)
          << ", P(outcome 0)=" << num(outcomes[1].probability)
          << ", Landauer heat per machine at 300 K=" << num(landauer_cost(entropy_closed(b), 1, 300.0)) << " J\n";
      if (emit.count(Emission::collapse)) {
        const auto [p1, p2] = cursor_position_distributions(outcomes);
        CsvWriter w(cfg.out_dir / emission_file(Emission::collapse), "x,P1,P2");
        for (std::size_t x = 0; x < p1.size(); ++x) w.row({std::to_string(x + 1), num(p1[x]), num(p2[x])});
        w.close();
      }
      if (emit.count(Emission::energy)) {
        const auto basis = machine_energy_basis(model);
        const auto pre = energy_distribution(state.full_vector(), basis);
        const std::vector<double> zeros(model.s, 0.0);
        const auto dist = [&](const CollapseOutcome& o) {
          return o.present ? energy_distribution(o.machine_vector, basis).probabilities : zeros;
        };
        const auto p1 = dist(outcomes[0]);
        const auto p2 = dist(outcomes[1]);
        CsvWriter w(cfg.out_dir / emission_file(Emission::energy), "k,E_k,p_pre,p1,p2");
        for (std::size_t k = 0; k < model.s; ++k)
          w.row({std::to_string(k + 1), num(pre.energies[k]), num(pre.probabilities[k]), num(p1[k]), num(p2[k])});
        w.close();
      }
    }
    for (auto e : emit) log << "wrote " << (cfg.out_dir / emission_file(e)).string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

/// Runs the oracle cross-checks at the configured mu (default 5). The
/// configured dt is the RK4 step of the integrations.
inline ValidationReport validate(const RunConfig& cfg) {
  check_config(cfg);
  const auto p = grover_params(cfg.mu.value_or(kDefaultValidateMu), cfg.lambda);
  const double ode_dt = cfg.dt.value_or(kDefaultOdeStep / cfg.lambda);
  const auto spec = build_spectrum(p.s, p.lambda);
  const auto prog = qubit_program(p);
  const CVector r1 = initial_register(p);
  const double s = static_cast<double>(p.s);
  const double t_end = 2.0 * s / p.lambda;

  ValidationReport report;
  const auto check = [&](std::string name, double tol, const std::function<double()>& body) {
    CheckResult r{std::move(name), 0.0, tol, false, {}};
    try {
      r.max_error = body();
      r.passed = r.max_error < tol;
    } catch (const std::exception& e) {
      r.max_error = std::numeric_limits<double>::infinity();
      r.note = e.what();
    }
    report.checks.push_back(std::move(r));
  };

  check("ode_closed_form_vs_rk4", 1e-8, [&] {
    const auto times = sample_times(t_end, 0.5 / p.lambda);
    const double coupling[] = {p.lambda};
    const auto ode = amplitude_ode_sweep(p.s, coupling, times, ode_dt);
    double err = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      err = std::max(err, (amplitude(spec, times[i]).values - ode[i].values).cwiseAbs().maxCoeff());
    return err;
  });

  check("amplitude_normalization", 1e-12, [&] {
    double err = 0.0;
    for (double t : sample_times(t_end, 0.5 / p.lambda))
      err = std::max(err, std::abs(amplitude(spec, t).values.squaredNorm() - 1.0));
    return err;
  });

  const std::vector<double> probe_times = {0.25 * s / p.lambda, 0.5 * s / p.lambda, s / p.lambda};
  check("ode_product_form_vs_full_space", 1e-8, [&] {
    const auto full = evolve_oracle_sweep(prog, r1, p.lambda, probe_times, ode_dt);
    double err = 0.0;
    for (std::size_t i = 0; i < probe_times.size(); ++i)
      err = std::max(err, 1.0 - fidelity(evolve(prog, r1, spec, probe_times[i]).full_vector(), full[i]));
    return err;
  });

  check("ode_product_form_vs_full_space_random_d3", 1e-8, [&] {
    std::mt19937_64 rng(20240601);
    const auto rprog = random_program(3, p.s - 1, rng);
    const CVector rr1 = random_unit_vector(3, rng);
    const auto full = evolve_oracle_sweep(rprog, rr1, p.lambda, probe_times, ode_dt);
    double err = 0.0;
    for (std::size_t i = 0; i < probe_times.size(); ++i)
      err = std::max(err, 1.0 - fidelity(evolve(rprog, rr1, spec, probe_times[i]).full_vector(), full[i]));
    return err;
  });

  check("ode_energy_conservation", 1e-8, [&] {
    const auto full = evolve_oracle_sweep(prog, r1, p.lambda, probe_times, ode_dt);
    const double e0 = mean_energy(prog, p.lambda, evolve(prog, r1, spec, 0.0).full_vector());
    double err = 0.0;
    for (const auto& v : full) err = std::max(err, std::abs(mean_energy(prog, p.lambda, v) - e0));
    return err;
  });

  const auto tau = optimal_tau(p, std::min(0.05, 0.1 / p.lambda)).tau;

  check("entropy_register_vs_cursor", 1e-9, [&] {
    double err = 0.0;
    for (double t : sample_times(t_end, t_end / 20.0)) {
      const auto m = evolve(prog, r1, spec, t);
      err = std::max(err, std::abs(von_neumann_entropy(register_density(m)) - von_neumann_entropy(cursor_density(m))));
    }
    return err;
  });

  check("schmidt_reconstruction", 1e-9, [&] {
    const auto m = evolve(prog, r1, spec, tau);
    return (schmidt(m).reconstruct() - m.full_vector()).norm();
  });

  check("bloch_closed_form_vs_density", 1e-10, [&] {
    double err = 0.0;
    for (double t : sample_times(t_end, t_end / 20.0)) {
      const auto m = evolve(prog, r1, spec, t);
      const auto a = bloch_at(p, m.amplitudes);
      const auto b = bloch_of(register_density(m));
      err = std::max({err, std::abs(a.s1 - b.s1), std::abs(a.s2 - b.s2), std::abs(a.s3 - b.s3)});
    }
    return err;
  });

  check("entropy_closed_vs_eigen", 1e-10, [&] {
    double err = 0.0;
    for (double t : sample_times(t_end, t_end / 20.0)) {
      const auto m = evolve(prog, r1, spec, t);
      err = std::max(err, std::abs(entropy_closed(bloch_at(p, m.amplitudes)) - von_neumann_entropy(register_density(m))));
    }
    return err;
  });

  check("grover_factorization", 1e-12, [&] {
    const auto [a, b] = grover_factors(p);
    return (b * a - step_unitary(p)).cwiseAbs().maxCoeff();
  });

  const auto basis = machine_energy_basis(p);
  check("energy_eigen_residual", 1e-10, [&] {
    double err = 0.0;
    for (Eigen::Index c = 0; c < basis.vectors.cols(); ++c) {
      const CVector v = basis.vectors.col(c);
      err = std::max(err, (hamiltonian_matvec(prog, p.lambda, v) - basis.energies(c / 2) * v).norm());
    }
    return err;
  });

  check("energy_basis_completeness", 1e-10, [&] {
    const auto n = basis.vectors.rows();
    return (basis.vectors * basis.vectors.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  });

  check("position_mixture_identity", 1e-10, [&] {
    const auto m = evolve(prog, r1, spec, tau);
    const auto outcomes = collapse(m);
    const auto [p1, p2] = cursor_position_distributions(outcomes);
    const auto pc = position_distribution(m.amplitudes);
    double err = 0.0;
    for (std::size_t x = 0; x < pc.size(); ++x)
      err = std::max(err, std::abs(outcomes[0].probability * p1[x] + outcomes[1].probability * p2[x] - pc[x]));
    return err;
  });

  check("pre_measurement_energy_distribution", 1e-10, [&] {
    double err = 0.0;
    for (double t : {0.0, tau}) {
      const auto dist = energy_distribution(evolve(prog, r1, spec, t).full_vector(), basis);
      for (std::size_t k = 0; k < p.s; ++k) {
        const double v = spec.modes(static_cast<Eigen::Index>(k), 0);
        err = std::max(err, std::abs(dist.probabilities[k] - v * v));
      }
    }
    return err;
  });

  check("collapse_probabilities_sum", 1e-12, [&] {
    const auto outcomes = collapse(evolve(prog, r1, spec, tau));
    return std::abs(outcomes[0].probability + outcomes[1].probability - 1.0);
  });

  return report;
}

inline void print_report(const ValidationReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " max_error=" << num(c.max_error)
        << " tolerance=" << num(c.tolerance);
    if (!c.note.empty()) out << " (" << c.note << ")";
    out << '\n';
  }
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](auto& c) { return !c.passed; });
  out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
}

}  // namespace cursorqc::app
