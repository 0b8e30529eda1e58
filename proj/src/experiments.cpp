#include "molhop/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "molhop/optimizer.hpp"

namespace molhop {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_array(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw std::invalid_argument("config key '" + key + "': expected a bracketed list");
  }
  std::vector<double> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

Scheme parse_scheme(const std::string& value) {
  if (value == "mm") return Scheme::MultiMolecule;
  if (value == "2m") return Scheme::TwoMolecule;
  if (value == "sm") return Scheme::SingleMolecule;
  throw std::invalid_argument("config key 'scheme': expected mm|2m|sm, got '" + value + "'");
}

Protocol parse_protocol(const std::string& value) {
  if (value == "fd") return Protocol::FD;
  if (value == "fd-a") return Protocol::FD_A;
  if (value == "fd-a-si") return Protocol::FD_A_SI;
  if (value == "hd") return Protocol::HD;
  if (value == "fd-a-bi-si") return Protocol::FD_A_BI_SI;
  if (value == "hd-a-bi") return Protocol::HD_A_BI;
  throw std::invalid_argument("config key 'protocol': unknown protocol '" + value + "'");
}

std::string scheme_key(Scheme s) {
  switch (s) {
    case Scheme::MultiMolecule: return "mm";
    case Scheme::TwoMolecule: return "2m";
    case Scheme::SingleMolecule: return "sm";
  }
  return "mm";
}

std::string protocol_key(Protocol p) {
  switch (p) {
    case Protocol::FD: return "fd";
    case Protocol::FD_A: return "fd-a";
    case Protocol::FD_A_SI: return "fd-a-si";
    case Protocol::HD: return "hd";
    case Protocol::FD_A_BI_SI: return "fd-a-bi-si";
    case Protocol::HD_A_BI: return "hd-a-bi";
  }
  return "fd";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "name") spec.name = value;
  else if (key == "scheme") spec.scheme = parse_scheme(value);
  else if (key == "protocol") spec.protocol = parse_protocol(value);
  else if (key == "topology.x_d") spec.x_d_m = parse_double(key, value);
  else if (key == "topology.relays") spec.relay_count = static_cast<int>(parse_int(key, value));
  else if (key == "topology.radius") spec.radius_m = parse_double(key, value);
  else if (key == "channel.diffusion") spec.diffusion_m2_s = parse_double(key, value);
  else if (key == "timing.t") spec.bit_interval_s = parse_double(key, value);
  else if (key == "timing.m") spec.samples_per_interval = static_cast<int>(parse_int(key, value));
  else if (key == "timing.t0") spec.sample_spacing_s = parse_double(key, value);
  else if (key == "source.p1") spec.p1 = parse_double(key, value);
  else if (key == "source.length") spec.length = static_cast<int>(parse_int(key, value));
  else if (key == "emission.budget") spec.budget = parse_double(key, value);
  else if (key == "emission.split") spec.split_budget = parse_bool(key, value);
  else if (key == "detection.xi") spec.fixed_threshold = parse_double(key, value);
  else if (key == "detection.auto_xi") {
    if (value == "none") spec.auto_threshold = AutoThreshold::None;
    else if (value == "hop") spec.auto_threshold = AutoThreshold::PerHop;
    else if (value == "net") spec.auto_threshold = AutoThreshold::Network;
    else throw std::invalid_argument("config key 'detection.auto_xi': expected none|hop|net");
  }
  else if (key == "sweep.variable") {
    if (value != "xi" && value != "na" && value != "q" && value != "t") {
      throw std::invalid_argument("config key 'sweep.variable': expected xi|na|q|t");
    }
    spec.sweep_variable = value;
  }
  else if (key == "sweep.values") spec.sweep_values = parse_array(key, value);
  else if (key == "engine") {
    if (value == "analytical") spec.engine = EngineChoice::Analytical;
    else if (value == "sim") spec.engine = EngineChoice::Simulation;
    else if (value == "both") spec.engine = EngineChoice::Both;
    else throw std::invalid_argument("config key 'engine': expected analytical|sim|both");
  }
  else if (key == "trials") spec.trials = static_cast<int>(parse_int(key, value));
  else if (key == "histories") spec.histories = static_cast<int>(parse_int(key, value));
  else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "workers") spec.workers = static_cast<int>(parse_int(key, value));
  else if (key == "output.dir") spec.output_dir = value;
  else if (key == "artifact.version" || key.rfind("row.", 0) == 0) {
    // manifest metadata; accepted so manifests reload as configs
  }
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.sweep_variable.empty()) throw std::invalid_argument("missing required key 'sweep.variable'");
  if (spec.sweep_values.empty()) throw std::invalid_argument("missing required key 'sweep.values' (non-empty list)");
  if (spec.p1 < 0 || spec.p1 > 1) throw std::invalid_argument("config key 'source.p1': out of range [0,1]");
  if (spec.length < 1) throw std::invalid_argument("config key 'source.length': must be >= 1");
  if (spec.trials < 1) throw std::invalid_argument("config key 'trials': must be >= 1");
  if (spec.histories < 1) throw std::invalid_argument("config key 'histories': must be >= 1");
  if (spec.budget < 0) throw std::invalid_argument("config key 'emission.budget': must be >= 0");
  if (spec.relay_count < 0) throw std::invalid_argument("config key 'topology.relays': must be >= 0");
  if (spec.x_d_m <= 0) throw std::invalid_argument("config key 'topology.x_d': must be > 0");
  if (spec.radius_m <= 0) throw std::invalid_argument("config key 'topology.radius': must be > 0");
  if (spec.diffusion_m2_s <= 0) throw std::invalid_argument("config key 'channel.diffusion': must be > 0");
  if (spec.fixed_threshold < 1) throw std::invalid_argument("config key 'detection.xi': must be >= 1");
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_key(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate_spec(spec);
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string manifest_text(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n";
  out << "scheme = " << scheme_key(spec.scheme) << "\n";
  out << "protocol = " << protocol_key(spec.protocol) << "\n";
  out << "topology.x_d = " << fmt(spec.x_d_m) << "\n";
  out << "topology.relays = " << spec.relay_count << "\n";
  out << "topology.radius = " << fmt(spec.radius_m) << "\n";
  out << "channel.diffusion = " << fmt(spec.diffusion_m2_s) << "\n";
  out << "timing.t = " << fmt(spec.bit_interval_s) << "\n";
  out << "timing.m = " << spec.samples_per_interval << "\n";
  out << "timing.t0 = " << fmt(spec.sample_spacing_s) << "\n";
  out << "source.p1 = " << fmt(spec.p1) << "\n";
  out << "source.length = " << spec.length << "\n";
  out << "emission.budget = " << fmt(spec.budget) << "\n";
  out << "emission.split = " << (spec.split_budget ? "true" : "false") << "\n";
  out << "detection.xi = " << fmt(spec.fixed_threshold) << "\n";
  out << "detection.auto_xi = "
      << (spec.auto_threshold == AutoThreshold::None
              ? "none"
              : spec.auto_threshold == AutoThreshold::PerHop ? "hop" : "net")
      << "\n";
  out << "sweep.variable = " << spec.sweep_variable << "\n";
  out << "sweep.values = [";
  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    if (i) out << ", ";
    out << fmt(spec.sweep_values[i]);
  }
  out << "]\n";
  out << "engine = "
      << (spec.engine == EngineChoice::Analytical
              ? "analytical"
              : spec.engine == EngineChoice::Simulation ? "sim" : "both")
      << "\n";
  out << "trials = " << spec.trials << "\n";
  out << "histories = " << spec.histories << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "workers = " << spec.workers << "\n";
  out << "output.dir = " << spec.output_dir << "\n";
  out << "artifact.version = " << kVersion << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].selected_threshold) {
      out << "row." << i << ".selected_xi = " << fmt(*rows[i].selected_threshold) << "\n";
    }
    if (rows[i].failed) out << "row." << i << ".failed = true\n";
  }
  return out.str();
}

DerivedConfigs derive_configs(const ExperimentSpec& spec, double sweep_value) {
  ExperimentSpec s = spec;
  if (spec.sweep_variable == "xi") s.fixed_threshold = sweep_value;
  else if (spec.sweep_variable == "na") s.budget = sweep_value;
  else if (spec.sweep_variable == "q") s.relay_count = static_cast<int>(std::llround(sweep_value));
  else if (spec.sweep_variable == "t") s.bit_interval_s = sweep_value;

  DerivedConfigs cfg;
  cfg.topology = build_topology(s.x_d_m, s.relay_count, s.radius_m, s.scheme, s.diffusion_m2_s);
  cfg.timing = {s.bit_interval_s, s.samples_per_interval, s.sample_spacing_s};
  validate(cfg.timing);
  cfg.protocol.scheme = s.scheme;
  // a network without relays degenerates to the direct link; protocols
  // with relay-side adaptation reduce to plain transmission there
  cfg.protocol.protocol = s.relay_count == 0 && s.protocol != Protocol::HD &&
                                  s.protocol != Protocol::HD_A_BI
                              ? Protocol::FD
                              : s.protocol;
  if (s.relay_count == 0 && s.protocol == Protocol::HD_A_BI) cfg.protocol.protocol = Protocol::HD;
  if (cfg.protocol.protocol == Protocol::FD_A && s.scheme == Scheme::TwoMolecule &&
      s.relay_count == 0) {
    cfg.protocol.protocol = Protocol::FD;
  }
  cfg.protocol.fixed_threshold = s.fixed_threshold;
  const long long budget = std::llround(s.budget);
  cfg.protocol.molecules_per_bit =
      s.split_budget ? split_budget(budget, s.relay_count)
                     : std::vector<long long>(s.relay_count + 1, budget);
  validate(cfg.protocol);
  cfg.source.p1 = s.p1;
  cfg.source.length = s.length;
  cfg.source.seed = s.seed;
  return cfg;
}

double analytical_error(const DerivedConfigs& cfg, int histories, std::uint64_t seed,
                        int workers) {
  AnalysisConfig ac;
  ac.topology = cfg.topology;
  ac.timing = cfg.timing;
  ac.protocol = cfg.protocol;
  ac.source = cfg.source;
  AnalysisEngine engine(ac);
  return expected_error(engine, histories, seed, workers).end_to_end;
}

ThresholdSearchResult optimal_fixed_threshold(const DerivedConfigs& cfg, int histories,
                                              std::uint64_t seed, int workers) {
  const int search_histories = std::min(histories, 160);
  auto eval = [&](double xi) {
    DerivedConfigs c = cfg;
    c.protocol.fixed_threshold = xi;
    return analytical_error(c, search_histories, seed, workers);
  };

  // coarse geometric ladder, then two linear refinement passes
  std::vector<double> ladder;
  for (double x = 1; x <= 512; x = std::max(x + 1, std::floor(x * 1.45))) ladder.push_back(x);
  double best_xi = 1;
  double best_err = 2;
  for (double x : ladder) {
    const double e = eval(x);
    if (e < best_err) { best_err = e; best_xi = x; }
  }
  double lo = 1;
  double hi = 512;
  for (size_t i = 0; i + 1 < ladder.size(); ++i) {
    if (ladder[i] == best_xi) {
      lo = i > 0 ? ladder[i - 1] : 1;
      hi = ladder[i + 1];
    }
  }
  const int step = std::max(1, static_cast<int>((hi - lo) / 16));
  for (double x = lo; x <= hi; x += step) {
    const double e = eval(x);
    if (e < best_err) { best_err = e; best_xi = x; }
  }
  if (step > 1) {
    for (double x = std::max(1.0, best_xi - step); x <= best_xi + step; x += 1) {
      const double e = eval(x);
      if (e < best_err) { best_err = e; best_xi = x; }
    }
  }
  ThresholdSearchResult out;
  out.threshold = best_xi;
  DerivedConfigs c = cfg;
  c.protocol.fixed_threshold = best_xi;
  out.error = analytical_error(c, histories, seed, workers);
  return out;
}

SingleLink first_hop_link(const DerivedConfigs& cfg) {
  SingleLink link;
  link.kernel = make_kernel(cfg.topology, 0, 1, cfg.timing, cfg.source.length);
  link.molecules_per_bit = static_cast<double>(cfg.protocol.molecules_per_bit[0]);
  link.p1 = cfg.source.p1;
  link.threshold = cfg.protocol.fixed_threshold;
  link.intervals = cfg.source.length;
  return link;
}

ExperimentSpec apply_variant(const ExperimentSpec& spec, const VariantSpec& variant) {
  ExperimentSpec out = spec;
  out.variants.clear();
  out.name = spec.name + "__" + variant.label;
  for (const auto& [key, value] : variant.overrides) apply_key(out, key, value);
  validate_spec(out);
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::vector<ResultRow> rows(spec.sweep_values.size());

  const bool want_analytical =
      spec.engine == EngineChoice::Analytical || spec.engine == EngineChoice::Both;
  const bool want_sim =
      spec.engine == EngineChoice::Simulation || spec.engine == EngineChoice::Both;

  // a fixed-threshold sweep re-uses each trial's molecule paths across the
  // whole grid; adaptive selections are re-decoded per threshold
  const bool shared_sim_sweep = want_sim && spec.sweep_variable == "xi" &&
                                spec.auto_threshold == AutoThreshold::None;

  if (shared_sim_sweep) {
    const auto t0 = std::chrono::steady_clock::now();
    DerivedConfigs base = derive_configs(spec, spec.sweep_values.front());
    SimulationConfig sc;
    sc.topology = base.topology;
    sc.timing = base.timing;
    sc.protocol = base.protocol;
    sc.source = base.source;
    const auto estimates = estimate_error_thresholds(sc, spec.sweep_values, spec.trials,
                                                     spec.seed * 1000003ULL, spec.workers);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (size_t i = 0; i < rows.size(); ++i) {
      rows[i].simulated = estimates[i].rate;
      rows[i].simulated_se = estimates[i].standard_error;
      rows[i].trials = estimates[i].trials;
      rows[i].wall_s = wall / rows.size();
    }
  }

  for (size_t i = 0; i < spec.sweep_values.size(); ++i) {
    ResultRow& row = rows[i];
    row.value = spec.sweep_values[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      DerivedConfigs cfg = derive_configs(spec, row.value);

      if (spec.auto_threshold == AutoThreshold::PerHop) {
        const SingleLink hop = first_hop_link(cfg);
        const double xi = std::max(1.0, std::round(average_optimal_xi(hop, 12, 400, spec.seed)));
        cfg.protocol.fixed_threshold = xi;
        row.selected_threshold = xi;
      } else if (spec.auto_threshold == AutoThreshold::Network) {
        const auto found = optimal_fixed_threshold(cfg, spec.histories, spec.seed, spec.workers);
        cfg.protocol.fixed_threshold = found.threshold;
        row.selected_threshold = found.threshold;
      }

      if (want_analytical) {
        row.analytical = analytical_error(cfg, spec.histories, spec.seed, spec.workers);
      }
      if (want_sim && !shared_sim_sweep) {
        SimulationConfig sc;
        sc.topology = cfg.topology;
        sc.timing = cfg.timing;
        sc.protocol = cfg.protocol;
        sc.source = cfg.source;
        const auto est = estimate_error(sc, spec.trials,
                                        spec.seed * 1000003ULL + 7919 * i, spec.workers);
        row.simulated = est.rate;
        row.simulated_se = est.standard_error;
        row.trials = est.trials;
      }
    } catch (const std::exception&) {
      row.failed = true;
      row.analytical.reset();
      row.simulated.reset();
      row.simulated_se.reset();
    }
    row.wall_s += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return rows;
}

void emit_results(const std::vector<ResultRow>& rows, const ExperimentSpec& spec,
                  const std::string& out_dir) {
  if (rows.empty()) throw std::invalid_argument("emit_results: no rows to write");
  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/" + spec.name + ".csv";
  const std::string manifest_path = out_dir + "/" + spec.name + ".manifest";

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write result table '" + csv_path + "'");
  csv << "sweep_var,value,analytical_err,sim_err,sim_se,trials,wall_s\n";
  for (const auto& row : rows) {
    csv << spec.sweep_variable << "," << fmt(row.value) << ",";
    if (row.analytical) csv << fmt(*row.analytical);
    csv << ",";
    if (row.simulated) csv << fmt(*row.simulated);
    csv << ",";
    if (row.simulated_se) csv << fmt(*row.simulated_se);
    csv << "," << row.trials << ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", row.wall_s);
    csv << buf << "\n";
  }
  csv.close();
  if (!csv) throw std::runtime_error("failed writing result table '" + csv_path + "'");

  std::ofstream mf(manifest_path);
  if (!mf) throw std::runtime_error("cannot write manifest '" + manifest_path + "'");
  mf << manifest_text(spec, rows);
}

std::vector<std::string> preset_names() {
  return {"opt-na", "opt-xi", "mm-q", "2m-xi", "2m-q", "sm-xi", "sm-q"};
}

ExperimentSpec figure_preset(const std::string& name) {
  ExperimentSpec s;
  s.name = name;

  if (name == "opt-na") {
    // single link, error vs release count, around its closed-form optimum
    s.scheme = Scheme::MultiMolecule;
    s.protocol = Protocol::FD;
    s.relay_count = 0;
    s.x_d_m = 250e-9;
    s.samples_per_interval = 10;
    s.bit_interval_s = 200e-6;
    s.fixed_threshold = 5;
    s.sweep_variable = "na";
    for (double v = 200; v <= 6000; v += 200) s.sweep_values.push_back(v);
    s.engine = EngineChoice::Analytical;
    s.variants = {
        {"T200us-M10-xi5", {{"timing.t", "200e-6"}, {"timing.m", "10"}, {"detection.xi", "5"}}},
        {"T200us-M10-xi10", {{"timing.t", "200e-6"}, {"timing.m", "10"}, {"detection.xi", "10"}}},
        {"T200us-M5-xi5", {{"timing.t", "200e-6"}, {"timing.m", "5"}, {"detection.xi", "5"}}},
        {"T400us-M10-xi5", {{"timing.t", "400e-6"}, {"timing.m", "10"}, {"detection.xi", "5"}}},
        {"T400us-M5-xi10", {{"timing.t", "400e-6"}, {"timing.m", "5"}, {"detection.xi", "10"}}},
    };
  } else if (name == "opt-xi") {
    s.scheme = Scheme::MultiMolecule;
    s.protocol = Protocol::FD;
    s.relay_count = 0;
    s.x_d_m = 250e-9;
    s.samples_per_interval = 10;
    s.bit_interval_s = 200e-6;
    s.budget = 2000;
    s.sweep_variable = "xi";
    for (double v = 1; v <= 40; v += 1) s.sweep_values.push_back(v);
    s.engine = EngineChoice::Analytical;
    s.variants = {
        {"N2000-T200us-M10", {{"emission.budget", "2000"}, {"timing.t", "200e-6"}, {"timing.m", "10"}}},
        {"N4000-T200us-M10", {{"emission.budget", "4000"}, {"timing.t", "200e-6"}, {"timing.m", "10"}}},
        {"N2000-T400us-M5", {{"emission.budget", "2000"}, {"timing.t", "400e-6"}, {"timing.m", "5"}}},
        {"N4000-T400us-M5", {{"emission.budget", "4000"}, {"timing.t", "400e-6"}, {"timing.m", "5"}}},
    };
  } else if (name == "mm-q") {
    s.scheme = Scheme::MultiMolecule;
    s.protocol = Protocol::FD;
    s.x_d_m = 1e-6;
    s.budget = 20000;
    s.samples_per_interval = 10;
    s.sample_spacing_s = 20e-6;
    s.auto_threshold = AutoThreshold::PerHop;
    s.sweep_variable = "q";
    s.sweep_values = {0, 1, 2, 3, 4};
    s.engine = EngineChoice::Both;
    s.trials = 400;
    s.variants = {
        {"T200us", {{"timing.t", "200e-6"}}},
        {"T400us", {{"timing.t", "400e-6"}}},
    };
  } else if (name == "2m-xi") {
    s.scheme = Scheme::TwoMolecule;
    s.protocol = Protocol::FD_A;
    s.relay_count = 2;
    s.x_d_m = 1e-6;
    s.bit_interval_s = 200e-6;
    s.samples_per_interval = 10;
    s.budget = 20000;
    s.sweep_variable = "xi";
    for (double v = 2; v <= 40; v += 2) s.sweep_values.push_back(v);
    s.engine = EngineChoice::Both;
    s.trials = 400;
    s.variants = {
        {"fd-a", {{"protocol", "fd-a"}}},
        {"fd", {{"protocol", "fd"}}},
        {"baseline", {{"protocol", "fd"}, {"topology.relays", "0"}}},
    };
  } else if (name == "2m-q") {
    s.scheme = Scheme::TwoMolecule;
    s.protocol = Protocol::FD_A;
    s.x_d_m = 1e-6;
    s.bit_interval_s = 200e-6;
    s.samples_per_interval = 10;
    s.budget = 20000;
    s.auto_threshold = AutoThreshold::Network;
    s.sweep_variable = "q";
    s.sweep_values = {0, 1, 2, 3, 4, 5};
    s.engine = EngineChoice::Both;
    s.trials = 300;
  } else if (name == "sm-xi") {
    s.scheme = Scheme::SingleMolecule;
    s.protocol = Protocol::FD;
    s.relay_count = 1;
    s.x_d_m = 600e-9;
    s.bit_interval_s = 400e-6;
    s.samples_per_interval = 5;
    s.budget = 10000;
    s.sweep_variable = "xi";
    for (double v = 1; v <= 30; v += 1) s.sweep_values.push_back(v);
    s.engine = EngineChoice::Both;
    s.trials = 400;
    s.variants = {
        {"fd", {{"protocol", "fd"}}},
        {"hd", {{"protocol", "hd"}}},
        {"fd-a-si", {{"protocol", "fd-a-si"}}},
        {"baseline", {{"protocol", "fd"}, {"topology.relays", "0"}}},
    };
  } else if (name == "sm-q") {
    s.scheme = Scheme::SingleMolecule;
    s.protocol = Protocol::FD_A_BI_SI;
    s.x_d_m = 1e-6;
    s.samples_per_interval = 10;
    s.budget = 20000;
    s.auto_threshold = AutoThreshold::Network;
    s.sweep_variable = "q";
    s.sweep_values = {1, 2, 3, 4};
    s.engine = EngineChoice::Both;
    s.trials = 200;
    s.variants = {
        {"fd-a-bi-si-T400", {{"protocol", "fd-a-bi-si"}, {"timing.t", "400e-6"}}},
        {"hd-a-bi-T400", {{"protocol", "hd-a-bi"}, {"timing.t", "400e-6"}}},
        {"fd-a-si-T400", {{"protocol", "fd-a-si"}, {"timing.t", "400e-6"}}},
        {"hd-T400", {{"protocol", "hd"}, {"timing.t", "400e-6"}}},
        {"baseline-T400", {{"protocol", "fd"}, {"topology.relays", "0"},
                           {"sweep.values", "[0]"}, {"timing.t", "400e-6"}}},
    };
  } else {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + names);
  }
  return s;
}

}  // namespace molhop
