#include "rfstrack/cli.hpp"

#include "rfstrack/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace rfstrack {

namespace {

struct KeyValue {
  std::string key;
  std::string value;
  std::string where;  // "path:line" or "command line"
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<KeyValue> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<KeyValue> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    KeyValue kv;
    kv.key = trim(line.substr(0, eq));
    kv.value = trim(line.substr(eq + 1));
    kv.where = where;
    if (kv.key.empty()) throw ConfigError(where + ": empty key");
    if (kv.value.empty())
      throw ConfigError(where + ": key '" + kv.key + "' has no value");
    out.push_back(std::move(kv));
  }
  return out;
}

long long parse_ll(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(kv.where + ": key '" + kv.key + "': expected integer, got '" +
                      kv.value + "'");
  }
}

int parse_int(const KeyValue& kv, long long lo, long long hi) {
  const long long v = parse_ll(kv);
  if (v < lo || v > hi)
    throw ConfigError(kv.where + ": key '" + kv.key + "': value " + kv.value +
                      " out of range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double parse_double(const KeyValue& kv, double lo, double hi,
                    bool lo_exclusive = false) {
  double v = 0.0;
  try {
    std::size_t pos = 0;
    v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("");
  } catch (...) {
    throw ConfigError(kv.where + ": key '" + kv.key + "': expected number, got '" +
                      kv.value + "'");
  }
  if (v < lo || v > hi || (lo_exclusive && v <= lo))
    throw ConfigError(kv.where + ": key '" + kv.key + "': value out of range");
  return v;
}

std::uint64_t parse_u64(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(kv.where + ": key '" + kv.key +
                      "': expected unsigned integer, got '" + kv.value + "'");
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// key "attack.3.start" -> ("attack", 3, "start")
bool parse_indexed_key(const std::string& key, std::string& family, int& index,
                       std::string& field) {
  const auto d1 = key.find('.');
  if (d1 == std::string::npos) return false;
  const auto d2 = key.find('.', d1 + 1);
  if (d2 == std::string::npos) return false;
  family = key.substr(0, d1);
  field = key.substr(d2 + 1);
  try {
    std::size_t pos = 0;
    index = std::stoi(key.substr(d1 + 1, d2 - d1 - 1), &pos);
    if (pos != d2 - d1 - 1 || index < 1) return false;
  } catch (...) {
    return false;
  }
  return true;
}

std::string fmt_g(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path,
                                        const CliOverrides& overrides) {
  std::vector<KeyValue> kvs;
  if (!path.empty()) kvs = parse_config_file(path);

  ExperimentConfig cfg;

  // Scenario selection first: overrides decide which preset the other keys
  // modify.
  int scenario_id = 1;
  for (const auto& kv : kvs)
    if (kv.key == "scenario") scenario_id = parse_int(kv, 1, 4);
  if (overrides.scenario) {
    if (*overrides.scenario < 1 || *overrides.scenario > 4)
      throw ConfigError("command line: --scenario must be 1..4");
    scenario_id = *overrides.scenario;
  }
  cfg.scenario_id = scenario_id;
  cfg.scenario = preset_scenario(scenario_id);

  std::vector<std::string> tracker_labels;
  struct PartialAttack {
    std::optional<int> start, end;
    std::optional<double> vpo;
    std::string where;
  };
  std::map<int, PartialAttack> attack_keys;
  std::map<int, int> turn_keys;
  bool scenario_params_touched = false;

  for (const auto& kv : kvs) {
    const std::string& k = kv.key;
    if (k == "scenario") {
      continue;  // handled above
    } else if (k == "runs") {
      cfg.runs = parse_int(kv, 1, 1000000);
    } else if (k == "seed") {
      cfg.seed = parse_u64(kv);
    } else if (k == "out") {
      cfg.out_dir = kv.value;
    } else if (k == "tracker") {
      for (const auto& label : split_csv_list(kv.value)) {
        tracker_choice_from_label(label);  // validates
        tracker_labels.push_back(label);
      }
    } else if (k == "component_mode") {
      if (kv.value != "auto" && kv.value != "single" && kv.value != "dynamic")
        throw ConfigError(kv.where + ": component_mode must be auto, single or dynamic");
      cfg.component_mode = kv.value;
    } else if (k == "prune_threshold") {
      cfg.prot.prune_threshold = parse_double(kv, 0.0, 1.0);
      if (cfg.prot.prune_threshold >= 1.0)
        throw ConfigError(kv.where + ": prune_threshold must be in [0, 1)");
    } else if (k == "cap") {
      cfg.prot.cap = parse_int(kv, 1, 1000000);
    } else if (k == "alpha") {
      cfg.prot.alpha = parse_double(kv, 0.0, kInf);
    } else if (k == "lambda_jam") {
      cfg.prot.lambda_jam = parse_double(kv, 0.0, kInf);
    } else if (k == "b_na") {
      cfg.prot.b_na = parse_double(kv, 0.0, kInf);
    } else if (k == "na_eig_los") {
      cfg.prot.na_eigvals(0) = parse_double(kv, 0.0, kInf, true);
    } else if (k == "na_eig_perp") {
      cfg.prot.na_eigvals(1) = parse_double(kv, 0.0, kInf, true);
    } else if (k == "u_act") {
      cfg.prot.lifecycle.u_act_m = parse_double(kv, 0.0, kInf, true);
    } else if (k == "t_act") {
      cfg.prot.lifecycle.t_act_s = parse_double(kv, 0.0, kInf, true);
    } else if (k == "u_dorm") {
      cfg.prot.lifecycle.u_dorm_m = parse_double(kv, 0.0, kInf, true);
    } else if (k == "t_dorm") {
      cfg.prot.lifecycle.t_dorm_s = parse_double(kv, 0.0, kInf, true);
    } else if (k == "n_steps") {
      cfg.scenario.n_steps = parse_int(kv, 1, 1000000);
      scenario_params_touched = true;
    } else if (k == "delta") {
      cfg.scenario.delta = parse_double(kv, 0.0, kInf, true);
    } else if (k == "sigma_r") {
      cfg.scenario.sigma_r = parse_double(kv, 0.0, kInf, true);
    } else if (k == "sigma_q2") {
      cfg.scenario.sigma_q = std::sqrt(parse_double(kv, 0.0, kInf));
    } else if (k == "p_d") {
      cfg.scenario.p_d = parse_double(kv, 0.0, 1.0);
    } else if (k == "p_j") {
      cfg.scenario.p_j = parse_double(kv, 0.0, 1.0);
    } else if (k == "clutter_density") {
      cfg.scenario.clutter_density = parse_double(kv, 0.0, kInf);
    } else if (k == "init_x") {
      cfg.scenario.initial_state(0) = parse_double(kv, -kInf, kInf);
    } else if (k == "init_y") {
      cfg.scenario.initial_state(1) = parse_double(kv, -kInf, kInf);
    } else if (k == "init_vx") {
      cfg.scenario.initial_state(2) = parse_double(kv, -kInf, kInf);
    } else if (k == "init_vy") {
      cfg.scenario.initial_state(3) = parse_double(kv, -kInf, kInf);
    } else if (k == "turn_accel") {
      cfg.scenario.turn_accel = parse_double(kv, 0.0, kInf, true);
    } else if (k == "turn_clockwise") {
      cfg.scenario.turn_clockwise = parse_int(kv, 0, 1) != 0;
    } else if (k == "fov_xmin") {
      cfg.scenario.fov.xmin = parse_double(kv, -kInf, kInf);
    } else if (k == "fov_xmax") {
      cfg.scenario.fov.xmax = parse_double(kv, -kInf, kInf);
    } else if (k == "fov_ymin") {
      cfg.scenario.fov.ymin = parse_double(kv, -kInf, kInf);
    } else if (k == "fov_ymax") {
      cfg.scenario.fov.ymax = parse_double(kv, -kInf, kInf);
    } else {
      std::string family, field;
      int index = 0;
      if (parse_indexed_key(k, family, index, field)) {
        if (family == "attack") {
          auto& pa = attack_keys[index];
          pa.where = kv.where;
          if (field == "start") pa.start = parse_int(kv, 1, 1000000);
          else if (field == "end") pa.end = parse_int(kv, 1, 1000000);
          else if (field == "vpo") pa.vpo = parse_double(kv, 0.0, kInf, true);
          else throw ConfigError(kv.where + ": unknown attack field '" + field + "'");
          continue;
        }
        if (family == "turn" && field == "start") {
          turn_keys[index] = parse_int(kv, 1, 1000000);
          continue;
        }
      }
      throw ConfigError(kv.where + ": unknown key '" + k + "'");
    }
  }
  (void)scenario_params_touched;

  if (overrides.runs) {
    if (*overrides.runs < 1) throw ConfigError("command line: --runs must be >= 1");
    cfg.runs = *overrides.runs;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out) cfg.out_dir = *overrides.out;
  if (!overrides.trackers.empty()) {
    tracker_labels.clear();
    for (const auto& label : overrides.trackers) {
      tracker_choice_from_label(label);
      tracker_labels.push_back(label);
    }
  }

  {
    std::set<std::string> seen;
    for (const auto& label : tracker_labels) {
      if (!seen.insert(label).second)
        throw ConfigError("tracker '" + label + "' listed twice");
      cfg.trackers.push_back({label, tracker_choice_from_label(label)});
    }
  }

  if (!attack_keys.empty()) {
    cfg.scenario.attacks.clear();
    for (const auto& [index, pa] : attack_keys) {
      if (!pa.start || !pa.vpo)
        throw ConfigError(pa.where + ": attack." + std::to_string(index) +
                          " needs both .start and .vpo");
      AttackSchedule at;
      at.start_step = *pa.start;
      at.end_step = pa.end.value_or(cfg.scenario.n_steps);
      at.pull_off_velocity = *pa.vpo;
      if (at.start_step >= at.end_step)
        throw ConfigError(pa.where + ": attack." + std::to_string(index) +
                          ": start must precede end");
      cfg.scenario.attacks.push_back(at);
    }
  }
  if (!turn_keys.empty()) {
    cfg.scenario.turn_starts.clear();
    for (const auto& [index, start] : turn_keys)
      cfg.scenario.turn_starts.push_back(start);
  }
  for (auto& at : cfg.scenario.attacks)
    at.end_step = std::min(at.end_step, cfg.scenario.n_steps);

  if (cfg.scenario.fov.xmax <= cfg.scenario.fov.xmin ||
      cfg.scenario.fov.ymax <= cfg.scenario.fov.ymin)
    throw ConfigError("field of view is empty");

  cfg.prot.lifecycle.single_component =
      cfg.component_mode == "auto" ? cfg.scenario_id <= 2
                                   : cfg.component_mode == "single";
  cfg.scenario.id = cfg.scenario_id;
  return cfg;
}

std::string config_used_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "scenario = " << cfg.scenario_id << "\n";
  out << "runs = " << cfg.runs << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "tracker = ";
  for (std::size_t i = 0; i < cfg.trackers.size(); ++i)
    out << (i ? "," : "") << cfg.trackers[i].label;
  out << "\n";
  out << "component_mode = "
      << (cfg.prot.lifecycle.single_component ? "single" : "dynamic") << "\n";
  out << "prune_threshold = " << fmt_g(cfg.prot.prune_threshold, "%.17g") << "\n";
  out << "cap = " << cfg.prot.cap << "\n";
  out << "alpha = " << fmt_g(cfg.prot.alpha, "%.17g") << "\n";
  out << "lambda_jam = " << fmt_g(cfg.prot.lambda_jam, "%.17g") << "\n";
  out << "b_na = " << fmt_g(cfg.prot.b_na, "%.17g") << "\n";
  out << "na_eig_los = " << fmt_g(cfg.prot.na_eigvals(0), "%.17g") << "\n";
  out << "na_eig_perp = " << fmt_g(cfg.prot.na_eigvals(1), "%.17g") << "\n";
  out << "u_act = " << fmt_g(cfg.prot.lifecycle.u_act_m, "%.17g") << "\n";
  out << "t_act = " << fmt_g(cfg.prot.lifecycle.t_act_s, "%.17g") << "\n";
  out << "u_dorm = " << fmt_g(cfg.prot.lifecycle.u_dorm_m, "%.17g") << "\n";
  out << "t_dorm = " << fmt_g(cfg.prot.lifecycle.t_dorm_s, "%.17g") << "\n";
  out << "n_steps = " << cfg.scenario.n_steps << "\n";
  out << "delta = " << fmt_g(cfg.scenario.delta, "%.17g") << "\n";
  out << "sigma_r = " << fmt_g(cfg.scenario.sigma_r, "%.17g") << "\n";
  out << "sigma_q2 = " << fmt_g(cfg.scenario.sigma_q * cfg.scenario.sigma_q, "%.17g")
      << "\n";
  out << "p_d = " << fmt_g(cfg.scenario.p_d, "%.17g") << "\n";
  out << "p_j = " << fmt_g(cfg.scenario.p_j, "%.17g") << "\n";
  out << "clutter_density = " << fmt_g(cfg.scenario.clutter_density, "%.17g") << "\n";
  out << "init_x = " << fmt_g(cfg.scenario.initial_state(0), "%.17g") << "\n";
  out << "init_y = " << fmt_g(cfg.scenario.initial_state(1), "%.17g") << "\n";
  out << "init_vx = " << fmt_g(cfg.scenario.initial_state(2), "%.17g") << "\n";
  out << "init_vy = " << fmt_g(cfg.scenario.initial_state(3), "%.17g") << "\n";
  out << "turn_accel = " << fmt_g(cfg.scenario.turn_accel, "%.17g") << "\n";
  out << "turn_clockwise = " << (cfg.scenario.turn_clockwise ? 1 : 0) << "\n";
  out << "fov_xmin = " << fmt_g(cfg.scenario.fov.xmin, "%.17g") << "\n";
  out << "fov_xmax = " << fmt_g(cfg.scenario.fov.xmax, "%.17g") << "\n";
  out << "fov_ymin = " << fmt_g(cfg.scenario.fov.ymin, "%.17g") << "\n";
  out << "fov_ymax = " << fmt_g(cfg.scenario.fov.ymax, "%.17g") << "\n";
  for (std::size_t i = 0; i < cfg.scenario.turn_starts.size(); ++i)
    out << "turn." << (i + 1) << ".start = " << cfg.scenario.turn_starts[i] << "\n";
  for (std::size_t i = 0; i < cfg.scenario.attacks.size(); ++i) {
    const auto& at = cfg.scenario.attacks[i];
    out << "attack." << (i + 1) << ".start = " << at.start_step << "\n";
    out << "attack." << (i + 1) << ".end = " << at.end_step << "\n";
    out << "attack." << (i + 1) << ".vpo = " << fmt_g(at.pull_off_velocity, "%.17g")
        << "\n";
  }
  return out.str();
}

void write_metrics_csv(const std::string& path, const AggregateTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  const bool with_pcrb = !table.pcrb_m.empty();
  out << "k,tracker,rmse_m,p_jam,bias_true_m,bias_est_m,bias_std_m,c_k_mean";
  if (with_pcrb) out << ",pcrb_m";
  out << "\n";
  for (int k = 0; k < table.n_steps; ++k) {
    for (const auto& tr : table.trackers) {
      const auto i = static_cast<std::size_t>(k);
      out << (k + 1) << "," << tr.label << "," << fmt_g(tr.rmse_m[i]) << ","
          << fmt_g(tr.p_jam_mean[i]) << "," << fmt_g(table.bias_true_m[i]) << ","
          << fmt_g(tr.bias_est_mean[i]) << "," << fmt_g(tr.bias_std_mean[i]) << ","
          << fmt_g(tr.c_awake_mean[i]);
      if (with_pcrb) out << "," << fmt_g(table.pcrb_m[i]);
      out << "\n";
    }
  }
}

PlotData read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path + ": empty CSV");

  std::vector<std::string> cols = split_csv_list(header);
  auto col_index = [&](const std::string& name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end())
      throw std::runtime_error(path + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - cols.begin());
  };
  const std::size_t ik = col_index("k");
  const std::size_t itr = col_index("tracker");
  const std::size_t irmse = col_index("rmse_m");
  const std::size_t ipjam = col_index("p_jam");
  const std::size_t ibtrue = col_index("bias_true_m");
  const std::size_t ibest = col_index("bias_est_m");
  const std::size_t ibstd = col_index("bias_std_m");
  const std::size_t ick = col_index("c_k_mean");
  const bool has_pcrb = std::find(cols.begin(), cols.end(), "pcrb_m") != cols.end();
  const std::size_t ipcrb = has_pcrb ? col_index("pcrb_m") : 0;

  PlotData data;
  data.has_pcrb = has_pcrb;
  std::set<double> seen_steps;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != cols.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": wrong field count");
    auto num = [&](std::size_t i) {
      try {
        return std::stod(fields.at(i));
      } catch (...) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad number '" + fields.at(i) + "'");
      }
    };
    const std::string tracker = fields.at(itr);
    const double k = num(ik);
    if (!seen_steps.count(k)) {
      seen_steps.insert(k);
      data.steps.push_back(k);
      data.bias_true.push_back(num(ibtrue));
      if (has_pcrb) data.pcrb.push_back(num(ipcrb));
    }
    if (std::find(data.trackers.begin(), data.trackers.end(), tracker) ==
        data.trackers.end())
      data.trackers.push_back(tracker);
    auto& s = data.series[tracker];
    s["rmse_m"].push_back(num(irmse));
    s["p_jam"].push_back(num(ipjam));
    s["bias_est_m"].push_back(num(ibest));
    s["bias_std_m"].push_back(num(ibstd));
    s["c_k_mean"].push_back(num(ick));
  }
  if (data.steps.empty()) throw std::runtime_error(path + ": no data rows");
  for (const auto& tracker : data.trackers)
    for (const auto& [name, values] : data.series.at(tracker))
      if (values.size() != data.steps.size())
        throw std::runtime_error(path + ": tracker '" + tracker +
                                 "' column '" + name + "' has inconsistent rows");
  return data;
}

void write_plots(const PlotData& data, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  auto save = [&](const std::string& name, const std::string& svg) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << svg;
  };

  auto series_for = [&](const std::string& column) {
    std::vector<PlotSeries> series;
    for (const auto& tracker : data.trackers)
      series.push_back({tracker, data.steps, data.series.at(tracker).at(column), false});
    return series;
  };

  {
    auto series = series_for("rmse_m");
    if (data.has_pcrb) series.push_back({"pcrb", data.steps, data.pcrb, true});
    save("rmse.svg",
         render_line_chart("Position RMSE", "time step k", "RMSE [m]", series));
  }
  save("p_jam.svg", render_line_chart("Probability of jamming", "time step k",
                                      "P(jamming)", series_for("p_jam")));
  {
    auto series = series_for("bias_est_m");
    series.push_back({"true bias", data.steps, data.bias_true, true});
    save("bias.svg", render_line_chart("Bias estimation", "time step k",
                                       "bias [m]", series));
  }
  save("c_k.svg", render_line_chart("Awake jammer components", "time step k",
                                    "mean C_k", series_for("c_k_mean")));
}

namespace {

void finish_run(const ExperimentConfig& cfg, AggregateTable& table) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  const std::string csv_path = (fs::path(cfg.out_dir) / "metrics.csv").string();
  write_metrics_csv(csv_path, table);
  write_plots(read_metrics_csv(csv_path), cfg.out_dir);

  const std::string used_path = (fs::path(cfg.out_dir) / "config_used.txt").string();
  std::ofstream used(used_path, std::ios::binary);
  if (!used) throw std::runtime_error("cannot write '" + used_path + "'");
  used << config_used_text(cfg);

  for (const auto& tr : table.trackers) {
    double mean_rmse = 0.0, max_rmse = 0.0, mean_pjam = 0.0;
    for (std::size_t i = 0; i < tr.rmse_m.size(); ++i) {
      mean_rmse += tr.rmse_m[i];
      max_rmse = std::max(max_rmse, tr.rmse_m[i]);
      mean_pjam += tr.p_jam_mean[i];
    }
    const double n = static_cast<double>(tr.rmse_m.size());
    std::cout << tr.label << ": mean RMSE " << fmt_g(mean_rmse / n, "%.2f")
              << " m, max " << fmt_g(max_rmse, "%.2f") << " m, mean P(jam) "
              << fmt_g(mean_pjam / n, "%.2f") << "\n";
  }
  std::cout << "wrote " << csv_path << "\n";
}

std::vector<TrackerSpec> default_trackers(bool include_clairvoyant) {
  std::vector<TrackerSpec> out = {
      {"adaptive", TrackerChoice::adaptive},
      {"nonadaptive", TrackerChoice::nonadaptive},
      {"naive", TrackerChoice::naive},
  };
  if (include_clairvoyant) out.push_back({"clairvoyant", TrackerChoice::clairvoyant});
  return out;
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.trackers.empty()) cfg.trackers = default_trackers(true);
  AggregateTable table =
      run_monte_carlo(cfg.scenario, cfg.prot, cfg.trackers, cfg.runs, cfg.seed);
  finish_run(cfg, table);
  return 0;
}

int cmd_loe(ExperimentConfig cfg) {
  // Nominal conditions: no attacks, no maneuvers, zero process noise on both
  // the generation and tracking sides.
  cfg.scenario.attacks.clear();
  cfg.scenario.turn_starts.clear();
  cfg.scenario.sigma_q = 0.0;
  if (cfg.trackers.empty()) cfg.trackers = default_trackers(false);

  AggregateTable table =
      run_monte_carlo(cfg.scenario, cfg.prot, cfg.trackers, cfg.runs, cfg.seed);

  const MotionModel motion = build_cv_model(cfg.scenario.delta, 0.0, 0.0, 0);
  const MeasurementModel meas = build_position_measurement(4, cfg.scenario.sigma_r);
  const Eigen::MatrixXd prior_cov = cfg.prot.prior_var.asDiagonal();
  table.pcrb_m =
      pcrb_curve(motion, meas, prior_cov, cfg.scenario.n_steps).bound_m;

  finish_run(cfg, table);
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::string dir = out_dir;
  if (dir.empty()) {
    dir = fs::path(csv_path).parent_path().string();
    if (dir.empty()) dir = ".";
  }
  write_plots(read_metrics_csv(csv_path), dir);
  std::cout << "wrote plots to " << dir << "\n";
  return 0;
}

}  // namespace rfstrack
