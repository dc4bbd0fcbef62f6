/*
 * Copyright (c) 2026 The protoforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "protoforge/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "protoforge/csa.hpp"
#include "protoforge/error.hpp"
#include "protoforge/medium.hpp"
#include "protoforge/montecarlo.hpp"
#include "protoforge/qos.hpp"
#include "protoforge/semantics.hpp"
#include "protoforge/spec.hpp"
#include "protoforge/synthesis.hpp"

namespace protoforge {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string spec;
  std::optional<double> delta;
  std::string out;
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
  int cap = kDefaultCap;
  std::string grid_n = "2:20:2";
  std::string grid_dmax = "10:100:10";
  std::string grid_tau = "1:10:1";
  bool traces = false;
  std::string format;
  std::vector<std::string> csa;
  std::string bounds;
};

// Raised for bad input that should end the command with kExitInput.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf || !(outf << text)) throw InputError("cannot write " + path.string());
}

fs::path output_dir(const Options& o) {
  if (o.out.empty()) throw InputError("--out is required");
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw InputError("cannot create " + o.out + ": " + ec.message());
  return fs::path(o.out);
}

FullSpec load_spec(const Options& o) {
  if (o.spec.empty()) throw InputError("--spec is required");
  FullSpec spec = parse_spec(read_file(o.spec));
  if (o.delta) {
    if (!(*o.delta >= 0.0 && *o.delta <= 1.0)) throw InputError("--delta must lie in [0,1]");
    spec.delta = *o.delta;
  }
  return spec;
}

BoundsVector parse_bounds(const std::string& text) {
  BoundsVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--bounds expects name=n,...");
    int n = 0;
    const std::string num = item.substr(eq + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec != std::errc() || ptr != num.data() + num.size() || n < 0) {
      throw InputError("bad bound in '" + item + "'");
    }
    out[item.substr(0, eq)] = n;
  }
  return out;
}

std::vector<Csa> load_csas(const Options& o, const FullSpec& spec) {
  std::vector<std::string> files;
  for (const auto& p : o.csa) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto& path = entry.path();
        if (path.extension() == ".json" && path.filename() != "bounds.json") files.push_back(path.string());
      }
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw InputError("--csa names no CSA files");
  std::sort(files.begin(), files.end());
  std::vector<Csa> csas;
  for (const auto& f : files) csas.push_back(import_json(read_file(f)));
  auto rank = [&](const Csa& c) {
    auto it = std::find(spec.cars.begin(), spec.cars.end(), c.owner);
    return std::distance(spec.cars.begin(), it);
  };
  std::stable_sort(csas.begin(), csas.end(), [&](const Csa& a, const Csa& b) { return rank(a) < rank(b); });
  return csas;
}

std::string bounds_json(const BoundsVector& bounds, const ProtocolSpec& spec) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : event_order(spec)) {
    if (auto it = bounds.find(e.name); it != bounds.end()) j[e.name] = it->second;
  }
  return j.dump(2) + "\n";
}

std::string bounds_text(const BoundsVector& bounds, const ProtocolSpec& spec) {
  std::string out;
  for (const auto& e : event_order(spec)) {
    auto it = bounds.find(e.name);
    if (it == bounds.end()) continue;
    if (!out.empty()) out += ", ";
    out += e.name + "=" + std::to_string(it->second);
  }
  return out;
}

std::string sequence_text(const std::vector<GlobalEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    if (!out.empty()) out += '.';
    out += e.name;
  }
  return out;
}

int cmd_check(const Options& o, std::ostream& out) {
  const FullSpec spec = load_spec(o);
  out << "delta: " << format_double(spec.delta) << "\n";
  const auto report = well_posed(spec.protocol);
  if (!report.ok()) {
    out << "well-posed: no\n" << report.describe();
    if (!report.describe().empty() && report.describe().back() != '\n') out << '\n';
    out << "realizable: no\n";
    return kExitFailed;
  }
  out << "well-posed: yes\n";
  const auto opt = solve_opt(spec.protocol, spec.delta, o.cap);
  if (opt.status != OptStatus::Optimal) {
    out << "realizable: no (" << to_string(opt.status) << ": " << opt.reason << ")\n";
    return kExitFailed;
  }
  out << "realizable: yes\n";
  out << "bounds: " << bounds_text(opt.bounds, spec.protocol) << "\n";
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const FullSpec spec = load_spec(o);
  if (!o.format.empty() && o.format != "json" && o.format != "dot") throw InputError("synth writes json or dot");
  const fs::path dir = output_dir(o);
  Synthesis result;
  if (!o.bounds.empty()) {
    result.bounds = parse_bounds(o.bounds);
    for (const auto& car : spec.cars) result.csas.push_back(synthesize_for_car(spec.protocol, car, result.bounds));
  } else {
    result = synthesize_all(spec, o.cap);
  }
  const bool json_out = o.format.empty() || o.format == "json";
  const bool dot_out = o.format.empty() || o.format == "dot";
  for (const auto& csa : result.csas) {
    if (json_out) write_file(dir / (csa.owner.name + ".json"), export_json(csa));
    if (dot_out) write_file(dir / (csa.owner.name + ".dot"), export_dot(csa));
    out << csa.owner.name << ": " << csa.states.size() << " states, " << csa.transitions.size() << " transitions\n";
  }
  write_file(dir / "bounds.json", bounds_json(result.bounds, spec.protocol));
  out << "bounds: " << bounds_text(result.bounds, spec.protocol) << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const FullSpec spec = load_spec(o);
  const System system(load_csas(o, spec));
  const auto report = check_correctness(system, spec.delta, spec.protocol, budget_from_env());
  out << "delta: " << format_double(spec.delta) << "\n";
  out << "sequence,required,achieved,margin,verdict\n";
  for (const auto& v : report.sequences) {
    out << sequence_text(v.required.events) << ',' << format_double(v.required.p) << ',' << fixed(v.achieved) << ','
        << fixed(v.margin) << ',' << (v.ok ? "pass" : "fail") << "\n";
  }
  out << "verdict: " << (report.verdict ? "pass" : "fail") << "\n";
  return report.verdict ? kExitOk : kExitFailed;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const FullSpec spec = load_spec(o);
  const System system(load_csas(o, spec));
  if (o.runs == 0) throw InputError("--runs must be positive");
  std::optional<fs::path> dir;
  if (o.traces) dir = output_dir(o);
  out << "seed: " << o.seed << "\n";
  out << "delta: " << format_double(spec.delta) << "\n";
  out << "runs: " << o.runs << "\n";
  out << "sequence,successes,failures,diverged,rate,stderr\n";
  std::string jsonl;
  const auto sequences = enumerate_sequences(spec.protocol);
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    McOptions mc;
    mc.runs = o.runs;
    mc.seed = o.seed;
    mc.stream = k;
    mc.traces = o.traces;
    const auto r = run_monte_carlo(system, spec.delta, sequences[k].events, mc);
    out << sequence_text(sequences[k].events) << ',' << r.successes << ',' << r.failures << ',' << r.diverged << ','
        << fixed(r.rate, 6) << ',' << fixed(r.std_error, 6) << "\n";
    for (const auto& line : r.traces) jsonl += line + "\n";
  }
  if (dir) write_file(*dir / "traces.jsonl", jsonl);
  return kExitOk;
}

int cmd_feasible(const Options& o, std::ostream& out) {
  const FullSpec spec = load_spec(o);
  if (!o.format.empty() && o.format != "csv") throw InputError("feasible writes csv");
  SweepGrid grid;
  try {
    grid.n_cars = parse_axis(o.grid_n);
    grid.d_max = parse_axis(o.grid_dmax);
    grid.tau_min = parse_axis(o.grid_tau);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  grid.cap = o.cap;
  std::vector<SweepRow> rows;
  try {
    rows = feasibility_sweep(spec.protocol, grid);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParams) throw InputError(e.what());
    throw;
  }
  const std::string csv = sweep_csv(rows);
  if (!o.out.empty()) {
    write_file(output_dir(o) / "feasibility.csv", csv);
    const auto feasible = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.realizable; });
    out << "points: " << rows.size() << ", realizable: " << feasible << "\n";
  } else {
    out << csv;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesis and verification of QoS-annotated vehicle protocols", "protoforge"};
  app.require_subcommand(1);
  Options o;

  auto spec_flag = [&](CLI::App* sub) { sub->add_option("--spec", o.spec, "Protocol specification (.psl)")->required(); };
  auto delta_flag = [&](CLI::App* sub) { sub->add_option("--delta", o.delta, "Override the drop-probability bound"); };
  auto cap_flag = [&](CLI::App* sub) { sub->add_option("--cap", o.cap, "Largest retransmission bound tried")->check(CLI::NonNegativeNumber); };
  auto csa_flag = [&](CLI::App* sub) { sub->add_option("--csa", o.csa, "CSA JSON files or directories")->required(); };

  auto* check = app.add_subcommand("check", "Report well-posedness and realizability");
  spec_flag(check);
  delta_flag(check);
  cap_flag(check);

  auto* synth = app.add_subcommand("synth", "Solve the bounds and write one CSA per car");
  spec_flag(synth);
  delta_flag(synth);
  cap_flag(synth);
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--format", o.format, "json or dot (default: both)");
  synth->add_option("--bounds", o.bounds, "Use the given bounds, e.g. snd=3,ack=1");

  auto* verify = app.add_subcommand("verify", "Compute exact synchronization probabilities");
  spec_flag(verify);
  delta_flag(verify);
  csa_flag(verify);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs over a lossy medium");
  spec_flag(simulate);
  delta_flag(simulate);
  csa_flag(simulate);
  simulate->add_option("--runs", o.runs, "Runs per sequence");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_flag("--traces", o.traces, "Write traces.jsonl into --out");
  simulate->add_option("--out", o.out, "Output directory for traces");

  auto* feasible = app.add_subcommand("feasible", "Realizability over a grid of medium parameters");
  spec_flag(feasible);
  cap_flag(feasible);
  feasible->add_option("--grid-n", o.grid_n, "Car counts FROM:TO:STEP");
  feasible->add_option("--grid-dmax", o.grid_dmax, "Data lengths FROM:TO:STEP");
  feasible->add_option("--grid-tau", o.grid_tau, "Minimum delays FROM:TO:STEP");
  feasible->add_option("--format", o.format, "csv");
  feasible->add_option("--out", o.out, "Write feasibility.csv here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    return cmd_feasible(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::DivergenceDetected:
        return kExitResource;
      case ErrorCode::NotWellPosed:
      case ErrorCode::Unrealizable:
      case ErrorCode::NonDeterministic:
        return kExitFailed;
      default:
        return kExitInput;
    }
  }
}

}  // namespace protoforge
