#include "twosided/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "twosided/bench.hpp"
#include "twosided/budget.hpp"
#include "twosided/energy_sched.hpp"
#include "twosided/feasibility.hpp"
#include "twosided/oracle.hpp"
#include "twosided/structure.hpp"
#include "twosided/time_sched.hpp"

namespace twosided::cli {

using nlohmann::json;

CostModel CostSpec::model() const {
  if (kind == "inverse") return CostModel::reciprocal();
  if (kind == "shannon") return CostModel::shannon(bits);
  throw InputError("/cost/kind: expected \"inverse\" or \"shannon\"");
}

namespace {

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  return j.get<double>();
}

std::vector<Bound> bounds_at(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw InputError("/" + key + ": missing");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw InputError("/" + key + ": expected an array");
  std::vector<Bound> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "/" + key + "/" + std::to_string(i);
    const json& v = arr[i];
    if (v.is_string()) {
      if (v.get<std::string>() != "inf") throw InputError(path + ": expected a number or \"inf\"");
      out.push_back(Bound::unbounded());
    } else {
      out.push_back(Bound::at(number_at(v, path)));
    }
  }
  return out;
}

json bounds_json(std::span<const Bound> bounds) {
  json arr = json::array();
  for (const Bound& b : bounds) {
    if (b.is_finite()) {
      arr.push_back(b.value());
    } else {
      arr.push_back("inf");
    }
  }
  return arr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::optional<std::string>& path,
                  std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path);
  if (!f) throw InputError(*path + ": cannot write");
  f << text;
}

json structure_json(const ScheduleStructure& st) {
  json groups = json::array();
  for (const Group& g : st.groups) {
    json subs = json::array();
    for (const Subgroup& s : g.subgroups) {
      subs.push_back({{"first", s.first + 1},
                      {"last", s.last + 1},
                      {"duration", s.duration},
                      {"kind", to_string(s.kind)}});
    }
    groups.push_back(
        {{"first", g.first + 1}, {"last", g.last + 1}, {"kind", to_string(g.kind)},
         {"subgroups", std::move(subs)}});
  }
  json packets = json::array();
  for (const PacketLabel& p : st.packets) {
    json flags = json::array();
    if (p.regular_end) flags.push_back("regular");
    if (p.pre_critical) flags.push_back("pre_critical");
    if (p.post_critical) flags.push_back("post_critical");
    packets.push_back({{"packet", p.index + 1}, {"flags", std::move(flags)}});
  }
  return {{"groups", std::move(groups)}, {"packets", std::move(packets)}};
}

std::string csv_schedule(const Schedule& sched, const ScheduleStructure& st) {
  std::vector<std::string> label(sched.size());
  for (const Group& g : st.groups) {
    for (const Subgroup& s : g.subgroups) {
      for (std::size_t i = s.first; i <= s.last; ++i) label[i] = to_string(s.kind);
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "packet,duration,departure,subgroup_kind\n";
  for (std::size_t i = 0; i < sched.size(); ++i) {
    os << i + 1 << ',' << sched.durations()[i] << ',' << sched.departures()[i] << ','
       << label[i] << '\n';
  }
  return os.str();
}

}  // namespace

InstanceFile parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("/: expected an object");
  int version = 1;
  if (doc.contains("schema_version")) {
    const json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != 1) {
      throw InputError("/schema_version: only version 1 is supported");
    }
  }
  if (!doc.contains("arrivals") || !doc.at("arrivals").is_array()) {
    throw InputError("/arrivals: expected an array");
  }
  std::vector<double> arrivals;
  for (std::size_t i = 0; i < doc.at("arrivals").size(); ++i) {
    arrivals.push_back(number_at(doc.at("arrivals")[i], "/arrivals/" + std::to_string(i)));
  }
  std::vector<Bound> pre = bounds_at(doc, "pre_delays");
  std::vector<Bound> post = bounds_at(doc, "post_delays");
  if (!doc.contains("reference_time")) throw InputError("/reference_time: missing");
  const double t_r = number_at(doc.at("reference_time"), "/reference_time");

  std::optional<CostSpec> cost;
  if (doc.contains("cost")) {
    const json& c = doc.at("cost");
    if (!c.is_object() || !c.contains("kind") || !c.at("kind").is_string()) {
      throw InputError("/cost/kind: expected \"inverse\" or \"shannon\"");
    }
    CostSpec spec;
    spec.kind = c.at("kind").get<std::string>();
    if (spec.kind != "inverse" && spec.kind != "shannon") {
      throw InputError("/cost/kind: expected \"inverse\" or \"shannon\"");
    }
    if (spec.kind == "shannon") {
      if (!c.contains("bits")) throw InputError("/cost/bits: required for shannon");
      spec.bits = number_at(c.at("bits"), "/cost/bits");
      if (!(spec.bits > 0.0)) throw InputError("/cost/bits: must be positive");
    }
    cost = spec;
  }
  std::optional<double> w_max;
  if (doc.contains("w_max")) {
    w_max = number_at(doc.at("w_max"), "/w_max");
    if (!(*w_max > 0.0)) throw InputError("/w_max: must be positive");
  }
  try {
    return {version, ProblemInstance(std::move(arrivals), std::move(pre), std::move(post), t_r),
            cost, w_max};
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid instance: ") + e.what());
  }
}

InstanceFile load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string serialize_instance(const InstanceFile& file) {
  json j = json::object();
  j["schema_version"] = file.schema_version;
  j["arrivals"] = std::vector<double>(file.instance.arrivals().begin(),
                                      file.instance.arrivals().end());
  j["pre_delays"] = bounds_json(file.instance.pre_delays());
  j["post_delays"] = bounds_json(file.instance.post_delays());
  j["reference_time"] = file.instance.reference_time();
  if (file.cost) {
    json c = {{"kind", file.cost->kind}};
    if (file.cost->kind == "shannon") c["bits"] = file.cost->bits;
    j["cost"] = std::move(c);
  }
  if (file.w_max) j["w_max"] = *file.w_max;
  return j.dump(2) + "\n";
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
  std::optional<InstanceFile> file;
  try {
    file = load_instance(path);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const ProblemInstance& inst = file->instance;
  const FeasibilityVerdict v = check_feasibility(inst);
  const DerivedBounds b = derive_bounds(inst);
  out << (v.feasible ? "feasible" : "infeasible") << '\n';
  for (const FeasibilityViolation& x : v.violations) {
    out << "  violation " << to_string(x.rule) << ": packet " << x.packet + 1;
    if (x.earlier) out << " against packet " << *x.earlier + 1;
    out << " (" << x.detail << ")\n";
  }
  out << "end time " << b.end_time << '\n';
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double lo = b.departure_floors[i].value_or(inst.arrivals()[i]);
    out << "packet " << i + 1 << ": valid departure region [" << lo << ", " << b.deadline(i)
        << "]\n";
  }
  if (!v.feasible) return kExitNegative;
  const Decomposition d = decompose(inst);
  out << "segments " << d.segments.size() << '\n';
  for (const Segment& s : d.segments) {
    out << "  packets " << s.first + 1 << ".." << s.last + 1 << " origin " << s.origin << '\n';
  }
  return kExitOk;
}

int cmd_schedule(const std::string& path, const ScheduleOptions& options, std::ostream& out,
                 std::ostream& err) {
  std::optional<InstanceFile> loaded;
  CostModel cost = CostModel::reciprocal();
  try {
    loaded = load_instance(path);
    if (loaded->cost) cost = loaded->cost->model();
    if (options.objective != "energy" && options.objective != "time") {
      throw InputError("--objective: expected energy or time");
    }
    if (options.objective == "time" && !loaded->w_max) {
      throw InputError("/w_max: required for the time objective");
    }
    if (options.format != "json" && options.format != "csv") {
      throw InputError("--format: expected json or csv");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const InstanceFile& file = *loaded;
  const ProblemInstance& inst = file.instance;
  const FeasibilityVerdict verdict = check_feasibility(inst);
  if (!verdict.feasible) {
    err << "instance is infeasible";
    for (const FeasibilityViolation& x : verdict.violations) err << "; " << to_string(x.rule);
    err << '\n';
    return kExitNegative;
  }
  const DerivedBounds b = derive_bounds(inst);
  json result;
  result["objective"] = options.objective;
  result["cost_model"] = cost.label();
  std::optional<Schedule> sched;
  FrameEnd frame_end = FrameEnd::exact;
  bool ok = true;
  if (options.objective == "energy") {
    sched = schedule_energy(inst);
  } else {
    try {
      TimeScheduleResult r = schedule_time_two_sided(BudgetedInstance(inst, cost, *file.w_max));
      result["case"] = to_string(r.case_tag);
      result["energy_used"] = r.energy_used;
      sched = std::move(r.schedule);
    } catch (const InsufficientBudget& e) {
      err << "insufficient budget: minimal budget " << e.required() << ", available "
          << e.available() << '\n';
      return kExitBudget;
    }
    frame_end = FrameEnd::at_most;
  }
  const VerificationReport report = verify_schedule(inst, *sched, cost, frame_end);
  result["durations"] = std::vector<double>(sched->durations().begin(), sched->durations().end());
  result["departures"] =
      std::vector<double>(sched->departures().begin(), sched->departures().end());
  result["cost"] = report.total_cost;
  result["completion_time"] = sched->finish_time();
  result["violations"] = report.violation_count();
  ok = report.all_ok();
  std::optional<ScheduleStructure> structure;
  if (ok) {
    structure = classify(inst, *sched, frame_end);
    result["structure"] = structure_json(*structure);
  }
  if (options.oracle_check) {
    try {
      if (options.objective == "energy") {
        const OracleResult o = oracle_energy(inst, cost, b.end_time);
        const double delta = std::abs(report.total_cost - o.cost);
        const bool pass = delta <= 1e-6 * (1.0 + o.cost);
        result["oracle"] = {{"cost", o.cost}, {"delta", delta}, {"ok", pass}};
        ok = ok && pass;
      } else {
        const OracleTimeResult o = oracle_time(BudgetedInstance(inst, cost, *file.w_max));
        const double delta = std::abs(sched->finish_time() - o.completion_time);
        const bool pass = delta <= 1e-6 * b.end_time;
        result["oracle"] = {{"completion_time", o.completion_time}, {"delta", delta},
                            {"ok", pass}};
        ok = ok && pass;
      }
    } catch (const Error& e) {
      result["oracle"] = {{"error", e.what()}, {"ok", false}};
      ok = false;
    }
  }
  try {
    if (options.format == "csv" && structure) {
      write_output(csv_schedule(*sched, *structure), options.out_path, out);
    } else {
      write_output(result.dump(2) + "\n", options.out_path, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return ok ? kExitOk : kExitNegative;
}

int cmd_sweep(const SweepOptionsCli& options, std::ostream& out, std::ostream& err) {
  FigurePreset preset;
  try {
    if (options.figure) {
      preset = figure_preset(*options.figure);
    } else {
      if (options.axis.empty()) throw InputError("--axis: at least one value required");
      if (options.objective != "energy" && options.objective != "time") {
        throw InputError("--objective: expected energy or time");
      }
      preset.name = "sweep";
      preset.spec = {options.packets, options.reference_time, options.window, options.seed,
                     options.trials};
      preset.objective =
          options.objective == "energy" ? Objective::Kind::energy : Objective::Kind::time;
      preset.axis = options.axis;
    }
    preset.spec.trials = options.trials;
    preset.spec.seed = options.seed;
    preset.spec.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  SweepOptions run_options;
  run_options.parallel = !options.serial;
  run_options.threads = options.threads;
  if (run_options.threads == 0) {
    if (const char* env = std::getenv("TWOSIDED_THREADS")) run_options.threads = std::atoi(env);
  }
  const SweepReport report = run_preset(preset, CostModel::reciprocal(), run_options);

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  const std::filesystem::path dir(options.out_dir);
  const auto csv_path = dir / (preset.name + ".csv");
  const auto json_path = dir / (preset.name + ".json");
  std::ofstream csv(csv_path);
  std::ofstream js(json_path);
  if (!csv || !js) {
    err << "error: cannot write reports under " << options.out_dir << '\n';
    return kExitInput;
  }
  write_csv(report, csv);
  write_json(report, js);
  out << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offline packet scheduling under two-sided delay constraints"};
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Check feasibility and decomposition of an instance");
  check->add_option("instance", check_path, "Instance JSON file")->required();

  std::string schedule_path;
  ScheduleOptions sopt;
  std::string out_path;
  auto* schedule = app.add_subcommand("schedule", "Compute an optimal schedule");
  schedule->add_option("instance", schedule_path, "Instance JSON file")->required();
  schedule->add_option("--objective", sopt.objective, "energy or time")
      ->check(CLI::IsMember({"energy", "time"}));
  schedule->add_flag("--oracle-check", sopt.oracle_check, "Compare against the numerical oracle");
  schedule->add_option("--format", sopt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  schedule->add_option("--out", out_path, "Write the result to this file");

  SweepOptionsCli wopt;
  std::string figure;
  auto* sweep = app.add_subcommand("sweep", "Run a benchmark sweep over random instances");
  sweep->add_option("--figure", figure, "fig6 or fig7")->check(CLI::IsMember({"fig6", "fig7"}));
  sweep->add_option("--objective", wopt.objective, "energy (axis T) or time (axis w_max)")
      ->check(CLI::IsMember({"energy", "time"}));
  sweep->add_option("--packets", wopt.packets, "Packets per instance");
  sweep->add_option("--reference-time", wopt.reference_time, "t_R");
  sweep->add_option("--window", wopt.window, "Window T for the time objective");
  sweep->add_option("--axis", wopt.axis, "Axis values")->delimiter(',');
  sweep->add_option("--trials", wopt.trials, "Trials per axis value");
  sweep->add_option("--seed", wopt.seed, "Base seed");
  sweep->add_option("--out-dir", wopt.out_dir, "Output directory");
  sweep->add_option("--threads", wopt.threads, "OpenMP threads (default: TWOSIDED_THREADS)");
  sweep->add_flag("--serial", wopt.serial, "Run trials on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitInput;
  }
  if (*check) return cmd_check(check_path, out, err);
  if (*schedule) {
    if (!out_path.empty()) sopt.out_path = out_path;
    return cmd_schedule(schedule_path, sopt, out, err);
  }
  if (!figure.empty()) wopt.figure = figure;
  return cmd_sweep(wopt, out, err);
}

}  // namespace twosided::cli
