// Copyright 2026 The coarse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coarse_cli/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/corpus.hpp"
#include "coarse/dynamics.hpp"
#include "coarse/error.hpp"
#include "coarse/json_io.hpp"
#include "coarse/quantum_cg.hpp"
#include "coarse/stochastic.hpp"
#include "coarse/symmetry.hpp"

namespace coarse::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  double tol = 1e-9;
  bool force = false;
  bool strict = false;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;

  std::string input;
  std::string rates;
  std::string partition;
  std::string perm_rep;
  std::string hamiltonian;
  std::string group;
  std::string table;
  std::string superop;
  std::string state;
  std::string p0;
  std::string times;
  std::optional<std::size_t> basis_state;

  // examples
  WalkParams walk;
  std::optional<double> a_tilde;
  std::size_t n = 3;
  std::optional<double> gamma;
  std::optional<double> coupling;
  std::optional<double> temperature;
  bool broken = false;
  std::size_t depth = 2;
  std::vector<std::string> edges;
};

// Recognizes which schema a bare JSON object follows.
std::string kind_of(const Json& j) {
  if (!j.is_object()) return "";
  if (j.contains("rows") && j.contains("dim")) return "superoperator";
  if (j.contains("rows")) return "matrix";
  if (j.contains("dim") && (j.contains("generators") || j.contains("perm_generators"))) return "group";
  if (j.contains("n") && j.contains("generators")) return "perm_rep";
  if (j.contains("n") && j.contains("blocks")) return "partition";
  if (j.contains("dim") && j.contains("blocks")) return "table";
  return "bundle";
}

std::string kind_for_key(const std::string& key) {
  if (key == "rate_matrix" || key == "hamiltonian" || key == "state") return "matrix";
  return key;
}

class Inputs {
 public:
  Inputs(const Options& opt, std::istream& in) : opt_(opt), in_(in) {}

  /// Value for `key`: the file flag first, then the --input bundle, then
  /// stdin. A bare object on stdin counts when `primary` is set and it has
  /// the right schema.
  std::optional<Json> find(const std::string& key, const std::string& file, bool primary) {
    if (!file.empty()) {
      Json j = read_json_file(file);
      if (kind_of(j) == "bundle") {
        if (!j.contains(key)) throw InvalidInput(file + ": no \"" + key + "\" entry");
        return std::optional<Json>(std::in_place, j[key]);
      }
      return std::optional<Json>(std::in_place, std::move(j));
    }
    const Json& b = bundle();
    if (b.is_null()) return std::nullopt;
    const std::string k = kind_of(b);
    if (k == "bundle") {
      if (b.contains(key)) return std::optional<Json>(std::in_place, b[key]);
      return std::nullopt;
    }
    if (primary && k == kind_for_key(key)) return std::optional<Json>(std::in_place, b);
    return std::nullopt;
  }

  Json need(const std::string& key, const std::string& file, bool primary = false) {
    auto j = find(key, file, primary);
    if (!j) throw InvalidInput("missing input \"" + key + "\" (pass a file flag or pipe a JSON bundle)");
    return *j;
  }

 private:
  const Json& bundle() {
    if (loaded_) return bundle_;
    loaded_ = true;
    if (!opt_.input.empty()) {
      bundle_ = read_json_file(opt_.input);
      return bundle_;
    }
    std::string text((std::istreambuf_iterator<char>(in_)), std::istreambuf_iterator<char>());
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) bundle_ = parse_json(text, "stdin");
    return bundle_;
  }

  const Options& opt_;
  std::istream& in_;
  bool loaded_ = false;
  Json bundle_;
};

struct Context {
  Options opt;
  std::istream* in = nullptr;
  std::ostream* out = nullptr;
  std::string command;
  int code = kOk;
};

Tolerance tolerance(const Options& o) { return Tolerance{o.tol, Tolerance{}.abs}; }

std::vector<double> parse_number_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("cannot parse ") + what + " entry \"" + item + "\"");
    }
  }
  return out;
}

std::vector<double> load_times(Inputs& in, const Options& o) {
  if (!o.times.empty()) {
    if (fs::exists(o.times)) return times_from_json(read_json_file(o.times));
    return parse_number_list(o.times, "--times");
  }
  return times_from_json(in.need("times", ""));
}

RateMatrix load_rates(Inputs& in, const Options& o) {
  return RateMatrix(real_matrix_from_json(in.need("rate_matrix", o.rates, true)), tolerance(o));
}

Mat load_hamiltonian(Inputs& in, const Options& o) { return matrix_from_json(in.need("hamiltonian", o.hamiltonian, true)); }

// Hamiltonian when one is available, otherwise a raw superoperator.
Superoperator load_generator(Inputs& in, const Options& o, std::optional<Mat>* h_out = nullptr) {
  if (o.superop.empty()) {
    if (auto h = in.find("hamiltonian", o.hamiltonian, true)) {
      Mat hm = matrix_from_json(*h);
      if (h_out) *h_out = hm;
      return hamiltonian_generator(hm, o.tol);
    }
  }
  return superoperator_from_json(in.need("superoperator", o.superop, true));
}

Mat load_state(Inputs& in, const Options& o, std::size_t dim) {
  if (o.basis_state) {
    if (*o.basis_state >= dim) throw InvalidInput("--basis-state out of range");
    Mat rho = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    rho(static_cast<Eigen::Index>(*o.basis_state), static_cast<Eigen::Index>(*o.basis_state)) = 1.0;
    return rho;
  }
  return matrix_from_json(in.need("state", o.state));
}

Json base_report(const Context& c, bool compatible, double residual) {
  return {{"command", c.command}, {"compatible", compatible}, {"residual", residual},
          {"artifacts", Json::object()}, {"warnings", Json::array()}};
}

void add_warnings(Json& report, const std::vector<std::string>& w) {
  for (const auto& s : w) report["warnings"].push_back(s);
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + o.out + ": " + ec.message());
  return dir;
}

void save_artifact(Json& report, const Options& o, const std::string& name, const std::string& file,
                   const std::string& text) {
  if (o.out.empty()) return;
  const fs::path p = out_dir(o) / file;
  write_text_file(p, text);
  report["artifacts"][name] = p.string();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Prints the report (and writes report.json) and sets the exit code.
void finish(Context& c, Json report) {
  if (!c.opt.out.empty()) report["artifacts"]["report"] = (out_dir(c.opt) / "report.json").string();
  const std::string text = dump(report);
  if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "report.json", text);
  *c.out << text;
  if (c.opt.strict && report.contains("compatible") && !report["compatible"].get<bool>()) c.code = kIncompatible;
}

void emit(Context& c, const std::string& text) { *c.out << text; }

// --- stoch ---------------------------------------------------------------------

void stoch_check(Context& c, Inputs& in) {
  const RateMatrix q = load_rates(in, c.opt);
  const Partition p = partition_from_json(in.need("partition", c.opt.partition));
  const RateUniformityReport u = rate_uniformity_report(q, p, tolerance(c.opt));
  const CheckResult r = check_stochastic_compatibility(q, p, tolerance(c.opt));
  Json report = base_report(c, r.compatible, r.residual);
  report["max_rate_spread"] = u.max_spread;
  finish(c, report);
}

void stoch_reduce(Context& c, Inputs& in) {
  const RateMatrix q = load_rates(in, c.opt);
  const Partition p = partition_from_json(in.need("partition", c.opt.partition));
  const ReducedRates r = reduced_rate_matrix(q, p, c.opt.force, tolerance(c.opt));
  Json report = base_report(c, r.check.compatible, r.check.residual);
  add_warnings(report, r.warnings);
  report["reduced"] = to_json(r.rates.matrix());
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(r.rates.matrix())));
  finish(c, report);
}

void stoch_refine(Context& c, Inputs& in) {
  const RateMatrix q = load_rates(in, c.opt);
  const auto seed_json = in.find("partition", c.opt.partition, false);
  const Partition seed = seed_json ? partition_from_json(*seed_json) : Partition::single_block(q.n());
  const Partition refined = coarsest_equitable_refinement(q, seed);
  const CheckResult r = check_stochastic_compatibility(q, refined, tolerance(c.opt));
  Json report = base_report(c, r.compatible, r.residual);
  report["partition"] = to_json(refined);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(refined)));
  finish(c, report);
}

void stoch_evolve(Context& c, Inputs& in) {
  const RateMatrix q = load_rates(in, c.opt);
  RealVec p0;
  if (!c.opt.p0.empty() && !fs::exists(c.opt.p0)) {
    const auto v = parse_number_list(c.opt.p0, "--p0");
    p0 = Eigen::Map<const RealVec>(v.data(), static_cast<Eigen::Index>(v.size()));
  } else {
    p0 = real_vector_from_json(in.need("p0", c.opt.p0));
  }
  const auto times = load_times(in, c.opt);
  const auto traj = evolve_stochastic(q, p0, times);
  const std::string csv = trajectory_csv(times, traj);
  if (c.opt.format == "csv") {
    if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "trajectory.csv", csv);
    emit(c, csv);
    return;
  }
  Json report = base_report(c, true, 0.0);
  Json states = Json::array();
  for (const auto& p : traj) states.push_back(to_json(p));
  report["times"] = times;
  report["states"] = std::move(states);
  save_artifact(report, c.opt, "trajectory", "trajectory.csv", csv);
  finish(c, report);
}

void stoch_orbits(Context& c, Inputs& in) {
  const PermRep rep = perm_rep_from_json(in.need("perm_rep", c.opt.perm_rep, true));
  const Partition orbits = orbit_partition(rep).canonical();
  Json report = base_report(c, true, 0.0);
  if (auto qj = in.find("rate_matrix", c.opt.rates, false)) {
    const RateMatrix q(real_matrix_from_json(*qj), tolerance(c.opt));
    const GroupCheck g = check_group_compatibility(q, rep, tolerance(c.opt));
    report["compatible"] = g.compatible;
    report["residual"] = g.residual;
    report["group_order"] = g.group_order;
    report["symmetric_shortcut_used"] = g.symmetric_shortcut_used;
  }
  report["partition"] = to_json(orbits);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(orbits)));
  finish(c, report);
}

// --- quantum -------------------------------------------------------------------

void quantum_check(Context& c, Inputs& in) {
  std::optional<Mat> h;
  const Superoperator l = load_generator(in, c.opt, &h);
  const BipartitionTable t = table_from_json(in.need("table", c.opt.table));
  const CheckResult r = check_superop_compatibility(l, t, c.opt.tol);
  Json report = base_report(c, r.compatible, r.residual);
  add_warnings(report, t.warnings());
  if (h) {
    const HamiltonianCheck hc = check_hamiltonian_compatibility(*h, t, c.opt.tol);
    report["commutator_test"] = {{"compatible", hc.compatible}, {"worst_residual", hc.worst_residual}};
    Json per = Json::array();
    for (const auto& e : hc.per_operator) {
      per.push_back({{"block", e.block}, {"k", e.k}, {"l", e.l}, {"residual", e.residual}});
    }
    report["commutator_test"]["per_operator"] = std::move(per);
    if (hc.compatible != r.compatible) report["warnings"].push_back("commutator test and projection test disagree");
  }
  finish(c, report);
}

void quantum_reduce(Context& c, Inputs& in) {
  const Superoperator l = load_generator(in, c.opt);
  const BipartitionTable t = table_from_json(in.need("table", c.opt.table));
  const ReducedGenerator r = reduced_generator(l, t, c.opt.force, c.opt.tol);
  Json report = base_report(c, r.check.compatible, r.check.residual);
  add_warnings(report, t.warnings());
  add_warnings(report, r.warnings);
  report["reduced"] = to_json(r.generator);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(r.generator)));
  finish(c, report);
}

void quantum_evolve(Context& c, Inputs& in) {
  const Superoperator l = load_generator(in, c.opt);
  const Mat rho0 = load_state(in, c.opt, l.dim);
  const auto times = load_times(in, c.opt);
  const auto traj = evolve_quantum(l, rho0, times);
  const std::string csv = trajectory_csv(times, traj);
  if (c.opt.format == "csv") {
    if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "trajectory.csv", csv);
    emit(c, csv);
    return;
  }
  Json report = base_report(c, true, 0.0);
  if (auto tj = in.find("table", c.opt.table, false)) {
    const BipartitionTable t = table_from_json(*tj);
    const CheckResult r = check_superop_compatibility(l, t, c.opt.tol);
    report["compatible"] = r.compatible;
    report["residual"] = r.residual;
    report["trajectory_defect"] = verify_reduction_by_trajectory(l, t, rho0, times);
  }
  Json states = Json::array();
  for (const auto& s : traj) states.push_back(to_json(s));
  report["times"] = times;
  report["states"] = std::move(states);
  save_artifact(report, c.opt, "trajectory", "trajectory.csv", csv);
  finish(c, report);
}

void quantum_apply(Context& c, Inputs& in) {
  const BipartitionTable t = table_from_json(in.need("table", c.opt.table));
  const Mat rho = load_state(in, c.opt, t.dim());
  const StateValidation v = validate_density_matrix(rho, c.opt.tol);
  const Mat reduced = qcg_apply(t, rho, c.opt.force);
  Json report = base_report(c, true, 0.0);
  add_warnings(report, t.warnings());
  if (!v.valid) report["warnings"].push_back("input is not a density matrix: " + v.describe());
  report["reduced"] = to_json(reduced);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(reduced)));
  finish(c, report);
}

// --- group ---------------------------------------------------------------------

UnitaryRep load_group(Inputs& in, const Options& o) { return unitary_rep_from_json(in.need("group", o.group, true)); }

Json subspace_json(const OperatorSubspace& s) {
  Json basis = Json::array();
  for (const Mat& b : s.basis()) basis.push_back(to_json(b));
  return {{"dimension", s.dimension()}, {"basis", std::move(basis)}};
}

void group_closure(Context& c, Inputs& in) {
  const auto elems = closure(load_group(in, c.opt));
  Json report = base_report(c, true, 0.0);
  report["order"] = elems.size();
  Json list = Json::array();
  for (const Mat& g : elems) list.push_back(to_json(g));
  report["elements"] = std::move(list);
  finish(c, report);
}

void group_commutant(Context& c, Inputs& in, bool bi) {
  const UnitaryRep rep = load_group(in, c.opt);
  Json report = base_report(c, true, 0.0);
  report["subspace"] = subspace_json(bi ? bicommutant(rep) : commutant(rep));
  finish(c, report);
}

void group_check(Context& c, Inputs& in) {
  const Mat h = load_hamiltonian(in, c.opt);
  const UnitaryRep rep = load_group(in, c.opt);
  const SymmetryCheck s = check_symmetrization_compatibility(h, rep, c.opt.tol);
  Json report = base_report(c, s.compatible, s.residual);
  report["generator_residuals"] = s.generator_residuals;
  report["closure_residual"] = s.closure_residual ? Json(*s.closure_residual) : Json(nullptr);
  report["group_order"] = s.group_order;
  finish(c, report);
}

void group_split(Context& c, Inputs& in) {
  const HamiltonianSplit s = split_hamiltonian(load_hamiltonian(in, c.opt), load_group(in, c.opt), c.opt.tol);
  Json report = base_report(c, true, std::max(s.a_residual, s.b_residual));
  report["a"] = to_json(s.a);
  report["b"] = to_json(s.b);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump({{"a", report["a"]}, {"b", report["b"]}}));
  finish(c, report);
}

void group_blocks(Context& c, Inputs& in) {
  const BlockStructure bs = block_structure(load_group(in, c.opt), c.opt.seed);
  Json report = base_report(c, true, bs.residual);
  Json sectors = Json::array();
  for (const Sector& s : bs.sectors) {
    sectors.push_back({{"irrep_dim", s.irrep_dim}, {"multiplicity", s.multiplicity}, {"isometry", to_json(s.isometry)}});
  }
  report["sectors"] = std::move(sectors);
  finish(c, report);
}

void group_table(Context& c, Inputs& in) {
  const BlockStructure bs = block_structure(load_group(in, c.opt), c.opt.seed);
  const BipartitionTable t = symmetrization_table(bs);
  Json report = base_report(c, true, bs.residual);
  report["table"] = to_json(t);
  save_artifact(report, c.opt, "reduced", "reduced.json", dump(to_json(t)));
  finish(c, report);
}

// --- examples ------------------------------------------------------------------

void examples_walk(Context& c) {
  WalkParams p = c.opt.walk;
  p.a_tilde = c.opt.a_tilde;
  const RateMatrix q = build_six_state_walk(p);
  const std::string text = dump(to_json(q.matrix()));
  if (!c.opt.out.empty()) {
    const fs::path dir = out_dir(c.opt);
    write_text_file(dir / "rates.json", text);
    write_text_file(dir / "columns.json", dump(to_json(walk_column_partition())));
    write_text_file(dir / "split.json", dump(to_json(walk_split_partition())));
  }
  emit(c, text);
}

void examples_ising(Context& c) {
  IsingConfig cfg;
  if (c.opt.coupling || c.opt.temperature) {
    if (!c.opt.coupling || !c.opt.temperature) throw InvalidInput("--j and --t must be given together");
    cfg = IsingConfig::from_coupling(c.opt.n, *c.opt.coupling, *c.opt.temperature);
  } else {
    cfg = IsingConfig{c.opt.n, c.opt.gamma.value_or(0.5)};
  }
  const RateMatrix q = build_glauber_ising(cfg);
  const PermRep rep = ising_symmetry_group(cfg.n);
  Json bundle = {{"rate_matrix", to_json(q.matrix())},
                 {"perm_rep", to_json(rep)},
                 {"partition", to_json(orbit_partition(rep).canonical())},
                 {"energy_partition", to_json(ising_energy_partition(cfg.n))},
                 {"gamma", cfg.gamma}};
  if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "ising.json", dump(bundle));
  emit(c, dump(bundle));
}

std::pair<std::size_t, std::size_t> parse_edge(const std::string& s) {
  const auto v = parse_number_list(s, "--edge");
  if (v.size() != 2 || v[0] < 0 || v[1] < 0 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
    throw InvalidInput("--edge expects two vertex indices, e.g. 3,4");
  }
  return {static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])};
}

void examples_tree(Context& c) {
  TreeConfig cfg;
  cfg.depth = c.opt.depth;
  cfg.broken = c.opt.broken;
  for (const auto& e : c.opt.edges) cfg.extra_edges.push_back(parse_edge(e));
  const TreeWalk w = build_ctqw_tree(cfg);
  const BipartitionTable t =
      cfg.depth == 2 ? tree_symmetrization_table() : symmetrization_table(block_structure(w.group, c.opt.seed));
  Json bundle = {{"hamiltonian", to_json(w.hamiltonian)}, {"group", to_json(w.group)}, {"table", to_json(t)}};
  if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "tree.json", dump(bundle));
  emit(c, dump(bundle));
}

void examples_tables(Context& c) {
  Json out = Json::object();
  for (const SpecialCase& s : special_case_tables()) {
    Json ops = Json::array();
    for (const Mat& m : s.golden_operators) ops.push_back(to_json(m));
    out[s.name] = {{"table", to_json(s.table)}, {"operators", std::move(ops)}};
  }
  if (!c.opt.out.empty()) write_text_file(out_dir(c.opt) / "tables.json", dump(out));
  emit(c, dump(out));
}

// --- wiring --------------------------------------------------------------------

void add_common(CLI::App* app, Options& o) {
  app->add_option("--tol", o.tol, "Compatibility tolerance")->check(CLI::PositiveNumber);
  app->add_flag("--force", o.force, "Reduce even when incompatible");
  app->add_flag("--strict", o.strict, "Exit with 1 when a check reports incompatible");
  app->add_option("--out", o.out, "Directory for report.json, reduced.json, trajectory.csv");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", o.seed, "Seed for randomized decompositions");
  app->add_option("--input", o.input, "JSON bundle used instead of stdin");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.in = &in;
  ctx.out = &out;
  Options& o = ctx.opt;

  CLI::App app{"Coarse-graining of stochastic and quantum dynamics", "coarse"};
  app.require_subcommand(1);
  std::function<void(Inputs&)> action;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<void(Inputs&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, o);
    const std::string full = parent->get_name() + " " + name;
    sub->callback([&, fn, full] {
      ctx.command = full;
      action = fn;
    });
    return sub;
  };

  CLI::App* stoch = app.add_subcommand("stoch", "Classical coarse-graining of rate matrices");
  stoch->require_subcommand(1);
  for (auto* s : {leaf(stoch, "check", "Compatibility of a partition", [&](Inputs& i) { stoch_check(ctx, i); }),
                  leaf(stoch, "reduce", "Reduced rate matrix", [&](Inputs& i) { stoch_reduce(ctx, i); }),
                  leaf(stoch, "refine", "Coarsest compatible refinement", [&](Inputs& i) { stoch_refine(ctx, i); }),
                  leaf(stoch, "evolve", "Evolve a probability vector", [&](Inputs& i) { stoch_evolve(ctx, i); }),
                  leaf(stoch, "orbits", "Orbit partition of a permutation group", [&](Inputs& i) { stoch_orbits(ctx, i); })}) {
    s->add_option("--rates", o.rates, "Rate matrix JSON");
    s->add_option("--partition", o.partition, "Partition JSON");
    s->add_option("--perm-rep", o.perm_rep, "Permutation group JSON");
    s->add_option("--p0", o.p0, "Initial distribution: JSON file or comma list");
    s->add_option("--times", o.times, "Times: JSON file or comma list");
  }

  CLI::App* quantum = app.add_subcommand("quantum", "Quantum coarse-graining through bipartition tables");
  quantum->require_subcommand(1);
  for (auto* s : {leaf(quantum, "check", "Compatibility of a generator with a table", [&](Inputs& i) { quantum_check(ctx, i); }),
                  leaf(quantum, "reduce", "Reduced generator", [&](Inputs& i) { quantum_reduce(ctx, i); }),
                  leaf(quantum, "evolve", "Evolve a density matrix", [&](Inputs& i) { quantum_evolve(ctx, i); }),
                  leaf(quantum, "apply", "Apply the coarse-graining channel", [&](Inputs& i) { quantum_apply(ctx, i); })}) {
    s->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian matrix JSON");
    s->add_option("--superop", o.superop, "Superoperator JSON");
    s->add_option("--table", o.table, "Bipartition table JSON");
    s->add_option("--state", o.state, "Density matrix JSON");
    s->add_option("--basis-state", o.basis_state, "Use |k><k| as the state");
    s->add_option("--times", o.times, "Times: JSON file or comma list");
  }

  CLI::App* group = app.add_subcommand("group", "Finite unitary groups and symmetrization");
  group->require_subcommand(1);
  for (auto* s : {leaf(group, "closure", "Enumerate the group", [&](Inputs& i) { group_closure(ctx, i); }),
                  leaf(group, "commutant", "Commutant basis", [&](Inputs& i) { group_commutant(ctx, i, false); }),
                  leaf(group, "bicommutant", "Bicommutant basis", [&](Inputs& i) { group_commutant(ctx, i, true); }),
                  leaf(group, "check", "Symmetrization compatibility of a Hamiltonian", [&](Inputs& i) { group_check(ctx, i); }),
                  leaf(group, "split", "Split H into bicommutant and commutant parts", [&](Inputs& i) { group_split(ctx, i); }),
                  leaf(group, "blocks", "Irrep and multiplicity decomposition", [&](Inputs& i) { group_blocks(ctx, i); }),
                  leaf(group, "table", "Symmetrization bipartition table", [&](Inputs& i) { group_table(ctx, i); })}) {
    s->add_option("--group", o.group, "Group JSON");
    s->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian matrix JSON");
  }

  CLI::App* examples = app.add_subcommand("examples", "Emit the worked examples");
  examples->require_subcommand(1);
  CLI::App* walk = leaf(examples, "walk", "Six-vertex random walk rate matrix", [&](Inputs&) { examples_walk(ctx); });
  walk->add_option("--a", o.walk.a);
  walk->add_option("--b", o.walk.b);
  walk->add_option("--c", o.walk.c);
  walk->add_option("--d", o.walk.d);
  walk->add_option("--e", o.walk.e);
  walk->add_option("--delta", o.walk.delta);
  walk->add_option("--epsilon", o.walk.epsilon);
  walk->add_option("--a-tilde", o.a_tilde, "Altered v1-v2 rate");
  CLI::App* ising = leaf(examples, "ising", "Glauber-Ising ring bundle", [&](Inputs&) { examples_ising(ctx); });
  ising->add_option("--n", o.n, "Number of spins");
  ising->add_option("--gamma", o.gamma, "tanh(2J/T)");
  ising->add_option("--j", o.coupling, "Coupling J");
  ising->add_option("--t", o.temperature, "Temperature T");
  CLI::App* tree = leaf(examples, "tree", "Binary-tree quantum walk bundle", [&](Inputs&) { examples_tree(ctx); });
  tree->add_flag("--broken", o.broken, "Add the edge (3,4)");
  tree->add_option("--depth", o.depth, "Levels below the root");
  tree->add_option("--edge", o.edges, "Extra edge i,j (repeatable)");
  leaf(examples, "tables", "Spin-1/2 special-case tables", [&](Inputs&) { examples_tables(ctx); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    Inputs inputs(o, in);
    action(inputs);
  } catch (const IncompatibleReduction& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << "; pass --force to reduce anyway)\n";
    return kInvalidInput;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return ctx.code;
}

}  // namespace coarse::cli
