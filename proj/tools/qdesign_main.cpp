// qdesign: construct and verify quantum 2-designs, evaluate closed-form
// information bounds, and maximize mutual information numerically.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdesign/designs.hpp"
#include "qdesign/info.hpp"
#include "qdesign/io.hpp"
#include "qdesign/optimize.hpp"
#include "qdesign/version.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace qdesign;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

std::string format_bits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

struct ManifestBuilder {
  Json manifest;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  ManifestBuilder(const std::string& command, int argc, char** argv) {
    manifest["tool"] = "qdesign";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    std::string line;
    for (int i = 0; i < argc; ++i) {
      if (i) line += ' ';
      line += argv[i];
    }
    manifest["argv"] = line;
    manifest["inputs"] = Json::object();
  }

  void record_input(const fs::path& path) {
    manifest["inputs"][path.string()] = io::content_hash(io::read_file(path));
  }

  template <typename T>
  void set(const std::string& key, const T& value) {
    manifest[key] = value;
  }

  std::string finish() {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    manifest["duration_seconds"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
    return manifest.dump(2);
  }
};

void write_with_manifest(const fs::path& path, const std::string& document,
                         ManifestBuilder& mb) {
  io::write_file(path, io::with_manifest(document, mb.finish()));
}

void write_sidecar_manifest(const fs::path& path, ManifestBuilder& mb) {
  io::write_file(fs::path(path.string() + ".manifest.json"), mb.finish() + "\n");
}

std::optional<std::pair<int, int>> parse_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) return std::nullopt;
  try {
    return std::make_pair(std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2)));
  } catch (...) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// construct

double mixing_from_sic_purity(int d, double a) {
  const double t2 = (a * d * d - 1.0 / d) / (1.0 - 1.0 / d);
  if (t2 < -1e-12 || t2 > 1.0 + 1e-12)
    throw ValidationError("purity parameter a outside the reachable range");
  return std::sqrt(std::clamp(t2, 0.0, 1.0));
}

double mixing_from_mub_purity(int d, double k) {
  const double t2 = (k - 1.0 / d) / (1.0 - 1.0 / d);
  if (t2 < -1e-12 || t2 > 1.0 + 1e-12)
    throw ValidationError("purity parameter k outside the reachable range");
  return std::sqrt(std::clamp(t2, 0.0, 1.0));
}

WeightedStateSet rank_one_sic(int dim, const std::optional<std::string>& fiducial_path,
                              ManifestBuilder& mb) {
  if (fiducial_path) {
    mb.record_input(*fiducial_path);
    const io::SetDocument doc = io::load_set(*fiducial_path);
    if (doc.fiducial) return weyl_heisenberg_orbit(*doc.fiducial);
    if (doc.pure_set) return *doc.pure_set;
    throw ValidationError("fiducial file must hold a sic-fiducial or a pure state-set");
  }
  return builtin_sic(dim);
}

int cmd_construct(const std::string& kind, int dim, std::optional<double> t,
                  std::optional<double> a, std::optional<double> k,
                  const std::optional<std::string>& fiducial_path, const fs::path& out,
                  double tol, ManifestBuilder& mb) {
  mb.set("kind", kind);
  mb.set("dim", dim);
  mb.set("tolerance", tol);

  if (kind == "sic") {
    const WeightedStateSet set = rank_one_sic(dim, fiducial_path, mb);
    const SetValidationReport report = validate_sic(set, tol);
    if (!report.pass) {
      std::cerr << "validation failed: max pairwise deviation " << report.max_deviation
                << "\n";
      return kExitValidation;
    }
    write_with_manifest(out, io::set_to_json(set, "state-set"), mb);
    std::cout << "wrote " << out.string() << " (" << set.size()
              << " states, max deviation " << report.max_deviation << ")\n";
    return 0;
  }
  if (kind == "mub") {
    const WeightedStateSet set = builtin_mub(dim);
    const SetValidationReport report = validate_mub(set, tol);
    if (!report.pass) {
      std::cerr << "validation failed: max pairwise deviation " << report.max_deviation
                << "\n";
      return kExitValidation;
    }
    write_with_manifest(out, io::set_to_json(set, "mub-set"), mb);
    std::cout << "wrote " << out.string() << " (" << set.size()
              << " states, max deviation " << report.max_deviation << ")\n";
    return 0;
  }
  if (kind == "gen-sic" || kind == "gen-mub") {
    const bool mub_like = kind == "gen-mub";
    double mix;
    if (t) {
      mix = *t;
    } else if (!mub_like && a) {
      mix = mixing_from_sic_purity(dim, *a);
    } else if (mub_like && k) {
      mix = mixing_from_mub_purity(dim, *k);
    } else {
      throw ValidationError("gen-sic needs --t or --a; gen-mub needs --t or --k");
    }
    mb.set("t", mix);
    const WeightedStateSet base =
        mub_like ? builtin_mub(dim) : rank_one_sic(dim, fiducial_path, mb);
    const MixedStateSet set = depolarize(base, mix);
    const SetValidationReport report = mub_like ? validate_generalized_mub(set, tol)
                                                : validate_generalized_sic(set, tol);
    if (!report.pass) {
      std::cerr << "validation failed: max deviation " << report.max_deviation << "\n";
      return kExitValidation;
    }
    write_with_manifest(out, io::set_to_json(set, mub_like ? "mub-set" : "state-set"), mb);
    std::cout << "wrote " << out.string() << " (" << set.size() << " operators, "
              << (mub_like ? "k = " : "a = ") << *set.purity_parameter << ")\n";
    return 0;
  }
  throw ValidationError("unknown construction kind: " + kind);
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const fs::path& in, double tol) {
  const io::SetDocument doc = io::load_set(in);
  if (doc.fiducial) {
    const WeightedStateSet orbit = weyl_heisenberg_orbit(*doc.fiducial);
    const SetValidationReport report = validate_sic(orbit, tol);
    std::cout << "fiducial orbit: " << (report.pass ? "SIC" : "not a SIC")
              << " (max deviation " << report.max_deviation << ")\n";
    return report.pass ? 0 : kExitValidation;
  }
  if (doc.pure_set) {
    const WeightedStateSet& set = *doc.pure_set;
    SetValidationReport report{};
    std::string what;
    if (set.labels) {
      report = validate_mub(set, tol);
      what = "maximal MUB set";
    } else {
      report = validate_sic(set, tol);
      what = "SIC set";
    }
    const DesignReport design = check_design(set, 2, tol);
    std::cout << what << ": " << (report.pass ? "pass" : "fail") << " (max deviation "
              << report.max_deviation << ")\n";
    std::cout << "2-design: " << (design.verdict ? "pass" : "fail")
              << " (operator deviation " << design.operator_deviation
              << ", frame potential " << design.frame_potential << ", target "
              << design.frame_potential_target << ")\n";
    return report.pass && design.verdict ? 0 : kExitValidation;
  }
  const MixedStateSet& set = *doc.mixed_set;
  const bool mub_like = set.labels.has_value();
  const SetValidationReport report = mub_like ? validate_generalized_mub(set, tol)
                                              : validate_generalized_sic(set, tol);
  std::cout << (mub_like ? "arbitrary-rank MUB set: " : "arbitrary-rank SIC set: ")
            << (report.pass ? "pass" : "fail") << " (max deviation " << report.max_deviation
            << ")\n";
  return report.pass ? 0 : kExitValidation;
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(int dim, std::optional<double> a, std::optional<double> k,
               const std::string& format, const std::optional<fs::path>& out,
               ManifestBuilder& mb) {
  const BoundSet b = bounds_for_dimension(dim, a, k);
  std::string text;
  if (format == "table") {
    text += "quantity          bits\n";
    text += "accinfo_upper     " + format_bits(b.accinfo_upper) + "\n";
    text += "infopower_upper   " + format_bits(b.infopower_upper) + "\n";
    text += "scrooge_lower     " + format_bits(b.scrooge_lower) + "\n";
    text += "trivial_upper     " + format_bits(b.trivial_upper) + "\n";
    if (b.gen_sic) text += "gen_sic_upper     " + format_bits(*b.gen_sic) + "\n";
    if (b.gen_mub) text += "gen_mub_upper     " + format_bits(*b.gen_mub) + "\n";
  } else if (format == "csv") {
    text = "d,accinfo_upper,infopower_upper,scrooge_lower,trivial_upper,gen_sic,gen_mub\n";
    text += std::to_string(dim) + "," + format_bits(b.accinfo_upper) + "," +
            format_bits(b.infopower_upper) + "," + format_bits(b.scrooge_lower) + "," +
            format_bits(b.trivial_upper) + "," +
            (b.gen_sic ? format_bits(*b.gen_sic) : "") + "," +
            (b.gen_mub ? format_bits(*b.gen_mub) : "") + "\n";
  } else {
    Json j;
    j["dim"] = dim;
    j["accinfo_upper"] = b.accinfo_upper;
    j["infopower_upper"] = b.infopower_upper;
    j["scrooge_lower"] = b.scrooge_lower;
    j["trivial_upper"] = b.trivial_upper;
    if (b.gen_sic) j["gen_sic_upper"] = *b.gen_sic;
    if (b.gen_mub) j["gen_mub_upper"] = *b.gen_mub;
    text = j.dump(2) + "\n";
  }
  std::cout << text;
  if (out) {
    io::write_file(*out, text);
    write_sidecar_manifest(*out, mb);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// mi

int cmd_mi(const fs::path& ensemble_path, const fs::path& povm_path,
           const std::string& format, const std::optional<fs::path>& out,
           ManifestBuilder& mb) {
  mb.record_input(ensemble_path);
  mb.record_input(povm_path);
  const Ensemble e = io::load_ensemble(ensemble_path);
  const Povm p = io::load_povm(povm_path);
  const double bits = mutual_information(born_statistics(e, p));
  std::cout << format_bits(bits) << "\n";
  if (format == "csv" || out) {
    const std::string row = "ensemble,povm,mutual_information_bits\n" +
                            ensemble_path.string() + "," + povm_path.string() + "," +
                            format_bits(bits) + "\n";
    if (out) {
      io::write_file(*out, row);
      write_sidecar_manifest(*out, mb);
    } else {
      std::cout << row;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// optimizers

OptimizerConfig config_from_flags(std::uint64_t seed, int restarts,
                                  const std::optional<std::string>& outcomes,
                                  bool beyond_davies) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.allow_outcomes_beyond_davies = beyond_davies;
  if (outcomes) {
    const auto range = parse_range(*outcomes);
    if (!range) throw ValidationError("--outcomes expects a range like 4..9");
    cfg.min_outcomes = range->first;
    cfg.max_outcomes = range->second;
  }
  return cfg;
}

Json result_to_json(const OptimizationResult& result, const std::string& trace_path) {
  Json j;
  j["value_bits"] = result.value_bits;
  j["bound_bits"] = result.bound_bits;
  j["gap"] = result.bound_gap;
  j["converged"] = result.converged;
  j["restarts_agreeing"] = result.restarts_agreeing;
  j["winning_outcomes"] = result.winning_outcomes;
  j["winning_restart"] = result.winning_restart;
  if (!std::isnan(result.certificate_gap)) j["certificate_gap"] = result.certificate_gap;
  j["trace_csv_path"] = trace_path;
  if (result.best_povm) j["maximizer"] = Json::parse(io::povm_to_json(*result.best_povm));
  if (result.best_ensemble)
    j["maximizer"] = Json::parse(io::ensemble_to_json(*result.best_ensemble));
  if (result.best_state) {
    Json rho = Json::parse(io::ensemble_to_json(
        Ensemble(result.best_state->dim(), {{1.0, *result.best_state}})));
    j["optimal_state"] = rho["elements"][0]["matrix"];
  }
  return j;
}

std::string trace_to_csv(const std::vector<double>& trace) {
  std::string csv = "iteration,value_bits\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.12f\n", i, trace[i]);
    csv += buf;
  }
  return csv;
}

int finish_optimize(const OptimizationResult& result, const fs::path& out,
                    ManifestBuilder& mb) {
  const std::string trace_path = out.string() + ".trace.csv";
  io::write_file(trace_path, trace_to_csv(result.trace));
  mb.set("seed", result.seed);
  write_with_manifest(out, result_to_json(result, trace_path).dump(2) + "\n", mb);
  std::cout << "value_bits " << format_bits(result.value_bits) << "  bound "
            << format_bits(result.bound_bits) << "  gap " << format_bits(result.bound_gap)
            << "  converged " << (result.converged ? "yes" : "no") << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return result.converged ? 0 : kExitNoConvergence;
}

// ---------------------------------------------------------------------------
// figure1

struct FigureRow {
  int dim;
  double accinfo_upper;
  double scrooge_lower;
  double pg_sic;
  double pg_mub;
  std::optional<double> sic_optimized;
  std::optional<double> mub_optimized;
};

std::optional<WeightedStateSet> figure_set(int dim, const std::string& prefix,
                                           const std::optional<fs::path>& dir,
                                           ManifestBuilder& mb) {
  if (prefix == "sic" && (dim == 2 || dim == 3)) return builtin_sic(dim);
  if (prefix == "mub" && dim >= 2 && dim <= 4) return builtin_mub(dim);
  if (!dir) return std::nullopt;
  const fs::path candidate = *dir / (prefix + "_d" + std::to_string(dim) + ".json");
  if (!fs::exists(candidate)) return std::nullopt;
  mb.record_input(candidate);
  const io::SetDocument doc = io::load_set(candidate);
  std::optional<WeightedStateSet> set;
  if (doc.fiducial) {
    set = weyl_heisenberg_orbit(*doc.fiducial);
  } else if (doc.pure_set) {
    set = doc.pure_set;
  }
  if (!set || set->dim != dim) {
    std::cerr << "warning: " << candidate.string()
              << " does not hold a pure state set of dimension " << dim << "\n";
    return std::nullopt;
  }
  return set;
}

int cmd_figure1(int dmin, int dmax, const std::optional<fs::path>& fiducial_dir,
                const fs::path& out, const OptimizerConfig& base_cfg, ManifestBuilder& mb) {
  std::vector<FigureRow> rows;
  for (int d = dmin; d <= dmax; ++d) {
    FigureRow row{d, accinfo_upper_bound(d), scrooge_bounds(d).lower, pg_sic_value(d),
                  pg_mub_value(d), std::nullopt, std::nullopt};
    for (const std::string prefix : {"sic", "mub"}) {
      const auto set = figure_set(d, prefix, fiducial_dir, mb);
      if (!set) {
        std::cerr << "warning: no " << prefix << " input for d = " << d
                  << "; leaving the column blank\n";
        continue;
      }
      const SetValidationReport report =
          prefix == "sic" ? validate_sic(*set) : validate_mub(*set);
      if (!report.pass) {
        std::cerr << "warning: " << prefix << " set for d = " << d
                  << " fails validation (deviation " << report.max_deviation
                  << "); leaving the column blank\n";
        continue;
      }
      OptimizerConfig cfg = base_cfg;
      cfg.seed = mix_seed(base_cfg.seed, static_cast<std::uint64_t>(d * 2 + (prefix == "mub")));
      const OptimizationResult result = maximize_accessible_info(as_ensemble(*set), cfg);
      if (prefix == "sic") {
        row.sic_optimized = result.value_bits;
      } else {
        row.mub_optimized = result.value_bits;
      }
    }
    rows.push_back(row);
  }

  std::string csv = "d,accinfo_upper,scrooge_lower,pg_sic,pg_mub,sic_optimized,mub_optimized\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.dim) + "," + format_bits(row.accinfo_upper) + "," +
           format_bits(row.scrooge_lower) + "," + format_bits(row.pg_sic) + "," +
           format_bits(row.pg_mub) + "," +
           (row.sic_optimized ? format_bits(*row.sic_optimized) : "") + "," +
           (row.mub_optimized ? format_bits(*row.mub_optimized) : "") + "\n";
  }
  io::write_file(out, csv);
  write_sidecar_manifest(out, mb);
  std::cout << csv;
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// conjecture-d4

int cmd_conjecture_d4(const OptimizerConfig& cfg) {
  const WeightedStateSet mub = builtin_mub(4);
  const WeightedStateSet witness = d4_orthonormal_witness();
  const double forward = mutual_information(born_statistics(as_ensemble(mub), as_povm(witness)));
  const double backward = mutual_information(born_statistics(as_ensemble(witness), as_povm(mub)));
  const double target = 0.6;
  const bool witness_ok =
      std::abs(forward - target) <= 1e-9 && std::abs(backward - target) <= 1e-9;
  std::cout << "witness I(E,Q) = " << format_bits(forward) << ", I(F,P) = "
            << format_bits(backward) << " -> " << (witness_ok ? "pass" : "FAIL")
            << " at 1e-9\n";

  const OptimizationResult accinfo = maximize_accessible_info(as_ensemble(mub), cfg);
  const OptimizationResult power = maximize_informational_power(as_povm(mub), cfg);
  const double ceiling = accinfo_upper_bound(4);
  std::cout << "optimized A(E) = " << format_bits(accinfo.value_bits)
            << " (converged " << (accinfo.converged ? "yes" : "no") << ")\n";
  std::cout << "optimized W(P) = " << format_bits(power.value_bits) << " (converged "
            << (power.converged ? "yes" : "no") << ")\n";
  std::cout << "witness value 3/5 = " << format_bits(target) << ", ceiling log(8/5) = "
            << format_bits(ceiling) << "\n";
  std::cout << "the witness is a lower bound; whether 3/5 is optimal remains open\n";

  if (!witness_ok) return kExitValidation;
  if (!accinfo.converged || !power.converged) return kExitNoConvergence;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum 2-design information toolkit"};
  app.require_subcommand(1);

  std::string kind;
  int dim = 2;
  std::optional<double> t, a_param, k_param;
  std::optional<std::string> fiducial;
  std::string out = "";
  double tolerance = tolerances().design;
  std::string format = "table";
  std::uint64_t seed = OptimizerConfig{}.seed;
  int restarts = OptimizerConfig{}.restarts;
  std::optional<std::string> outcomes;
  bool beyond_davies = false;
  bool via_duality = false;
  std::string in_path;
  std::string ensemble_path, povm_path;
  int dmin = 2, dmax = 4;
  std::optional<std::string> fiducial_dir;

  auto* construct = app.add_subcommand("construct", "construct and validate a set file");
  construct->add_option("kind", kind, "sic | mub | gen-sic | gen-mub")->required();
  construct->add_option("dim", dim, "Hilbert-space dimension")->required();
  construct->add_option("--t", t, "depolarization mixing parameter in [0, 1]");
  construct->add_option("--a", a_param, "target SIC purity parameter");
  construct->add_option("--k", k_param, "target MUB purity parameter");
  construct->add_option("--fiducial", fiducial, "fiducial or state-set file for SIC bases");
  construct->add_option("--out", out, "output path (default <kind>_d<dim>.json)");
  construct->add_option("--tolerance", tolerance, "validation tolerance");

  auto* validate = app.add_subcommand("validate", "validate a set file");
  validate->add_option("--in", in_path, "set file")->required();
  validate->add_option("--tolerance", tolerance, "validation tolerance");

  auto* bounds = app.add_subcommand("bounds", "closed-form information bounds");
  bounds->add_option("--dim", dim, "dimension")->required();
  bounds->add_option("--a", a_param, "arbitrary-rank SIC purity parameter");
  bounds->add_option("--k", k_param, "arbitrary-rank MUB purity parameter");
  bounds->add_option("--format", format, "table | csv | json");
  bounds->add_option("--out", out, "also write to this path");

  auto* mi = app.add_subcommand("mi", "mutual information of an ensemble and a POVM");
  mi->add_option("ensemble", ensemble_path, "ensemble or set file")->required();
  mi->add_option("povm", povm_path, "POVM or set file")->required();
  mi->add_option("--format", format, "table | csv");
  mi->add_option("--out", out, "write a CSV row to this path");

  auto* accinfo = app.add_subcommand("optimize-accinfo",
                                     "maximize mutual information over measurements");
  accinfo->add_option("--in", in_path, "ensemble or set file")->required();
  accinfo->add_option("--out", out, "result JSON path (default accinfo_result.json)");
  accinfo->add_option("--restarts", restarts, "restarts per outcome count");
  accinfo->add_option("--seed", seed, "rng seed");
  accinfo->add_option("--outcomes", outcomes, "outcome range, e.g. 4..9");
  accinfo->add_flag("--beyond-davies", beyond_davies,
                    "allow outcome counts beyond d^2");

  auto* power = app.add_subcommand("optimize-power",
                                   "maximize mutual information over input ensembles");
  power->add_option("--in", in_path, "POVM or set file")->required();
  power->add_option("--out", out, "result JSON path (default power_result.json)");
  power->add_option("--restarts", restarts, "independent restarts");
  power->add_option("--seed", seed, "rng seed");
  power->add_option("--outcomes", outcomes, "inner outcome range (duality route)");
  power->add_flag("--via-duality", via_duality,
                  "use the accessible-information duality route");

  auto* figure1 = app.add_subcommand("figure1", "bound/value sweep over dimensions (CSV)");
  figure1->add_option("--dmin", dmin, "first dimension");
  figure1->add_option("--dmax", dmax, "last dimension");
  figure1->add_option("--fiducial-dir", fiducial_dir,
                      "directory with sic_d<d>.json / mub_d<d>.json inputs");
  figure1->add_option("--out", out, "CSV path (default figure1.csv)");
  figure1->add_option("--restarts", restarts, "optimizer restarts");
  figure1->add_option("--seed", seed, "rng seed");

  auto* conjecture = app.add_subcommand("conjecture-d4",
                                        "check the d = 4 witness pair and optimize");
  conjecture->add_option("--restarts", restarts, "optimizer restarts");
  conjecture->add_option("--seed", seed, "rng seed");
  conjecture->add_option("--outcomes", outcomes, "outcome range");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) {
      if (out.empty()) out = kind + "_d" + std::to_string(dim) + ".json";
      ManifestBuilder mb("construct", argc, argv);
      return cmd_construct(kind, dim, t, a_param, k_param, fiducial, out, tolerance, mb);
    }
    if (validate->parsed()) {
      return cmd_validate(in_path, tolerance);
    }
    if (bounds->parsed()) {
      ManifestBuilder mb("bounds", argc, argv);
      std::optional<fs::path> out_path;
      if (!out.empty()) out_path = out;
      return cmd_bounds(dim, a_param, k_param, format, out_path, mb);
    }
    if (mi->parsed()) {
      ManifestBuilder mb("mi", argc, argv);
      std::optional<fs::path> out_path;
      if (!out.empty()) out_path = out;
      return cmd_mi(ensemble_path, povm_path, format, out_path, mb);
    }
    if (accinfo->parsed()) {
      if (out.empty()) out = "accinfo_result.json";
      ManifestBuilder mb("optimize-accinfo", argc, argv);
      mb.record_input(in_path);
      const OptimizerConfig cfg = config_from_flags(seed, restarts, outcomes, beyond_davies);
      const OptimizationResult result =
          maximize_accessible_info(io::load_ensemble(in_path), cfg);
      return finish_optimize(result, out, mb);
    }
    if (power->parsed()) {
      if (out.empty()) out = "power_result.json";
      ManifestBuilder mb("optimize-power", argc, argv);
      mb.record_input(in_path);
      const OptimizerConfig cfg = config_from_flags(seed, restarts, outcomes, beyond_davies);
      const Povm p = io::load_povm(in_path);
      const OptimizationResult result =
          via_duality ? infopower_via_duality(p, cfg) : maximize_informational_power(p, cfg);
      return finish_optimize(result, out, mb);
    }
    if (figure1->parsed()) {
      if (out.empty()) out = "figure1.csv";
      ManifestBuilder mb("figure1", argc, argv);
      mb.set("seed", seed);
      mb.set("restarts", restarts);
      OptimizerConfig cfg;
      cfg.seed = seed;
      cfg.restarts = restarts;
      std::optional<fs::path> dir;
      if (fiducial_dir) dir = *fiducial_dir;
      return cmd_figure1(dmin, dmax, dir, out, cfg, mb);
    }
    if (conjecture->parsed()) {
      const OptimizerConfig cfg = config_from_flags(seed, restarts, outcomes, false);
      return cmd_conjecture_d4(cfg);
    }
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
