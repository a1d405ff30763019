#include <CLI11.hpp>

#include <gmp.h>
#include <mpfr.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dupeq/approx.hpp"
#include "dupeq/engine.hpp"
#include "dupeq/model.hpp"
#include "dupeq/render.hpp"
#include "dupeq/simulate.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoThreshold = 3;
constexpr int kExitSimDisagreement = 4;

using dupeq::Json;

struct Precision {
  dupeq::EvalMode mode = dupeq::EvalMode::exact;
  unsigned bits = dupeq::kDefaultFloatBits;
  std::string text = "exact";
};

Precision parse_precision(const std::string& s) {
  Precision p;
  p.text = s;
  if (s == "exact") return p;
  if (s.rfind("float:", 0) == 0) {
    int bits = std::stoi(s.substr(6));
    if (bits < 64) throw std::invalid_argument("precision: need >= 64 bits");
    p.mode = dupeq::EvalMode::floating;
    p.bits = static_cast<unsigned>(bits);
    return p;
  }
  throw std::invalid_argument("precision must be 'exact' or 'float:<bits>'");
}

struct OutputSink {
  std::string format = "json";  // json | csv
  std::string path;             // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
  }
};

Json make_meta(const Precision& precision, double wall_ms) {
  Json meta;
  meta["versions"] =
      Json{{"dupeq", kVersion}, {"gmp", gmp_version}, {"mpfr", MPFR_VERSION_STRING}};
  meta["precision"] = precision.text;
  meta["threads"] = omp_get_max_threads();
  meta["wall_ms"] = wall_ms;
  return meta;
}

std::string render_envelope(const std::string& command, const Json& params,
                            const Json& result, const Json& meta,
                            const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    dupeq::write_kv_csv(os, result);
    return os.str();
  }
  Json envelope;
  envelope["command"] = command;
  envelope["params"] = params;
  envelope["result"] = result;
  envelope["meta"] = meta;
  return envelope.dump(2) + "\n";
}

dupeq::SearchMethod parse_method(const std::string& s) {
  if (s == "auto") return dupeq::SearchMethod::automatic;
  if (s == "scan") return dupeq::SearchMethod::scan;
  if (s == "binary") return dupeq::SearchMethod::binary;
  throw std::invalid_argument("method must be auto, scan, or binary");
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal equilibrium thresholds for Sybil-duplication games "
               "over a bounded id space"};
  app.require_subcommand(1);

  std::string model_spec = "le";
  std::string precision_spec = "exact";
  std::string method_spec = "auto";
  std::string output_format = "json";
  std::string out_path;
  long L = 0, t = 3, m = -1, trials = 100000;
  long L_min = 0, L_max = -1, step = 1, m_prime = -1, fixed_n = -1;
  std::uint64_t seed = 0;
  std::string sim_mode = "game";

  auto add_common = [&](CLI::App* cmd, bool needs_model) {
    if (needs_model)
      cmd->add_option("--model", model_spec, "model selection: le | ks:<k>");
    cmd->add_option("--precision", precision_spec,
                    "exact | float:<bits> (search in floats, certify exactly)");
    cmd->add_option("--output", output_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "write primary output to a file");
  };

  CLI::App* cmd_threshold =
      app.add_subcommand("threshold", "minimal equilibrium threshold t*");
  cmd_threshold->add_option("--L", L, "id-space size")->required();
  cmd_threshold->add_option("--method", method_spec, "auto | scan | binary");
  add_common(cmd_threshold, true);

  CLI::App* cmd_check =
      app.add_subcommand("check", "equilibrium check at one (L, t)");
  cmd_check->add_option("--L", L, "id-space size")->required();
  cmd_check->add_option("--t", t, "threshold")->required();
  cmd_check->add_option("--m", m, "pin a single duplication count");
  add_common(cmd_check, true);

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "t* for a range of id-space sizes");
  cmd_sweep->add_option("--L-min", L_min, "first L")->required();
  cmd_sweep->add_option("--L-max", L_max, "last L")->required();
  cmd_sweep->add_option("--step", step, "L increment")->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--method", method_spec, "auto | scan | binary");
  add_common(cmd_sweep, true);

  CLI::App* cmd_approx = app.add_subcommand(
      "approx", "closed-form leader-election threshold band (~L/5)");
  cmd_approx->add_option("--L", L, "id-space size")->required();
  add_common(cmd_approx, false);

  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo duplication game / ring run");
  cmd_simulate->add_option("--L", L, "id-space size")->required();
  cmd_simulate->add_option("--t", t, "threshold")->required();
  cmd_simulate->add_option("--m", m, "duplication count")->required();
  cmd_simulate->add_option("--trials", trials, "trial count");
  cmd_simulate->add_option("--seed", seed, "rng seed");
  cmd_simulate->add_option("--mode", sim_mode, "game | ring")
      ->check(CLI::IsMember({"game", "ring"}));
  cmd_simulate->add_option("--fixed-n", fixed_n,
                           "condition every trial on this network size");
  add_common(cmd_simulate, true);

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "brute-force audit of the enhancement structure");
  cmd_verify->add_option("--L", L, "id-space size (<= 500)")->required();
  cmd_verify->add_option("--m-prime", m_prime,
                         "limited-duplications value to probe");
  add_common(cmd_verify, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Timer timer;
    Precision precision = parse_precision(precision_spec);
    OutputSink sink{output_format, out_path};
    dupeq::EngineOptions opts;
    opts.mode = precision.mode;
    opts.float_bits = precision.bits;

    if (app.got_subcommand(cmd_threshold)) {
      dupeq::UtilityModel model = dupeq::parse_model(model_spec);
      dupeq::ThresholdResult r =
          dupeq::minimal_threshold(L, model, parse_method(method_spec), opts);
      Json params{{"model", model_spec}, {"L", L}, {"method", method_spec}};
      sink.write(render_envelope("threshold", params,
                                 dupeq::threshold_json(r, L),
                                 make_meta(precision, timer.ms()),
                                 output_format));
      return r.t_star ? kExitOk : kExitNoThreshold;
    }

    if (app.got_subcommand(cmd_check)) {
      dupeq::UtilityModel model = dupeq::parse_model(model_spec);
      Json params{{"model", model_spec}, {"L", L}, {"t", t}};
      Json result;
      if (m >= 0) {
        params["m"] = m;
        dupeq::Rational f = dupeq::honest_utility(L, t, model);
        dupeq::Rational g = dupeq::cheat_utility(L, t, m, model);
        result["f"] = dupeq::rational_json(f);
        result["m"] = m;
        result["g"] = dupeq::rational_json(g);
        result["equilibrium"] = f >= g;
      } else {
        // Diagnostic table: scan every m in [0, L-t], hints ignored.
        dupeq::EngineOptions full = opts;
        full.use_hints = false;
        dupeq::CheatAssessment a =
            dupeq::best_cheat(L, t, model, full, /*keep_per_m=*/true);
        result = dupeq::assessment_json(a, /*include_per_m=*/true);
      }
      sink.write(render_envelope("check", params, result,
                                 make_meta(precision, timer.ms()),
                                 output_format));
      return kExitOk;
    }

    if (app.got_subcommand(cmd_sweep)) {
      dupeq::UtilityModel model = dupeq::parse_model(model_spec);
      dupeq::SearchMethod method = parse_method(method_spec);
      std::vector<long> sizes;
      for (long Lv = L_min; Lv <= L_max; Lv += step) sizes.push_back(Lv);

      std::vector<dupeq::ThresholdResult> rows(sizes.size());
#pragma omp parallel for schedule(dynamic)
      for (std::size_t i = 0; i < sizes.size(); ++i)
        rows[i] = dupeq::minimal_threshold(sizes[i], model, method, opts);

      Json params{{"model", model_spec}, {"L_min", L_min}, {"L_max", L_max},
                  {"step", step},        {"method", method_spec}};
      if (output_format == "csv") {
        std::ostringstream os;
        os << dupeq::kSweepCsvHeader << "\n";
        for (std::size_t i = 0; i < sizes.size(); ++i)
          dupeq::write_sweep_csv_row(os, sizes[i], rows[i]);
        sink.write(os.str());
      } else {
        Json result = Json::array();
        for (std::size_t i = 0; i < sizes.size(); ++i)
          result.push_back(dupeq::sweep_row_json(sizes[i], rows[i]));
        sink.write(render_envelope("sweep", params, result,
                                   make_meta(precision, timer.ms()), "json"));
      }
      return kExitOk;
    }

    if (app.got_subcommand(cmd_approx)) {
      dupeq::ThresholdBand band = dupeq::le_threshold_band(L, precision.bits);
      Json params{{"L", L}};
      sink.write(render_envelope("approx", params, dupeq::band_json(band, L),
                                 make_meta(precision, timer.ms()),
                                 output_format));
      return kExitOk;
    }

    if (app.got_subcommand(cmd_simulate)) {
      dupeq::SimConfig cfg;
      cfg.L = L;
      cfg.t = t;
      cfg.m = m;
      cfg.model = dupeq::parse_model(model_spec);
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.mode = sim_mode == "ring" ? dupeq::SimMode::ring : dupeq::SimMode::game;
      if (fixed_n >= 0) cfg.fixed_n = fixed_n;

      dupeq::SimReport report = dupeq::simulate(cfg);
      Json params{{"model", model_spec}, {"L", L},       {"t", t},
                  {"m", m},              {"trials", trials},
                  {"seed", seed},        {"mode", sim_mode}};
      if (cfg.fixed_n) params["fixed_n"] = *cfg.fixed_n;
      sink.write(render_envelope("simulate", params,
                                 dupeq::sim_report_json(report),
                                 make_meta(precision, timer.ms()),
                                 output_format));
      return std::abs(report.z_score) > 5.0 ? kExitSimDisagreement : kExitOk;
    }

    if (app.got_subcommand(cmd_verify)) {
      if (L > 500) {
        std::cerr << "verify: L > 500 is too large for the brute-force audit\n";
        return kExitUsage;
      }
      dupeq::UtilityModel model = dupeq::parse_model(model_spec);
      Json params{{"model", model_spec}, {"L", L}};
      Json result;
      result["linear_threshold"] = dupeq::verify_linear_threshold(L, model);
      long probe = m_prime >= 0 ? m_prime
                   : model.hints.limited_dup ? *model.hints.limited_dup
                                             : -1;
      if (probe >= 0) {
        params["m_prime"] = probe;
        result["limited_dup"] = Json{
            {"m_prime", probe},
            {"holds", dupeq::verify_limited_dup(L, model, probe)}};
      } else {
        result["limited_dup"] = nullptr;
      }
      sink.write(render_envelope("verify", params, result,
                                 make_meta(precision, timer.ms()),
                                 output_format));
      return kExitOk;
    }

    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
