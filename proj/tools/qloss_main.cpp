// Command-line front end: reproducible experiments over the loss-correction
// pipeline plus fixture and CSV emission for external tooling.

#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qloss/qloss.hpp>

namespace {

using Complexd = std::complex<double>;

std::string formatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

Complexd parseComplex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw qloss::ParseError("");
      return {re, 0.0};
    }
    const std::string re_text = text.substr(0, comma);
    const std::string im_text = text.substr(comma + 1);
    const double re = std::stod(re_text, &used);
    if (used != re_text.size()) throw qloss::ParseError("");
    const double im = std::stod(im_text, &used);
    if (used != im_text.size()) throw qloss::ParseError("");
    return {re, im};
  } catch (const qloss::ParseError&) {
  } catch (const std::exception&) {
  }
  throw qloss::ParseError("expected a complex amplitude as re or re,im: " +
                          text);
}

/// Accepts "v", "v1,v2,..." or "lo:hi:n" (n points, geometric when both ends
/// are positive, linear otherwise).
std::vector<double> parseValueList(const std::string& text) {
  std::vector<double> values;
  try {
    if (text.find(':') != std::string::npos) {
      std::istringstream fields(text);
      std::string lo_text, hi_text, n_text;
      if (!std::getline(fields, lo_text, ':') ||
          !std::getline(fields, hi_text, ':') ||
          !std::getline(fields, n_text))
        throw qloss::ParseError("");
      const double lo = std::stod(lo_text);
      const double hi = std::stod(hi_text);
      const int n = std::stoi(n_text);
      if (n < 2) throw qloss::ParseError("");
      const bool geometric = lo > 0 && hi > 0;
      for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        values.push_back(geometric ? lo * std::pow(hi / lo, t)
                                   : lo + (hi - lo) * t);
      }
      return values;
    }
    std::istringstream fields(text);
    std::string item;
    while (std::getline(fields, item, ','))
      values.push_back(std::stod(item));
    if (values.empty()) throw qloss::ParseError("");
    return values;
  } catch (const qloss::ParseError&) {
  } catch (const std::exception&) {
  }
  throw qloss::ParseError("expected a value, a comma list, or lo:hi:n: " +
                          text);
}

std::map<std::string, std::string> parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qloss::Error("cannot open config file: " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return std::string{};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw qloss::ParseError("config lines must be key=value: " + line);
    entries[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
  return entries;
}

std::string readInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) throw qloss::Error("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

qloss::MeasurementMode parseMode(const std::string& text) {
  if (text == "projective") return qloss::MeasurementMode::kProjective;
  if (text == "destructive-replace")
    return qloss::MeasurementMode::kDestructiveReplace;
  throw qloss::ParseError(
      "mode must be projective or destructive-replace: " + text);
}

qloss::LevelLabel parseLevel(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw qloss::ParseError("expected a level as F,mF: " + text);
  try {
    const qloss::LevelLabel level{std::stoi(text.substr(0, comma)),
                                  std::stoi(text.substr(comma + 1))};
    qloss::requireValidLevel(level);
    return level;
  } catch (const qloss::DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw qloss::ParseError("expected a level as F,mF: " + text);
  }
}

struct EncodeArgs {
  std::string c0 = "1";
  std::string c1 = "0";
};

struct LoseArgs {
  std::string c0 = "1";
  std::string c1 = "0";
  int site = 1;
  bool reinsert = false;
};

struct CorrectArgs {
  std::string input;
  std::string c0, c1;
  int lost_site = 1;
  std::optional<int> force_bit;
  std::string mode = "projective";
  std::uint64_t seed = 0;
  bool emit_circuit = false;
  bool json = false;
};

struct ProtocolArgs {
  std::string c0 = "1";
  std::string c1 = "0";
  int lost_site = 1;
  std::string leak_level;
  std::optional<int> force_bit;
  std::string mode = "projective";
  std::uint64_t seed = 0;
  bool emit_circuit = false;
  bool json = false;
};

struct SweepArgs {
  std::string config_path;
  std::string finesse, detuning, photons;
  std::optional<double> d0, w0, wavelength, waist_ratio, shot_noise_k;
  std::string out_path;
};

struct MonteCarloArgs {
  double p_loss = 0;
  double p_leak = 0;
  int cycles = 1;
  int sweep_period = 1;
  long trials = 1000;
  std::uint64_t seed = 0;
  std::string c0 = "1";
  std::string c1 = "0";
  bool json = false;
  std::string trial_csv;
};

struct VerifyArgs {
  std::string position = "all";
  std::string code = "gbp";
};

int runEncode(const EncodeArgs& args) {
  const qloss::LogicalQubit<double> lq(parseComplex(args.c0),
                                       parseComplex(args.c1));
  std::cout << qloss::toJson(qloss::encode(lq)).dump(2) << "\n";
  return 0;
}

int runLose(const LoseArgs& args) {
  const qloss::LogicalQubit<double> lq(parseComplex(args.c0),
                                       parseComplex(args.c1));
  auto rho = qloss::applyLoss(qloss::encode(lq), args.site);
  if (args.reinsert) rho = qloss::insertFresh(rho, args.site);
  std::cout << qloss::toJson(rho).dump(2) << "\n";
  return 0;
}

int runCorrect(const CorrectArgs& args) {
  std::optional<qloss::PureState<double>> reference;
  std::optional<qloss::DensityMatrix<double>> rho_e;
  if (!args.input.empty()) {
    rho_e = qloss::densityFromJsonText<double>(readInput(args.input));
  }
  if (!args.c0.empty() || !args.c1.empty()) {
    if (args.c0.empty() || args.c1.empty())
      throw qloss::ParseError("give both --c0 and --c1 or neither");
    const qloss::LogicalQubit<double> lq(parseComplex(args.c0),
                                         parseComplex(args.c1));
    reference = qloss::encodePure(lq);
    if (!rho_e)
      rho_e = qloss::insertFresh(
          qloss::applyLoss(reference->density(), args.lost_site),
          args.lost_site);
  }
  if (!rho_e)
    throw qloss::ParseError("give --in or logical amplitudes --c0/--c1");

  qloss::CorrectionOptions options;
  options.mode = parseMode(args.mode);
  options.forced_bit = args.force_bit;
  auto rng = qloss::makeRng(args.seed);
  const auto outcome = qloss::correctAfterLoss(
      *rho_e, args.lost_site, options, rng,
      reference ? &*reference : nullptr);

  if (args.emit_circuit) {
    std::cout << outcome.circuit_applied.toText();
    return 0;
  }
  if (args.json) {
    nlohmann::json doc{
        {"lost_site", args.lost_site},
        {"measured_bit", outcome.measured_bit},
        {"recovered_fidelity", outcome.recovered_fidelity},
        {"fidelity_reference", reference ? "encoded-state" : "code-space"},
        {"output", qloss::toJson(outcome.output)}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "lost site: " << args.lost_site << "\n"
            << "measured bit: " << outcome.measured_bit << "\n"
            << "recovered fidelity"
            << (reference ? "" : " (code-space overlap)") << ": "
            << formatDouble(outcome.recovered_fidelity) << "\n";
  return 0;
}

int runProtocol(const ProtocolArgs& args) {
  const qloss::LogicalQubit<double> lq(parseComplex(args.c0),
                                       parseComplex(args.c1));
  const auto reference = qloss::encodePure(lq);
  auto rng = qloss::makeRng(args.seed);

  std::optional<qloss::ClassifyResult> classification;
  std::optional<qloss::ReturnPlan> return_plan;
  if (!args.leak_level.empty()) {
    const qloss::LevelLabel hidden = parseLevel(args.leak_level);
    if (qloss::isQubitLevel(hidden))
      throw qloss::DomainError("level " + qloss::levelText(hidden) +
                               " is a qubit level, not a leak");
    classification = qloss::classify(hidden, rng);
    return_plan = qloss::returnToGround(*classification->leaked_level);
  }

  // Loss (or leak collapse) destroys the site's qubit content; the refilled
  // register then runs through the recovery pipeline.
  const auto rho_e = qloss::insertFresh(
      qloss::applyLoss(reference.density(), args.lost_site), args.lost_site);
  qloss::CorrectionOptions options;
  options.mode = parseMode(args.mode);
  options.forced_bit = args.force_bit;
  const auto outcome =
      qloss::correctAfterLoss(rho_e, args.lost_site, options, rng, &reference);

  if (args.emit_circuit) {
    std::cout << outcome.circuit_applied.toText();
    return 0;
  }
  if (args.json) {
    nlohmann::json doc{{"lost_site", args.lost_site},
                       {"measured_bit", outcome.measured_bit},
                       {"recovered_fidelity", outcome.recovered_fidelity},
                       {"circuit", outcome.circuit_applied.toText()}};
    if (classification) {
      doc["leak_level"] = qloss::levelText(*classification->leaked_level);
      doc["classification_plan"] = classification->plan.toText();
      doc["return_plan"] = return_plan->plan.toText();
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "lost site: " << args.lost_site << "\n";
  if (classification) {
    std::cout << "leak level: "
              << qloss::levelText(*classification->leaked_level) << "\n"
              << "classification plan:\n"
              << classification->plan.toText() << "return plan:\n"
              << return_plan->plan.toText();
  }
  std::cout << "measured bit: " << outcome.measured_bit << "\n"
            << "recovered fidelity: "
            << formatDouble(outcome.recovered_fidelity) << "\n"
            << "circuit:\n"
            << outcome.circuit_applied.toText();
  return 0;
}

int runSweep(const SweepArgs& args) {
  std::map<std::string, std::string> config;
  if (!args.config_path.empty()) config = parseConfigFile(args.config_path);
  auto fromConfig = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = config.find(key);
    if (it == config.end()) return std::nullopt;
    return it->second;
  };

  // Flags override config-file values.
  std::string finesse = args.finesse;
  if (finesse.empty()) finesse = fromConfig("f").value_or("");
  std::string detuning = args.detuning;
  if (detuning.empty()) detuning = fromConfig("detuning_ratio").value_or("");
  std::string photons = args.photons;
  if (photons.empty()) photons = fromConfig("N").value_or("");
  if (finesse.empty() || detuning.empty() || photons.empty())
    throw qloss::ParseError(
        "sweep needs f, detuning_ratio and N (flags or config file)");

  qloss::CavityParams base;
  base.optical_density = args.d0;
  if (!base.optical_density && fromConfig("d0"))
    base.optical_density = std::stod(*fromConfig("d0"));
  if (args.w0)
    base.mode_waist = args.w0;
  else if (fromConfig("w0"))
    base.mode_waist = std::stod(*fromConfig("w0"));
  if (args.wavelength)
    base.wavelength = *args.wavelength;
  else if (fromConfig("wavelength"))
    base.wavelength = std::stod(*fromConfig("wavelength"));
  if (args.waist_ratio)
    base.waist_ratio = *args.waist_ratio;
  else if (fromConfig("waist_ratio"))
    base.waist_ratio = std::stod(*fromConfig("waist_ratio"));
  if (args.shot_noise_k)
    base.shot_noise_coefficient = *args.shot_noise_k;
  else if (fromConfig("k"))
    base.shot_noise_coefficient = std::stod(*fromConfig("k"));

  std::ostringstream csv;
  csv << "f,detuning_ratio,N,phi,delta_phi,N_sc,cond_i,cond_ii\n";
  for (const double f : parseValueList(finesse)) {
    for (const double dr : parseValueList(detuning)) {
      for (const double n : parseValueList(photons)) {
        qloss::CavityParams p = base;
        p.finesse = f;
        p.detuning_ratio = dr;
        p.photon_number = n;
        const auto report = qloss::feasibility(p);
        csv << formatDouble(f) << ',' << formatDouble(dr) << ','
            << formatDouble(n) << ',' << formatDouble(report.phi) << ','
            << formatDouble(report.delta_phi) << ','
            << formatDouble(report.n_sc) << ',' << (report.condition_i ? 1 : 0)
            << ',' << (report.condition_ii ? 1 : 0) << '\n';
      }
    }
  }
  if (args.out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out_path);
    if (!out) throw qloss::Error("cannot write: " + args.out_path);
    out << csv.str();
  }
  return 0;
}

int runMonteCarlo(const MonteCarloArgs& args) {
  qloss::TrialConfig cfg;
  cfg.p_loss = args.p_loss;
  cfg.p_leak = args.p_leak;
  cfg.cycles = args.cycles;
  cfg.sweep_period = args.sweep_period;
  cfg.seed = args.seed;
  cfg.c0 = parseComplex(args.c0);
  cfg.c1 = parseComplex(args.c1);
  cfg.validate();
  if (args.trials < 1) throw qloss::DomainError("need at least one trial");

  std::ofstream csv;
  if (!args.trial_csv.empty()) {
    csv.open(args.trial_csv);
    if (!csv) throw qloss::Error("cannot write: " + args.trial_csv);
    csv << "trial,failed,n_losses,n_leaks,final_fidelity\n";
  }

  long failures = 0;
  for (long t = 0; t < args.trials; ++t) {
    qloss::TrialConfig trial_cfg = cfg;
    trial_cfg.seed = qloss::trialSeed(cfg.seed, static_cast<std::uint64_t>(t));
    const auto result = qloss::runTrial(trial_cfg);
    if (result.failed) ++failures;
    if (csv.is_open())
      csv << t << ',' << (result.failed ? 1 : 0) << ',' << result.n_losses
          << ',' << result.n_leaks << ','
          << formatDouble(result.final_fidelity) << '\n';
  }
  const double p_hat =
      static_cast<double>(failures) / static_cast<double>(args.trials);
  const double standard_error =
      std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(args.trials));

  if (args.json) {
    nlohmann::json doc{{"p_loss", cfg.p_loss},
                       {"p_leak", cfg.p_leak},
                       {"cycles", cfg.cycles},
                       {"sweep_period", cfg.sweep_period},
                       {"seed", cfg.seed},
                       {"trials", args.trials},
                       {"failures", failures},
                       {"p_fail_hat", p_hat},
                       {"standard_error", standard_error}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "trials: " << args.trials << "\n"
            << "failures: " << failures << "\n"
            << "p_fail_hat: " << formatDouble(p_hat) << "\n"
            << "standard_error: " << formatDouble(standard_error) << "\n";
  return 0;
}

int runVerify(const VerifyArgs& args) {
  const auto code = args.code == "repetition"
                        ? qloss::CodeSpec<double>::repetition()
                        : qloss::CodeSpec<double>::gbp();
  if (args.code != "gbp" && args.code != "repetition")
    throw qloss::ParseError("code must be gbp or repetition: " + args.code);
  std::vector<int> positions;
  if (args.position == "all") {
    for (int p = 1; p <= code.nPhysical(); ++p) positions.push_back(p);
  } else {
    try {
      positions.push_back(std::stoi(args.position));
    } catch (const std::exception&) {
      throw qloss::ParseError("position must be all or an index: " +
                              args.position);
    }
  }
  for (int p : positions) {
    const auto report = qloss::verifyErasureCode(code, p);
    std::cout << "position " << p
              << ": correctable: " << (report.correctable ? "true" : "false")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qubit-loss error correction simulator"};
  app.set_version_flag("--version", std::string(qloss::kVersion));
  app.require_subcommand(1);

  EncodeArgs encode_args;
  auto* encode = app.add_subcommand(
      "encode", "Encode logical amplitudes into the 4-qubit code");
  encode->add_option("--c0", encode_args.c0, "amplitude of |0>_L as re[,im]");
  encode->add_option("--c1", encode_args.c1, "amplitude of |1>_L as re[,im]");

  LoseArgs lose_args;
  auto* lose =
      app.add_subcommand("lose", "Trace one qubit out of an encoded state");
  lose->add_option("--c0", lose_args.c0, "amplitude of |0>_L as re[,im]");
  lose->add_option("--c1", lose_args.c1, "amplitude of |1>_L as re[,im]");
  lose->add_option("--site", lose_args.site, "lost site, 1..4")
      ->check(CLI::Range(1, 4));
  lose->add_flag("--reinsert", lose_args.reinsert,
                 "reinsert a fresh |0> atom after the loss");

  CorrectArgs correct_args;
  auto* correct = app.add_subcommand(
      "correct", "Run the recovery circuit on a post-reinsertion state");
  correct->add_option("--in", correct_args.input,
                      "fixture JSON file with the 4-qubit state, - for stdin");
  correct->add_option("--c0", correct_args.c0,
                      "logical amplitude for synthesizing the input");
  correct->add_option("--c1", correct_args.c1,
                      "logical amplitude for synthesizing the input");
  correct->add_option("--lost-site", correct_args.lost_site, "lost site, 1..4")
      ->check(CLI::Range(1, 4));
  correct->add_option("--force-bit", correct_args.force_bit,
                      "force the measurement outcome")
      ->check(CLI::Range(0, 1));
  correct->add_option("--mode", correct_args.mode,
                      "projective or destructive-replace");
  correct->add_option("--seed", correct_args.seed, "measurement RNG seed");
  correct->add_flag("--emit-circuit", correct_args.emit_circuit,
                    "print only the applied circuit text");
  correct->add_flag("--json", correct_args.json, "machine-readable output");

  ProtocolArgs protocol_args;
  auto* protocol = app.add_subcommand(
      "run-protocol", "Full pipeline: encode, lose, reinsert, correct");
  protocol->add_option("--c0", protocol_args.c0, "amplitude of |0>_L");
  protocol->add_option("--c1", protocol_args.c1, "amplitude of |1>_L");
  protocol->add_option("--lost-site", protocol_args.lost_site,
                       "lost site, 1..4")
      ->check(CLI::Range(1, 4));
  protocol->add_option("--leak-level", protocol_args.leak_level,
                       "treat the error as leakage into level F,mF");
  protocol->add_option("--force-bit", protocol_args.force_bit,
                       "force the measurement outcome")
      ->check(CLI::Range(0, 1));
  protocol->add_option("--mode", protocol_args.mode,
                       "projective or destructive-replace");
  protocol->add_option("--seed", protocol_args.seed, "measurement RNG seed");
  protocol->add_flag("--emit-circuit", protocol_args.emit_circuit,
                     "print only the applied circuit text");
  protocol->add_flag("--json", protocol_args.json, "machine-readable output");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep-cavity", "Emit the QND feasibility table as CSV");
  sweep->add_option("--config", sweep_args.config_path,
                    "key=value file with defaults");
  sweep->add_option("--f", sweep_args.finesse,
                    "finesse value, list, or lo:hi:n");
  sweep->add_option("--detuning-ratio", sweep_args.detuning,
                    "delta/Gamma value, list, or lo:hi:n");
  sweep->add_option("--photons", sweep_args.photons,
                    "photon number value, list, or lo:hi:n");
  sweep->add_option("--d0", sweep_args.d0, "resonant optical density");
  sweep->add_option("--w0", sweep_args.w0, "cavity mode waist in meters");
  sweep->add_option("--wavelength", sweep_args.wavelength,
                    "probe wavelength in meters");
  sweep->add_option("--waist-ratio", sweep_args.waist_ratio, "w/w0");
  sweep->add_option("--shot-noise-k", sweep_args.shot_noise_k,
                    "phase uncertainty prefactor");
  sweep->add_option("--out", sweep_args.out_path, "write CSV to a file");

  MonteCarloArgs mc_args;
  auto* mc = app.add_subcommand(
      "montecarlo", "Estimate the logical failure rate under random loss");
  mc->add_option("--p-loss", mc_args.p_loss, "per-qubit per-cycle loss")
      ->check(CLI::Range(0.0, 1.0));
  mc->add_option("--p-leak", mc_args.p_leak, "per-qubit per-cycle leakage")
      ->check(CLI::Range(0.0, 1.0));
  mc->add_option("--cycles", mc_args.cycles, "cycles per trial")
      ->check(CLI::NonNegativeNumber);
  mc->add_option("--sweep-period", mc_args.sweep_period,
                 "cycles between QND sweeps")
      ->check(CLI::PositiveNumber);
  mc->add_option("--trials", mc_args.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_args.seed, "master seed");
  mc->add_option("--c0", mc_args.c0, "amplitude of |0>_L");
  mc->add_option("--c1", mc_args.c1, "amplitude of |1>_L");
  mc->add_flag("--json", mc_args.json, "machine-readable summary");
  mc->add_option("--trial-csv", mc_args.trial_csv,
                 "write per-trial results to a CSV file");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify-code", "Check the erasure-correctability conditions");
  verify->add_option("--position", verify_args.position,
                     "physical qubit position or all");
  verify->add_option("--code", verify_args.code, "gbp or repetition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (encode->parsed()) return runEncode(encode_args);
    if (lose->parsed()) return runLose(lose_args);
    if (correct->parsed()) return runCorrect(correct_args);
    if (protocol->parsed()) return runProtocol(protocol_args);
    if (sweep->parsed()) return runSweep(sweep_args);
    if (mc->parsed()) return runMonteCarlo(mc_args);
    if (verify->parsed()) return runVerify(verify_args);
  } catch (const qloss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
