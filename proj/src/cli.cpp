#include "realstab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "realstab/errors.hpp"
#include "realstab/serialization.hpp"

namespace realstab {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string fmt(std::complex<double> z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

RationalMatrix constant_matrix(const TransferMatrix& x) {
  RationalMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j).constant_value();
  return out;
}

std::string fmt_margin(std::optional<double> m) { return m ? fmt(*m) : "none"; }

struct Common {
  std::string report;
  bool json = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--report", c.report, "Write the JSON report to this file");
  cmd->add_flag("--json", c.json, "Print the JSON report instead of the summary");
  cmd->add_flag("--timing", c.timing, "Record elapsed_ms in the report");
}

class Session {
 public:
  Session(std::string command, const Common& common, std::ostream& out)
      : common_(common), out_(out), start_(std::chrono::steady_clock::now()) {
    report_.command = std::move(command);
    report_.tool_version = REALSTAB_VERSION;
  }

  Report& report() { return report_; }

  std::string read_input(const std::string& role, const std::string& path) {
    std::string text;
    try {
      text = read_file(path);
    } catch (const InvalidArgument& e) {
      throw MissingBlock(e.what());
    }
    report_.inputs.push_back({role, sha256_hex(text)});
    return text;
  }

  SystemFile load_system(const std::string& path) {
    SystemFile f = system_from_json(parse_json(read_input("system", path)));
    verify_blocks(f);
    return f;
  }

  int finish(int code, const std::string& summary) {
    report_.exit_code = code;
    if (common_.timing)
      report_.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    const std::string text = dump_json(to_json(report_));
    if (!common_.report.empty()) write_file(common_.report, text);
    out_ << (common_.json ? text : summary);
    return code;
  }

 private:
  Report report_;
  const Common& common_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::complex<double>> distinct_poles(const TransferMatrix& x) {
  std::vector<Polynomial> dens;
  for (const auto& e : x.entries())
    if (!e.den().is_constant() && std::find(dens.begin(), dens.end(), e.den()) == dens.end()) dens.push_back(e.den());
  std::vector<std::complex<double>> all;
  for (const auto& d : dens) {
    auto r = roots(d);
    all.insert(all.end(), r.begin(), r.end());
  }
  std::sort(all.begin(), all.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<std::complex<double>> out;
  for (auto p : all)
    if (out.empty() || std::abs(out.back() - p) > 1e-9) out.push_back(p);
  return out;
}

Json poles_json(const std::vector<std::complex<double>>& poles) {
  Json out = Json::array();
  for (auto p : poles) out.push_back(Json::array({p.real(), p.imag()}));
  return out;
}

std::string poles_text(const std::vector<std::complex<double>>& poles) {
  std::string s;
  for (auto p : poles) s += (s.empty() ? "" : ", ") + fmt(p);
  return s.empty() ? "none" : s;
}

std::string verdict_text(const StabilityVerdict& v) {
  std::string s = "verdict: " + to_string(v.status) + "\n";
  for (const auto& w : v.witnesses) {
    s += "  witness " + to_string(w.kind) + " (" + std::to_string(w.row) + "," + std::to_string(w.col) + ")";
    if (w.pole) s += " at " + fmt(*w.pole) + " |z| = " + fmt(w.modulus);
    s += "\n";
  }
  return s;
}

const IopQuadruple& need_iop(const SystemFile& f) {
  if (!f.iop) throw MissingBlock("system file has no iop block (run synthesize --family iop)");
  return *f.iop;
}

const SlsOutputFeedback& need_sls_of(const SystemFile& f) {
  if (!f.sls_of) throw MissingBlock("system file has no sls_of block (run synthesize --family sls-of)");
  return *f.sls_of;
}

// ---------------------------------------------------------------------------

int cmd_analyze(Session& s, const std::string& path) {
  SystemFile sys = s.load_system(path);
  RealizationSystem r = sys.realization();
  Report& rep = s.report();
  rep.details["system_kind"] = to_string(sys.kind);
  rep.details["signals"] = to_json(r.blocks());
  TransferMatrix st = stability_matrix(r);
  StabilityVerdict v = stability_verdict(st);
  auto poles = distinct_poles(st);
  rep.certificate.kind = CertificateKind::pointwise;
  rep.certificate.condition_ref = "nominal";
  rep.certificate.verdict = v;
  rep.details["rs_identity"] = verify_rs_identity(r, st);
  rep.details["poles"] = poles_json(poles);
  rep.details["stability_matrix"] = to_json(st);
  return s.finish(exit_code_for(v.status), verdict_text(v) + "poles: " + poles_text(poles) + "\n");
}

int cmd_perturb(Session& s, const std::string& sys_path, const std::string& delta_path) {
  SystemFile sys = s.load_system(sys_path);
  PerturbationFile pf = perturbation_from_json(parse_json(s.read_input("perturbation", delta_path)));
  RealizationSystem r = sys.realization();
  AdditivePerturbation delta = realization_delta(sys, pf);
  TransferMatrix s_hat = stability_matrix(r);
  PerturbedStability ps = perturbed_stability_detail(s_hat, delta, &r.R());
  StabilityVerdict v = stability_verdict(ps.s);
  const bool agree = ps.forms_agree && ps.direct_agrees.value_or(true);
  auto poles = distinct_poles(ps.s);

  Report& rep = s.report();
  rep.certificate.kind = CertificateKind::pointwise;
  rep.certificate.condition_ref = "direct";
  rep.certificate.verdict = v;
  rep.details["system_kind"] = to_string(sys.kind);
  rep.details["forms_agree"] = ps.forms_agree;
  rep.details["direct_agrees"] = ps.direct_agrees ? Json(*ps.direct_agrees) : Json(nullptr);
  rep.details["agreement"] = agree;
  rep.details["poles"] = poles_json(poles);
  rep.details["perturbed_stability_matrix"] = to_json(ps.s);
  std::string summary = verdict_text(v) + "poles: " + poles_text(poles) + "\nagreement: " + (agree ? "true" : "false") + "\n";

  if (pf.is_plant() && sys.kind == SystemKind::sf_sls) {
    const StateSpace& nominal = sys.state_space();
    RationalMatrix a = nominal.A, b = nominal.B;
    if ((pf.dA && !pf.dA->is_constant()) || (pf.dB && !pf.dB->is_constant()))
      throw InvalidArgument("state-feedback responses need constant dA and dB");
    if (pf.dA) a = a + constant_matrix(*pf.dA);
    if (pf.dB) b = b + constant_matrix(*pf.dB);
    SlsSfRobust sr = sls_sf_robust(StateSpace(a, b), *sys.phi_x, *sys.phi_u);
    rep.details["sls_sf"] = {{"defect", to_json(sr.defect)},
                             {"responses", to_json(sr.responses)},
                             {"verdict", to_json(sr.verdict)}};
    summary += "sls defect: " + sr.defect.str() + "\nsls responses: " + sr.responses.str() + "\n";
  }
  if (pf.is_plant() && sys.kind == SystemKind::output_feedback && sys.sls_of) {
    const StateSpace& ss = sys.state_space();
    auto or_zero = [](const std::optional<TransferMatrix>& x, std::size_t rows, std::size_t cols) {
      return x ? *x : TransferMatrix(rows, cols);
    };
    const std::size_t n = ss.states(), m = ss.inputs(), p = ss.outputs();
    SlsOfRobust sr = sls_of_robust_check(ss, *sys.sls_of, or_zero(pf.dA, n, n), or_zero(pf.dB, n, m),
                                         or_zero(pf.dC, p, n), or_zero(pf.dD, p, m));
    rep.details["sls_of"] = {{"verdict", to_json(sr.verdict)}, {"agrees_with_direct", sr.agree}};
  }
  if (pf.dG && sys.iop) {
    StabilityVerdict iv = iop_robust_check(sys.iop->U, *pf.dG);
    rep.details["iop"] = {{"verdict", to_json(iv)}};
  }
  return s.finish(agree ? exit_code_for(v.status) : exit_code::kFailure, summary);
}

int cmd_margin(Session& s, const std::string& path, const std::string& condition, bool probe) {
  SystemFile sys = s.load_system(path);
  std::string cond = condition;
  if (cond.empty()) cond = sys.iop ? "iop" : "sls-of";
  TransferMatrix x;
  Report& rep = s.report();
  if (cond == "iop" || cond == "cor3") {
    rep.certificate = small_gain_certificate(need_iop(sys));
    x = sys.iop->U;
  } else if (cond == "sls-of" || cond == "cor8") {
    rep.certificate = small_gain_certificate(need_sls_of(sys));
    x = sys.sls_of->block();
  } else {
    throw InvalidArgument("unknown margin condition '" + cond + "' (expected iop or sls-of)");
  }
  if (!rep.certificate.verdict.stable())
    return s.finish(exit_code_for(rep.certificate.verdict.status), verdict_text(rep.certificate.verdict));

  HinfPeak peak = hinf_peak(x);
  rep.details["norm"] = peak.norm;
  rep.details["peak_omega"] = peak.omega;
  rep.details["margin"] = margin_to_json(rep.certificate.margin);
  std::string summary = "condition: " + rep.certificate.condition_ref + "\nnorm: " + fmt(peak.norm) +
                        "\nmargin: " + fmt_margin(rep.certificate.margin) + "\n";
  if (probe) {
    Json pj;
    try {
      TightnessProbe tp = worst_case_delta(x);
      pj = {{"conclusive", tp.conclusive},
            {"note", tp.note},
            {"peak_omega", tp.peak_omega},
            {"epsilon", tp.epsilon},
            {"delta", tp.conclusive ? to_json(tp.delta) : Json(nullptr)},
            {"det", tp.conclusive ? to_json(tp.det) : Json(nullptr)},
            {"root", tp.root ? Json::array({tp.root->real(), tp.root->imag()}) : Json(nullptr)},
            {"root_modulus", tp.root ? Json(tp.root_modulus) : Json(nullptr)}};
      summary += "probe: " + tp.note + "\n";
      if (tp.root) summary += "probe root: " + fmt(*tp.root) + " |z| = " + fmt(tp.root_modulus) + "\n";
    } catch (const InfiniteMargin&) {
      pj = {{"conclusive", false}, {"note", "infinite margin: nothing to probe"}};
      summary += "probe: infinite margin\n";
    }
    rep.details["probe"] = std::move(pj);
  }
  return s.finish(exit_code_for(rep.certificate.verdict.status), summary);
}

struct SampleArgs {
  std::string condition = "iop-condition";
  std::optional<double> radius;
  std::string margin_from;
  double fraction = 0.99;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  unsigned order = 1;
  std::vector<std::string> mask;
};

int cmd_sample(Session& s, const std::string& path, const SampleArgs& a) {
  SystemFile sys = s.load_system(path);
  const Checker checker = checker_from_string(a.condition);
  std::optional<RobustProblem> problem;
  switch (checker) {
    case Checker::direct: {
      RealizationSystem r = sys.realization();
      std::vector<BlockIndex> off;
      for (std::size_t i = 0; i < r.blocks().size(); ++i)
        for (std::size_t j = 0; j < r.blocks().size(); ++j)
          if (i != j) off.emplace_back(i, j);
      problem = RobustProblem::direct(r, off);
      break;
    }
    case Checker::iop_loop: problem = RobustProblem::iop_loop(need_iop(sys).G, *sys.iop); break;
    case Checker::iop_condition: problem = RobustProblem::iop_condition(need_iop(sys)); break;
    case Checker::sls_of: problem = RobustProblem::sls_of(sys.state_space(), need_sls_of(sys)); break;
  }

  double radius = 0.0;
  if (a.radius) {
    radius = *a.radius;
  } else if (!a.margin_from.empty()) {
    Report m = report_from_json(parse_json(s.read_input("margin-report", a.margin_from)));
    if (!m.certificate.margin) throw MissingBlock("margin report carries no margin");
    if (std::isinf(*m.certificate.margin)) throw InvalidArgument("margin is infinite; pass --radius explicitly");
    radius = a.fraction * *m.certificate.margin;
  } else {
    throw CLI::ValidationError("sample needs --radius or --margin-from");
  }

  UncertaintySpec spec{{}, radius, a.order, a.seed};
  const Partition& host = problem->host();
  for (const auto& m : a.mask) {
    auto colon = m.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--mask entries look like row:col");
    auto bi = find_block(host, m.substr(0, colon)), bj = find_block(host, m.substr(colon + 1));
    if (!bi || !bj) throw InvalidArgument("mask block '" + m + "' is not a signal pair of the host");
    spec.block_mask.emplace_back(*bi, *bj);
  }
  Report& rep = s.report();
  rep.certificate = monte_carlo_certify(*problem, spec, a.n);
  const SampleStats& st = *rep.certificate.sample_stats;
  Json mask = Json::array();
  for (const auto& [bi, bj] : spec.block_mask.empty() ? problem->default_mask() : spec.block_mask)
    mask.push_back(Json::array({host[bi].label, host[bj].label}));
  rep.details["radius"] = radius;
  rep.details["sample_order"] = a.order;
  rep.details["mask"] = std::move(mask);

  std::ostringstream summary;
  summary << "condition: " << rep.certificate.condition_ref << "\nradius: " << fmt(radius)
          << "\nmargin: " << fmt_margin(rep.certificate.margin) << "\nsamples: " << st.n_samples << " (stable "
          << st.n_stable << ", marginal " << st.n_marginal << ", unstable " << st.n_unstable << ", singular "
          << st.n_singular << ")\nworst sample norm: " << fmt(st.worst_sample_norm)
          << "\nsoundness violations: " << st.soundness_violations << "\n"
          << verdict_text(rep.certificate.verdict);
  const bool all_stable = st.n_stable == st.n_samples && st.soundness_violations == 0;
  return s.finish(all_stable ? exit_code::kStable : exit_code::kFailure, summary.str());
}

int cmd_freqresp(Session& s, const std::string& path, std::size_t points, const std::string& out_path,
                 const std::string& target, std::ostream& out) {
  SystemFile sys = s.load_system(path);
  TransferMatrix x;
  if (target == "S") x = stability_matrix(sys.realization());
  else if (target == "G") x = sys.plant_transfer();
  else if (target == "U") x = need_iop(sys).U;
  else if (target == "Phi") x = need_sls_of(sys).block();
  else throw InvalidArgument("unknown target '" + target + "' (expected S, G, U or Phi)");

  auto resp = freq_response(x.without_partition(), points);
  const std::size_t k = std::min(x.rows(), x.cols());
  std::string csv = "omega";
  for (std::size_t i = 1; i <= k; ++i) csv += ",sigma_" + std::to_string(i);
  csv += "\n";
  for (const auto& pt : resp) {
    csv += fmt(pt.omega);
    for (double sv : pt.singular_values) csv += "," + fmt(sv);
    csv += "\n";
  }
  Report& rep = s.report();
  rep.certificate.condition_ref = "frequency-response";
  rep.certificate.verdict = stability_verdict(x);
  const int code = exit_code_for(rep.certificate.verdict.status);
  rep.details["target"] = target;
  rep.details["points"] = points;
  rep.details["csv_sha256"] = sha256_hex(csv);
  if (out_path.empty()) {
    out << csv;
    // The CSV already went to stdout; keep the summary off it.
    return s.finish(code, "");
  }
  write_file(out_path, csv);
  return s.finish(code, "wrote " + std::to_string(points) + " rows to " + out_path + "\n");
}

struct SynthArgs {
  std::string family;
  std::string gains_path;
  bool deadbeat = false;
  std::string out_path;
};

int cmd_synthesize(Session& s, const std::string& path, const SynthArgs& a, std::ostream& out) {
  SystemFile sys = s.load_system(path);
  Gains gains = sys.gains;
  if (!a.gains_path.empty()) {
    Json g = parse_json(s.read_input("gains", a.gains_path));
    if (g.contains("gains")) g = g.at("gains");
    auto rm = [](const Json& x) { return rational_matrix_from_json(x); };
    try {
      if (g.contains("F")) gains.F = rm(g.at("F"));
      if (g.contains("L")) gains.L = rm(g.at("L"));
      if (g.contains("K")) gains.K = rm(g.at("K"));
    } catch (const Json::exception& e) {
      throw ParseError(std::string("malformed gains file: ") + e.what());
    }
  }
  if (a.deadbeat) {
    const StateSpace& ss = sys.state_space();
    gains.F = deadbeat_state_gain(ss.A, ss.B);
    if (ss.outputs() > 0) gains.L = deadbeat_observer_gain(ss.A, ss.C);
    gains.K = gains.F;
  }
  auto need = [](const std::optional<RationalMatrix>& g, const char* what) -> const RationalMatrix& {
    if (!g) throw MissingBlock(std::string("synthesis needs gain ") + what);
    return *g;
  };
  // Controller for loop-based families: the file's K, else the central
  // controller of the coprime factorization.
  auto controller = [&]() -> TransferMatrix {
    if (sys.K) return *sys.K;
    CoprimeFactorization cf = coprime_from_gains(sys.state_space(), need(gains.F, "F"), need(gains.L, "L"));
    return youla_controller(cf, TransferMatrix(cf.Mr.cols(), cf.Ur.rows()));
  };

  SystemFile outf = sys;
  outf.gains = gains;
  StabilityVerdict v;
  if (a.family == "youla") {
    outf.youla = coprime_from_gains(sys.state_space(), need(gains.F, "F"), need(gains.L, "L"));
    v = stability_verdict(outf.youla->right());
  } else if (a.family == "iop") {
    TransferMatrix k = controller();
    IopQuadruple quad;
    try {
      quad = IopQuadruple::from_loop(sys.plant_transfer(), k);
    } catch (const NoStabilityMatrix& e) {
      throw NotStabilizing(std::string("controller does not close a well-posed loop: ") + e.what());
    }
    if (!iop_verify(quad.G, quad)) throw NotStabilizing("controller does not internally stabilize the plant");
    if (!outf.K && sys.kind != SystemKind::sf_sls) outf.K = k;
    outf.iop = quad;
    v = stability_verdict(quad.stacked());
  } else if (a.family == "sls-sf") {
    // Static gain: explicit K, else the file's constant controller, else F.
    RationalMatrix k;
    if (gains.K) k = *gains.K;
    else if (sys.kind == SystemKind::state_feedback && sys.K && sys.K->is_constant()) k = constant_matrix(*sys.K);
    else k = need(gains.F, "K");
    SlsStateFeedback p = sls_sf_from_gain(sys.state_space(), k);
    if (!sls_sf_verify(sys.state_space(), p)) throw NotStabilizing("state-feedback responses do not verify");
    outf.kind = SystemKind::sf_sls;
    outf.K.reset();
    outf.phi_x = p.phi_x;
    outf.phi_u = p.phi_u;
    outf.sls_sf = p;
    v = stability_verdict(vstack(p.phi_x, p.phi_u));
  } else if (a.family == "sls-of") {
    TransferMatrix k = controller();
    SlsOutputFeedback p;
    try {
      p = sls_of_from_controller(sys.state_space(), k);
    } catch (const NoStabilityMatrix& e) {
      throw NotStabilizing(std::string("controller does not close a well-posed loop: ") + e.what());
    }
    if (!sls_of_verify(sys.state_space(), p)) throw NotStabilizing("controller does not internally stabilize the plant");
    if (!outf.K) outf.K = k;
    outf.sls_of = p;
    v = stability_verdict(p.block());
  } else {
    throw CLI::ValidationError("--family must be youla, iop, sls-sf or sls-of");
  }

  // Self-check: what we write must load and verify.
  const std::string text = dump_json(to_json(outf));
  verify_blocks(system_from_json(parse_json(text)));

  Report& rep = s.report();
  rep.certificate.condition_ref = a.family;
  rep.certificate.verdict = v;
  rep.details["family"] = a.family;
  rep.details["output_sha256"] = sha256_hex(text);
  if (a.out_path.empty()) {
    out << text;
    return s.finish(exit_code::kStable, "");
  }
  write_file(a.out_path, text);
  return s.finish(exit_code::kStable, "wrote " + a.family + " parameterization to " + a.out_path + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------

int exit_code_for(StabilityStatus s) {
  switch (s) {
    case StabilityStatus::stable: return exit_code::kStable;
    case StabilityStatus::marginal: return exit_code::kMarginal;
    case StabilityStatus::unstable:
    case StabilityStatus::improper: return exit_code::kUnstable;
  }
  return exit_code::kFailure;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CLI::Error*>(&e)) return exit_code::kUsage;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ZeroDenominator*>(&e)) return exit_code::kUsage;
  if (dynamic_cast<const NoStabilityMatrix*>(&e)) return exit_code::kNoStabilityMatrix;
  if (dynamic_cast<const SingularPerturbedLoop*>(&e)) return exit_code::kSingularPerturbedLoop;
  if (dynamic_cast<const PoleOnGrid*>(&e)) return exit_code::kPoleOnGrid;
  if (dynamic_cast<const NotStabilizing*>(&e)) return exit_code::kNotStabilizing;
  if (dynamic_cast<const MissingBlock*>(&e) || dynamic_cast<const EmptyMask*>(&e)) return exit_code::kMissing;
  if (dynamic_cast<const NotStable*>(&e)) return exit_code::kUnstable;
  if (dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const ImproperBlock*>(&e) ||
      dynamic_cast<const NotStrictlyProper*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const IdentityCheckFailed*>(&e) || dynamic_cast<const SingularMatrix*>(&e) ||
      dynamic_cast<const SingularFactor*>(&e))
    return exit_code::kData;
  return exit_code::kFailure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact realization-based stability and robustness analysis", "realstab"};
  app.set_version_flag("--version", std::string("realstab ") + REALSTAB_VERSION);
  app.require_subcommand(1);

  Common common;
  std::string system_path, delta_path, condition, out_path, target = "S";
  bool probe = false;
  std::size_t points = 0;
  SampleArgs sample;
  SynthArgs synth;
  double radius = 0;

  auto* analyze = app.add_subcommand("analyze", "Stability matrix, verdict and poles of a system");
  analyze->add_option("system", system_path)->required();
  add_common(analyze, common);

  auto* perturb = app.add_subcommand("perturb", "Stability under an additive perturbation");
  perturb->add_option("system", system_path)->required();
  perturb->add_option("delta", delta_path)->required();
  add_common(perturb, common);

  auto* margin = app.add_subcommand("margin", "Small-gain robustness margin");
  margin->add_option("system", system_path)->required();
  margin->add_option("--condition", condition, "iop or sls-of");
  margin->add_flag("--probe", probe, "Construct a destabilizing perturbation at the margin");
  add_common(margin, common);

  auto* samp = app.add_subcommand("sample", "Monte-Carlo check over the uncertainty ball");
  samp->add_option("system", system_path)->required();
  samp->add_option("--condition", sample.condition, "direct, iop-loop, iop-condition or sls-of");
  auto* radius_opt = samp->add_option("--radius", radius, "Ball radius")->check(CLI::PositiveNumber);
  samp->add_option("--margin-from", sample.margin_from, "Take the radius from a margin report")
      ->excludes(radius_opt);
  samp->add_option("--fraction", sample.fraction, "Fraction of the reported margin")->check(CLI::PositiveNumber);
  samp->add_option("--n", sample.n, "Number of samples")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  samp->add_option("--seed", sample.seed, "PRNG seed");
  samp->add_option("--order", sample.order, "FIR order of sampled blocks");
  samp->add_option("--mask", sample.mask, "Perturbed signal pairs as row:col");
  add_common(samp, common);

  auto* freq = app.add_subcommand("freqresp", "Singular values on the unit circle as CSV");
  freq->add_option("system", system_path)->required();
  freq->add_option("--points", points, "Number of frequencies in [0, pi]")->required()->check(CLI::Range(2, 1 << 24));
  freq->add_option("--out", out_path, "CSV output file (default stdout)");
  freq->add_option("--target", target, "S, G, U or Phi");
  add_common(freq, common);

  auto* synthesize = app.add_subcommand("synthesize", "Closed-form parameterization from gains");
  synthesize->add_option("system", system_path)->required();
  synthesize->add_option("--family", synth.family, "youla, iop, sls-sf or sls-of")->required();
  synthesize->add_option("--gains", synth.gains_path, "JSON file with F, L and/or K");
  synthesize->add_flag("--deadbeat", synth.deadbeat, "Use deadbeat gains (single input/output)");
  synthesize->add_option("--out", synth.out_path, "Output system file (default stdout)");
  add_common(synthesize, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : exit_code::kUsage;
  }

  auto* cmd = app.get_subcommands().front();
  Session session(cmd->get_name(), common, out);
  try {
    if (cmd == analyze) return cmd_analyze(session, system_path);
    if (cmd == perturb) return cmd_perturb(session, system_path, delta_path);
    if (cmd == margin) return cmd_margin(session, system_path, condition, probe);
    if (cmd == samp) {
      if (radius_opt->count()) sample.radius = radius;
      return cmd_sample(session, system_path, sample);
    }
    if (cmd == freq) return cmd_freqresp(session, system_path, points, out_path, target, out);
    if (cmd == synthesize) return cmd_synthesize(session, system_path, synth, out);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "realstab: error: " << e.what() << "\n";
    // Analysis outcomes still get a report; input errors do not.
    if (code == exit_code::kNoStabilityMatrix || code == exit_code::kSingularPerturbedLoop) {
      Report& rep = session.report();
      rep.certificate.verdict.status = StabilityStatus::unstable;
      rep.certificate.verdict.witnesses = {{0, 0, std::nullopt, 0.0, WitnessKind::singular}};
      rep.details["error"] = e.what();
      std::ostringstream sink;
      Common quiet = common;
      quiet.json = false;
      Session writer(session.report().command, quiet, sink);
      writer.report() = rep;
      writer.finish(code, "");
      if (common.json) out << dump_json(to_json(writer.report()));
    }
    return code;
  }
  return exit_code::kFailure;
}

}  // namespace realstab
