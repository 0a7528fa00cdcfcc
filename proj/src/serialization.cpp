#include "realstab/serialization.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "realstab/errors.hpp"

namespace realstab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MissingBlock(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T, typename Parse>
std::optional<T> optional_field(const Json& j, const char* key, Parse parse) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return parse(j.at(key));
}

std::size_t as_index(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError("expected a nonnegative integer");
  return j.get<std::size_t>();
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

TransferMatrix tm(const Json& j) { return transfer_matrix_from_json(j); }

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const Rational& x) { return to_string(x); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  throw ParseError("expected an exact rational (string \"p/q\" or integer), got " + j.dump());
}

Json to_json(const Polynomial& p) {
  Json out = Json::array();
  for (int k = 0; k <= std::max(p.degree(), 0); ++k) out.push_back(to_json(p.coeff(k)));
  return out;
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("polynomial must be a nonempty coefficient list");
  std::vector<Rational> c;
  c.reserve(j.size());
  for (const auto& x : j) c.push_back(rational_from_json(x));
  return Polynomial(std::move(c));
}

Json to_json(const RationalFunction& f) {
  if (f.is_constant()) return to_json(f.constant_value());
  return Json{{"num", to_json(f.num())}, {"den", to_json(f.den())}};
}

RationalFunction rational_function_from_json(const Json& j) {
  if (!j.is_object()) return RationalFunction(rational_from_json(j));
  Polynomial num = polynomial_from_json(field(j, "num"));
  Polynomial den = j.contains("den") ? polynomial_from_json(j.at("den")) : Polynomial::constant(1);
  if (den.is_zero()) throw ParseError("zero denominator");
  return {num, den};
}

Json to_json(const TransferMatrix& x) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < x.cols(); ++j) row.push_back(to_json(x(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

TransferMatrix transfer_matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  TransferMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) throw ParseError("matrix row must be an array");
    if (j[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) out(i, k) = rational_function_from_json(j[i][k]);
  }
  return out;
}

Json to_json(const RationalMatrix& x) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < x.cols(); ++j) row.push_back(to_json(x(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix rational_matrix_from_json(const Json& j, std::size_t cols) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  if (rows) cols = j[0].size();
  RationalMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) throw ParseError("matrix row must be an array");
    if (j[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) out(i, k) = rational_from_json(j[i][k]);
  }
  return out;
}

Json to_json(const Partition& p) {
  Json out = Json::array();
  for (const auto& b : p) out.push_back({{"label", b.label}, {"size", b.size}});
  return out;
}

Partition partition_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("signals must be an array of {label, size}");
  Partition out;
  for (const auto& b : j) out.push_back({field(b, "label").get<std::string>(), as_index(field(b, "size"))});
  return out;
}

Json margin_to_json(std::optional<double> m) {
  if (!m) return nullptr;
  if (std::isinf(*m)) return "inf";
  return *m;
}

std::optional<double> margin_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string() && j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw ParseError("margin must be a number, \"inf\" or null");
  return j.get<double>();
}

Json to_json(const StabilityVerdict& v) {
  Json w = Json::array();
  for (const auto& x : v.witnesses) {
    w.push_back({{"kind", to_string(x.kind)},
                 {"row", x.row},
                 {"col", x.col},
                 {"pole", x.pole ? complex_to_json(*x.pole) : Json(nullptr)},
                 {"modulus", x.modulus}});
  }
  return {{"status", to_string(v.status)}, {"witnesses", std::move(w)}};
}

StabilityVerdict verdict_from_json(const Json& j) {
  StabilityVerdict v;
  v.status = status_from_string(field(j, "status").get<std::string>());
  for (const auto& x : field(j, "witnesses")) {
    Witness w;
    w.kind = witness_kind_from_string(field(x, "kind").get<std::string>());
    w.row = as_index(field(x, "row"));
    w.col = as_index(field(x, "col"));
    if (!field(x, "pole").is_null()) w.pole = complex_from_json(x.at("pole"));
    w.modulus = field(x, "modulus").get<double>();
    v.witnesses.push_back(w);
  }
  return v;
}

Json to_json(const SampleStats& s) {
  return {{"n_samples", s.n_samples},
          {"n_stable", s.n_stable},
          {"n_marginal", s.n_marginal},
          {"n_unstable", s.n_unstable},
          {"n_singular", s.n_singular},
          {"worst_sample_norm", s.worst_sample_norm},
          {"min_nonstable_norm", s.min_nonstable_norm ? Json(*s.min_nonstable_norm) : Json(nullptr)},
          {"soundness_violations", s.soundness_violations}};
}

SampleStats sample_stats_from_json(const Json& j) {
  SampleStats s;
  s.n_samples = as_index(field(j, "n_samples"));
  s.n_stable = as_index(field(j, "n_stable"));
  s.n_marginal = as_index(field(j, "n_marginal"));
  s.n_unstable = as_index(field(j, "n_unstable"));
  s.n_singular = as_index(field(j, "n_singular"));
  s.worst_sample_norm = field(j, "worst_sample_norm").get<double>();
  s.min_nonstable_norm = optional_field<double>(j, "min_nonstable_norm", [](const Json& x) { return x.get<double>(); });
  s.soundness_violations = as_index(field(j, "soundness_violations"));
  if (s.n_samples != s.n_stable + s.n_marginal + s.n_unstable)
    throw ParseError("sample counts do not add up to n_samples");
  return s;
}

Json to_json(const Certificate& c) {
  Json out{{"kind", to_string(c.kind)},
           {"condition", c.condition_ref},
           {"margin", margin_to_json(c.margin)},
           {"verdict", to_json(c.verdict)}};
  out["sample_stats"] = c.sample_stats ? to_json(*c.sample_stats) : Json(nullptr);
  out["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return out;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.kind = certificate_kind_from_string(field(j, "kind").get<std::string>());
  c.condition_ref = field(j, "condition").get<std::string>();
  c.margin = margin_from_json(field(j, "margin"));
  c.verdict = verdict_from_json(field(j, "verdict"));
  c.sample_stats = optional_field<SampleStats>(j, "sample_stats", sample_stats_from_json);
  c.seed = optional_field<std::uint64_t>(j, "seed", [](const Json& x) { return x.get<std::uint64_t>(); });
  if (c.kind == CertificateKind::monte_carlo && !c.sample_stats)
    throw ParseError("monte-carlo certificate without sample_stats");
  return c;
}

// ---------------------------------------------------------------------------

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::plant_controller: return "plant-controller";
    case SystemKind::state_feedback: return "state-feedback";
    case SystemKind::sf_sls: return "sf-sls";
    case SystemKind::output_feedback: return "output-feedback";
    case SystemKind::raw_realization: return "raw-realization";
  }
  return "?";
}

SystemKind system_kind_from_string(const std::string& s) {
  for (auto k : {SystemKind::plant_controller, SystemKind::state_feedback, SystemKind::sf_sls,
                 SystemKind::output_feedback, SystemKind::raw_realization})
    if (to_string(k) == s) return k;
  throw ParseError("unknown system kind '" + s + "'");
}

RealizationSystem SystemFile::realization() const {
  auto need = [](const auto& x, const char* what) -> const auto& {
    if (!x) throw MissingBlock(std::string("system has no ") + what);
    return *x;
  };
  switch (kind) {
    case SystemKind::plant_controller: return build_plant_controller(need(G, "plant G"), need(K, "controller K"));
    case SystemKind::state_feedback: return build_state_feedback(state_space(), need(K, "controller K"));
    case SystemKind::sf_sls: return build_sf_sls(state_space(), need(phi_x, "phi_x"), need(phi_u, "phi_u"));
    case SystemKind::output_feedback: return build_output_feedback(state_space(), need(K, "controller K"));
    case SystemKind::raw_realization: return RealizationSystem(need(R, "realization R"), signals);
  }
  throw MissingBlock("unknown system kind");
}

TransferMatrix SystemFile::plant_transfer() const {
  if (kind == SystemKind::plant_controller && G) return *G;
  if (plant && plant->outputs() > 0) return plant->transfer();
  throw MissingBlock("system has no plant transfer matrix");
}

const StateSpace& SystemFile::state_space() const {
  if (!plant) throw MissingBlock("system has no state-space plant");
  return *plant;
}

Json to_json(const SystemFile& f) {
  Json out{{"schema", kSchemaVersion}, {"kind", to_string(f.kind)}};
  if (f.G) out["G"] = to_json(*f.G);
  if (f.plant) {
    out["A"] = to_json(f.plant->A);
    out["B"] = to_json(f.plant->B);
    out["C"] = to_json(f.plant->C);
    out["D"] = to_json(f.plant->D);
  }
  if (f.K) out["K"] = to_json(*f.K);
  if (f.phi_x) out["phi_x"] = to_json(*f.phi_x);
  if (f.phi_u) out["phi_u"] = to_json(*f.phi_u);
  if (f.R) {
    out["R"] = to_json(*f.R);
    out["signals"] = to_json(f.signals);
  }
  if (!f.gains.empty()) {
    Json g = Json::object();
    if (f.gains.F) g["F"] = to_json(*f.gains.F);
    if (f.gains.L) g["L"] = to_json(*f.gains.L);
    if (f.gains.K) g["K"] = to_json(*f.gains.K);
    out["gains"] = std::move(g);
  }
  if (f.youla) {
    const auto& c = *f.youla;
    out["youla"] = {{"Ml", to_json(c.Ml)}, {"Nl", to_json(c.Nl)}, {"Vl", to_json(c.Vl)}, {"Ul", to_json(c.Ul)},
                    {"Ur", to_json(c.Ur)}, {"Nr", to_json(c.Nr)}, {"Vr", to_json(c.Vr)}, {"Mr", to_json(c.Mr)}};
  }
  if (f.iop)
    out["iop"] = {{"Y", to_json(f.iop->Y)}, {"W", to_json(f.iop->W)}, {"U", to_json(f.iop->U)}, {"Z", to_json(f.iop->Z)}};
  if (f.sls_sf) out["sls_sf"] = {{"phi_x", to_json(f.sls_sf->phi_x)}, {"phi_u", to_json(f.sls_sf->phi_u)}};
  if (f.sls_of)
    out["sls_of"] = {{"phi_xx", to_json(f.sls_of->phi_xx)},
                     {"phi_xy", to_json(f.sls_of->phi_xy)},
                     {"phi_ux", to_json(f.sls_of->phi_ux)},
                     {"phi_uy", to_json(f.sls_of->phi_uy)}};
  return out;
}

SystemFile system_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ParseError("system file must be a JSON object");
    const std::string schema = field(j, "schema").get<std::string>();
    if (schema != kSchemaVersion) throw ParseError("unsupported schema '" + schema + "'");
    SystemFile f;
    f.kind = system_kind_from_string(field(j, "kind").get<std::string>());

    auto state_space = [&] {
      RationalMatrix a = rational_matrix_from_json(field(j, "A"));
      RationalMatrix b = rational_matrix_from_json(field(j, "B"));
      RationalMatrix c = j.contains("C") ? rational_matrix_from_json(j.at("C"), a.cols()) : RationalMatrix(0, a.cols());
      RationalMatrix d = j.contains("D") ? rational_matrix_from_json(j.at("D"), b.cols()) : RationalMatrix();
      return StateSpace(a, b, c, d);
    };
    switch (f.kind) {
      case SystemKind::plant_controller: f.G = tm(field(j, "G")); break;
      case SystemKind::state_feedback:
      case SystemKind::output_feedback: f.plant = state_space(); break;
      case SystemKind::sf_sls:
        f.plant = state_space();
        f.phi_x = tm(field(j, "phi_x"));
        f.phi_u = tm(field(j, "phi_u"));
        break;
      case SystemKind::raw_realization:
        f.R = tm(field(j, "R"));
        f.signals = partition_from_json(field(j, "signals"));
        break;
    }
    f.K = optional_field<TransferMatrix>(j, "K", tm);

    if (j.contains("gains")) {
      const Json& g = j.at("gains");
      auto rm = [](const Json& x) { return rational_matrix_from_json(x); };
      f.gains.F = optional_field<RationalMatrix>(g, "F", rm);
      f.gains.L = optional_field<RationalMatrix>(g, "L", rm);
      f.gains.K = optional_field<RationalMatrix>(g, "K", rm);
    }
    if (j.contains("youla")) {
      const Json& y = j.at("youla");
      CoprimeFactorization c;
      c.Ml = tm(field(y, "Ml"));
      c.Nl = tm(field(y, "Nl"));
      c.Vl = tm(field(y, "Vl"));
      c.Ul = tm(field(y, "Ul"));
      c.Ur = tm(field(y, "Ur"));
      c.Nr = tm(field(y, "Nr"));
      c.Vr = tm(field(y, "Vr"));
      c.Mr = tm(field(y, "Mr"));
      f.youla = std::move(c);
    }
    if (j.contains("iop")) {
      const Json& q = j.at("iop");
      f.iop = IopQuadruple{tm(field(q, "Y")), tm(field(q, "W")), tm(field(q, "U")), tm(field(q, "Z")),
                           f.plant_transfer()};
    }
    if (j.contains("sls_sf")) {
      const Json& s = j.at("sls_sf");
      f.sls_sf = sls_sf_make(f.state_space(), tm(field(s, "phi_x")), tm(field(s, "phi_u")));
    }
    if (j.contains("sls_of")) {
      const Json& s = j.at("sls_of");
      f.sls_of = sls_of_make(f.state_space(), tm(field(s, "phi_xx")), tm(field(s, "phi_xy")), tm(field(s, "phi_ux")),
                             tm(field(s, "phi_uy")));
    }
    return f;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed system file: ") + e.what());
  }
}

void verify_blocks(const SystemFile& f) {
  if (f.youla) {
    if (!f.youla->verify()) throw IdentityCheckFailed("youla block: coprime identity fails");
    if (!(f.youla->Nr * mat_inverse(f.youla->Mr) == f.plant_transfer()))
      throw IdentityCheckFailed("youla block: Nr Mr^-1 differs from the plant");
  }
  if (f.iop && !iop_verify(f.iop->G, *f.iop)) throw IdentityCheckFailed("iop block does not verify");
  if (f.sls_sf && !sls_sf_verify(f.state_space(), *f.sls_sf)) throw IdentityCheckFailed("sls_sf block does not verify");
  if (f.sls_of && !sls_of_verify(f.state_space(), *f.sls_of)) throw IdentityCheckFailed("sls_of block does not verify");
}

// ---------------------------------------------------------------------------

PerturbationFile perturbation_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ParseError("perturbation file must be a JSON object");
    const std::string schema = field(j, "schema").get<std::string>();
    if (schema != kSchemaVersion) throw ParseError("unsupported schema '" + schema + "'");
    if (field(j, "kind").get<std::string>() != "perturbation") throw ParseError("expected kind 'perturbation'");
    PerturbationFile p;
    p.delta = optional_field<TransferMatrix>(j, "delta", tm);
    if (j.contains("blocks"))
      for (const auto& b : j.at("blocks"))
        p.blocks.push_back({field(b, "row").get<std::string>(), field(b, "col").get<std::string>(), tm(field(b, "value"))});
    if (j.contains("plant")) {
      const Json& q = j.at("plant");
      p.dA = optional_field<TransferMatrix>(q, "dA", tm);
      p.dB = optional_field<TransferMatrix>(q, "dB", tm);
      p.dC = optional_field<TransferMatrix>(q, "dC", tm);
      p.dD = optional_field<TransferMatrix>(q, "dD", tm);
      p.dG = optional_field<TransferMatrix>(q, "dG", tm);
    }
    const int forms = (p.delta ? 1 : 0) + (p.blocks.empty() ? 0 : 1) + (p.is_plant() ? 1 : 0);
    if (forms != 1) throw ParseError("perturbation needs exactly one of 'delta', 'blocks' or 'plant'");
    return p;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed perturbation file: ") + e.what());
  }
}

Json to_json(const PerturbationFile& p) {
  Json out{{"schema", kSchemaVersion}, {"kind", "perturbation"}};
  if (p.delta) out["delta"] = to_json(*p.delta);
  if (!p.blocks.empty()) {
    Json b = Json::array();
    for (const auto& x : p.blocks) b.push_back({{"row", x.row}, {"col", x.col}, {"value", to_json(x.value)}});
    out["blocks"] = std::move(b);
  }
  if (p.is_plant()) {
    Json q = Json::object();
    if (p.dA) q["dA"] = to_json(*p.dA);
    if (p.dB) q["dB"] = to_json(*p.dB);
    if (p.dC) q["dC"] = to_json(*p.dC);
    if (p.dD) q["dD"] = to_json(*p.dD);
    if (p.dG) q["dG"] = to_json(*p.dG);
    out["plant"] = std::move(q);
  }
  return out;
}

AdditivePerturbation realization_delta(const SystemFile& sys, const PerturbationFile& p) {
  RealizationSystem r = sys.realization();
  const Partition& host = r.blocks();
  if (p.delta) {
    if (p.delta->rows() != r.size() || p.delta->cols() != r.size())
      throw DimensionMismatch("delta must be " + std::to_string(r.size()) + "x" + std::to_string(r.size()));
    TransferMatrix d = p.delta->with_partition(host, host);
    std::vector<BlockIndex> mask;
    for (std::size_t bi = 0; bi < host.size(); ++bi)
      for (std::size_t bj = 0; bj < host.size(); ++bj)
        if (!d.block(bi, bj).is_zero()) mask.emplace_back(bi, bj);
    return AdditivePerturbation(d, mask);
  }
  std::vector<std::pair<BlockIndex, TransferMatrix>> parts;
  for (const auto& b : p.blocks) parts.push_back({{r.block_index(b.row), r.block_index(b.col)}, b.value});

  if (p.is_plant()) {
    auto place = [&](const std::optional<TransferMatrix>& x, const char* name, const char* row, const char* col) {
      if (!x) return;
      auto bi = find_block(host, row), bj = find_block(host, col);
      if (!bi || !bj) throw InvalidArgument(std::string(name) + " does not apply to a " + to_string(sys.kind) + " system");
      parts.push_back({{*bi, *bj}, *x});
    };
    if (sys.kind == SystemKind::raw_realization) throw InvalidArgument("plant perturbations need a structured system");
    if (sys.kind == SystemKind::plant_controller) {
      if (p.dA || p.dB || p.dC || p.dD) throw InvalidArgument("a plant-controller loop only takes dG");
      place(p.dG, "dG", "y", "u");
    } else {
      if (p.dG) throw InvalidArgument("dG only applies to a plant-controller loop");
      place(p.dA, "dA", "x", "x");
      place(p.dB, "dB", "x", "u");
      place(p.dC, "dC", "y", "x");
      place(p.dD, "dD", "y", "u");
    }
  }
  for (const auto& [idx, value] : parts)
    if (value.rows() != host[idx.first].size || value.cols() != host[idx.second].size)
      throw DimensionMismatch("perturbation block (" + host[idx.first].label + ", " + host[idx.second].label +
                              ") has the wrong shape");
  return AdditivePerturbation::from_blocks(host, parts);
}

// ---------------------------------------------------------------------------

Json to_json(const Report& r) {
  Json inputs = Json::array();
  for (const auto& d : r.inputs) inputs.push_back({{"role", d.role}, {"sha256", d.sha256}});
  Json out{{"schema", kSchemaVersion},
           {"command", r.command},
           {"tool", {{"name", "realstab"}, {"version", r.tool_version}}},
           {"inputs", std::move(inputs)},
           {"exit_code", r.exit_code},
           {"certificate", to_json(r.certificate)},
           {"details", r.details}};
  if (r.elapsed_ms) out["elapsed_ms"] = *r.elapsed_ms;
  return out;
}

Report report_from_json(const Json& j) {
  try {
    if (field(j, "schema").get<std::string>() != kSchemaVersion) throw ParseError("unsupported report schema");
    Report r;
    r.command = field(j, "command").get<std::string>();
    r.tool_version = field(field(j, "tool"), "version").get<std::string>();
    for (const auto& d : field(j, "inputs"))
      r.inputs.push_back({field(d, "role").get<std::string>(), field(d, "sha256").get<std::string>()});
    r.exit_code = field(j, "exit_code").get<int>();
    r.certificate = certificate_from_json(field(j, "certificate"));
    r.details = field(j, "details");
    if (j.contains("elapsed_ms")) r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << content;
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace realstab
