#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "realstab/parameterizations.hpp"
#include "realstab/realization.hpp"
#include "realstab/robust.hpp"
#include "realstab/state_space.hpp"

namespace realstab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "realstab/1";

// ---------------------------------------------------------------------------
// Values. Rationals are written as strings ("3", "-1/2"); integers and
// strings are accepted on input. A rational function is either a constant or
// {"num": [...], "den": [...]} with ascending coefficients in z ("den"
// defaults to [1]). Matrices are arrays of rows. Malformed input throws
// ParseError; ragged matrices throw DimensionMismatch.

Json to_json(const Rational& x);
Rational rational_from_json(const Json& j);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json to_json(const RationalFunction& f);
RationalFunction rational_function_from_json(const Json& j);

Json to_json(const TransferMatrix& x);
TransferMatrix transfer_matrix_from_json(const Json& j);

Json to_json(const RationalMatrix& x);
/// `cols` fixes the width of an empty ([]) matrix.
RationalMatrix rational_matrix_from_json(const Json& j, std::size_t cols = 0);

Json to_json(const Partition& p);
Partition partition_from_json(const Json& j);

/// A finite margin as a number, infinity as "inf", no margin as null.
Json margin_to_json(std::optional<double> m);
std::optional<double> margin_from_json(const Json& j);

Json to_json(const StabilityVerdict& v);
StabilityVerdict verdict_from_json(const Json& j);

Json to_json(const SampleStats& s);
SampleStats sample_stats_from_json(const Json& j);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

// ---------------------------------------------------------------------------
// System files.

enum class SystemKind { plant_controller, state_feedback, sf_sls, output_feedback, raw_realization };

std::string to_string(SystemKind k);
SystemKind system_kind_from_string(const std::string& s);

struct Gains {
  std::optional<RationalMatrix> F;  ///< state feedback for coprime factors
  std::optional<RationalMatrix> L;  ///< observer gain
  std::optional<RationalMatrix> K;  ///< static state-feedback gain
  bool empty() const { return !F && !L && !K; }
};

/// One system description plus optional parameterization blocks.
///   plant-controller: G, K
///   state-feedback:   A, B, K
///   sf-sls:           A, B, phi_x, phi_u
///   output-feedback:  A, B, C, D, K
///   raw-realization:  R, signals
struct SystemFile {
  SystemKind kind = SystemKind::plant_controller;
  std::optional<TransferMatrix> G;
  std::optional<TransferMatrix> K;
  std::optional<StateSpace> plant;
  std::optional<TransferMatrix> phi_x, phi_u;
  std::optional<TransferMatrix> R;
  Partition signals;
  Gains gains;

  std::optional<CoprimeFactorization> youla;
  std::optional<IopQuadruple> iop;
  std::optional<SlsStateFeedback> sls_sf;
  std::optional<SlsOutputFeedback> sls_of;

  RealizationSystem realization() const;
  /// G for plant-controller, C (zI - A)^-1 B + D for state-space kinds with
  /// an output map. Throws MissingBlock.
  TransferMatrix plant_transfer() const;
  /// Throws MissingBlock.
  const StateSpace& state_space() const;
};

Json to_json(const SystemFile& f);
/// Checks the schema tag and the payload for the declared kind. Throws
/// ParseError, MissingBlock, DimensionMismatch.
SystemFile system_from_json(const Json& j);

/// Re-runs the verify operation of every parameterization block present.
/// Throws IdentityCheckFailed naming the first block that fails.
void verify_blocks(const SystemFile& f);

// ---------------------------------------------------------------------------
// Perturbation files.

/// A perturbation of the realization (a full matrix or labelled blocks) or of
/// the plant data (dA..dD, dG), mapped onto the host realization by
/// realization_delta.
struct PerturbationFile {
  std::optional<TransferMatrix> delta;
  struct LabelledBlock {
    std::string row, col;
    TransferMatrix value;
  };
  std::vector<LabelledBlock> blocks;
  std::optional<TransferMatrix> dA, dB, dC, dD, dG;

  bool is_plant() const { return dA || dB || dC || dD || dG; }
};

PerturbationFile perturbation_from_json(const Json& j);
Json to_json(const PerturbationFile& p);

/// Places the perturbation on the system's realization. Plant perturbations
/// land on (x,x), (x,u), (y,x), (y,u) or, for a plant-controller loop, (y,u).
/// Throws InvalidArgument, DimensionMismatch.
AdditivePerturbation realization_delta(const SystemFile& sys, const PerturbationFile& p);

// ---------------------------------------------------------------------------
// Reports.

struct InputDigest {
  std::string role;
  std::string sha256;
  friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

struct Report {
  std::string command;
  std::string tool_version;
  std::vector<InputDigest> inputs;
  Certificate certificate;
  /// Command-specific results.
  Json details = Json::object();
  int exit_code = 0;
  /// Only written when timing was requested, so reports stay reproducible.
  std::optional<double> elapsed_ms;
  friend bool operator==(const Report&, const Report&) = default;
};

Json to_json(const Report& r);
Report report_from_json(const Json& j);

// ---------------------------------------------------------------------------
// Files.

/// Throws InvalidArgument when the file cannot be read.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string sha256_hex(const std::string& bytes);
/// Parses JSON text; syntax errors become ParseError.
Json parse_json(const std::string& text);
/// Two-space indented JSON followed by a newline.
std::string dump_json(const Json& j);

}  // namespace realstab
