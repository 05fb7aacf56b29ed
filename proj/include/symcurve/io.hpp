#pragma once

#include "symcurve/frenet.hpp"
#include "symcurve/normalize.hpp"

// Single-header json library lives in vendor/ as <json.hpp>.
#include <json.hpp>

namespace symcurve {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "symcurve/1";

struct RunConfig {
  unsigned precision_bits = 192;
  int jet_order = 0;       // 0: use the input / diagram default
  double rank_tol = 0.0;   // 0: derived from the precision
  std::uint64_t seed = 1;
  std::string format = "json";  // json | text
  std::string out_path;         // empty: stdout
  bool convention_audit = true;

  void apply() const;  // sets the floating precision for this thread
};

/// Environment default: SYMCURVE_PRECISION overrides the precision bits.
RunConfig config_from_env();

json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Backend preferred = Backend::exact);
json jet_to_json(const Jet& j);
json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j, Backend b = Backend::exact);
json matjet_to_json(const MatrixJet& m);

json diagram_to_json(const ReducedDiagram& d);
/// Accepts {"rows":[{"length":..,"multiplicity":..},..]} or {"columns":[m1,..]}.
ReducedDiagram diagram_from_json(const json& j);

/// Curve files: {"schema":"symcurve/1","m":..,"t0":"0","jet_order":..,
/// "frame_columns":[[..2m coefficient lists..] per column]}, rational strings.
CurveSpec curve_from_json(const json& j);
json curve_to_json(const CurveSpec& c);

EuclideanCurve euclidean_from_json(const json& j);
json euclidean_to_json(const EuclideanCurve& c);

/// The convention block embedded in every report.
json convention_audit_json();
json report_envelope(const RunConfig& cfg);

json regularity_to_json(const RegularityReport& r);
json symbol_to_json(const SymbolResult& r);
json normalization_space_to_json(const NormalizationSpace& N);
json complementarity_to_json(const ComplementarityReport& r);
json result_to_json(const CanonicalFrameResult& r);
json fingerprint_to_json(const InvariantFingerprint& f);
json frenet_to_json(const FrenetResult& f);

json load_json_file(const std::string& path);
void write_report(const json& report, const RunConfig& cfg);

}  // namespace symcurve
