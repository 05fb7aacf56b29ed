#include "symcurve/io.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace symcurve {

void RunConfig::apply() const {
  set_float_precision_bits(precision_bits);
  set_rank_tolerance_override(rank_tol);
}

RunConfig config_from_env() {
  RunConfig cfg;
  if (const char* p = std::getenv("SYMCURVE_PRECISION")) {
    long v = std::atol(p);
    if (v >= 64) cfg.precision_bits = static_cast<unsigned>(v);
  }
  return cfg;
}

json scalar_to_json(const Scalar& s) { return s.str(); }

Scalar scalar_from_json(const json& j, Backend preferred) {
  if (j.is_number_integer()) return Scalar::exact(j.get<long>());
  if (j.is_number_float()) return Scalar(FloatMP(j.get<double>()));
  if (j.is_string()) {
    Scalar s = Scalar::parse(j.get<std::string>());
    return preferred == Backend::floating ? s.to_float() : s;
  }
  throw BadFormat("expected a scalar");
}

json jet_to_json(const Jet& j) {
  json coeffs = json::array();
  for (int q = 0; q <= j.order(); ++q) coeffs.push_back(j.coeff(q).str());
  return json{{"t0", j.t0().str()}, {"order", j.order()}, {"coefficients", coeffs}};
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j, Backend b) {
  if (!j.is_array() || j.empty()) throw BadFormat("expected a matrix as an array of rows");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols, b);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[static_cast<size_t>(i)].size()) != cols)
      throw BadFormat("ragged matrix");
    for (int c = 0; c < cols; ++c)
      m.at(i, c) = scalar_from_json(j[static_cast<size_t>(i)][static_cast<size_t>(c)], b);
  }
  return m;
}

json matjet_to_json(const MatrixJet& m) {
  json out;
  out["t0"] = m.t0().str();
  out["order"] = m.order();
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      json coeffs = json::array();
      for (int q = 0; q <= m.order(); ++q) coeffs.push_back(m.coeff(q).at(i, j).str());
      row.push_back(coeffs);
    }
    entries.push_back(row);
  }
  out["entries"] = entries;
  return out;
}

json diagram_to_json(const ReducedDiagram& d) {
  json rows = json::array();
  for (const auto& r : d.rows)
    rows.push_back(json{{"length", r.length}, {"multiplicity", r.multiplicity}});
  return json{{"rows", rows}};
}

ReducedDiagram diagram_from_json(const json& j) {
  if (j.contains("rows")) {
    std::vector<int> lengths;
    for (const auto& r : j["rows"]) {
      int len = r.at("length").get<int>();
      int mult = r.contains("multiplicity") ? r["multiplicity"].get<int>() : 1;
      if (len <= 0 || mult <= 0) throw BadFormat("row lengths and multiplicities must be positive");
      for (int i = 0; i < mult; ++i) lengths.push_back(len);
    }
    return reduce_diagram(YoungDiagram::from_rows(lengths));
  }
  if (j.contains("columns")) {
    std::vector<int> cols;
    for (const auto& c : j["columns"]) cols.push_back(c.get<int>());
    return reduce_diagram(YoungDiagram::from_columns(cols));
  }
  throw BadFormat("diagram needs \"rows\" or \"columns\"");
}

CurveSpec curve_from_json(const json& j) {
  if (!j.contains("m") || !j.contains("frame_columns")) throw BadFormat("curve needs m and frame_columns");
  CurveSpec c;
  c.m = j["m"].get<int>();
  if (c.m <= 0) throw BadFormat("m must be positive");
  Scalar t0 = j.contains("t0") ? scalar_from_json(j["t0"]) : Scalar::exact(0);
  int K = j.contains("jet_order") ? j["jet_order"].get<int>() : -1;
  const json& cols = j["frame_columns"];
  if (static_cast<int>(cols.size()) != c.m)
    throw BadFormat("expected " + std::to_string(c.m) + " frame columns, got " +
                    std::to_string(cols.size()));
  int maxdeg = 0;
  for (const auto& col : cols) {
    if (static_cast<int>(col.size()) != 2 * c.m)
      throw BadFormat("each frame column needs 2m coordinate polynomials");
    for (const auto& poly : col)
      maxdeg = std::max(maxdeg, static_cast<int>(poly.size()) - 1);
  }
  if (K < 0) K = maxdeg;
  if (maxdeg > K) throw BadFormat("polynomial degree exceeds the jet order");
  c.frame = MatrixJet::zero(2 * c.m, c.m, t0, K, Backend::exact);
  for (int jc = 0; jc < c.m; ++jc)
    for (int i = 0; i < 2 * c.m; ++i) {
      const json& poly = cols[static_cast<size_t>(jc)][static_cast<size_t>(i)];
      for (size_t q = 0; q < poly.size(); ++q)
        c.frame.coeff(static_cast<int>(q)).at(i, jc) = scalar_from_json(poly[q]);
    }
  if (j.contains("name")) c.name = j["name"].get<std::string>();
  validate_curve(c);
  return c;
}

json curve_to_json(const CurveSpec& c) {
  json out;
  out["schema"] = kSchema;
  out["space"] = "lagrangian";
  out["m"] = c.m;
  out["t0"] = c.t0().str();
  out["jet_order"] = c.jet_order();
  if (!c.name.empty()) out["name"] = c.name;
  json cols = json::array();
  for (int jc = 0; jc < c.m; ++jc) {
    json col = json::array();
    for (int i = 0; i < 2 * c.m; ++i) {
      json poly = json::array();
      Jet e = c.frame.entry(i, jc);
      int top = e.order();
      while (top > 0 && e.coeff(top).is_zero()) --top;
      for (int q = 0; q <= top; ++q) poly.push_back(e.coeff(q).str());
      col.push_back(poly);
    }
    cols.push_back(col);
  }
  out["frame_columns"] = cols;
  return out;
}

EuclideanCurve euclidean_from_json(const json& j) {
  EuclideanCurve c;
  c.n = j.at("n").get<int>();
  Scalar t0 = j.contains("t0") ? scalar_from_json(j["t0"]) : Scalar::exact(0);
  const json& polys = j.at("gamma");
  if (static_cast<int>(polys.size()) != c.n) throw BadFormat("gamma needs n polynomials");
  int K = j.contains("jet_order") ? j["jet_order"].get<int>() : 0;
  for (const auto& p : polys) K = std::max(K, static_cast<int>(p.size()) - 1);
  c.gamma = MatrixJet::zero(c.n, 1, t0, K, Backend::exact);
  for (int i = 0; i < c.n; ++i) {
    const json& poly = polys[static_cast<size_t>(i)];
    for (size_t q = 0; q < poly.size(); ++q)
      c.gamma.coeff(static_cast<int>(q)).at(i, 0) = scalar_from_json(poly[q]);
  }
  c.arc_length = j.value("arc_length", true);
  return c;
}

json euclidean_to_json(const EuclideanCurve& c) {
  json out;
  out["schema"] = kSchema;
  out["space"] = "euclidean";
  out["n"] = c.n;
  out["t0"] = c.gamma.t0().str();
  out["jet_order"] = c.gamma.order();
  out["arc_length"] = c.arc_length;
  json polys = json::array();
  for (int i = 0; i < c.n; ++i) {
    json poly = json::array();
    Jet e = c.gamma.entry(i, 0);
    for (int q = 0; q <= e.order(); ++q) poly.push_back(e.coeff(q).str());
    polys.push_back(poly);
  }
  out["gamma"] = polys;
  return out;
}

json convention_audit_json() {
  return json{
      {"pairing", "mirror pairs carry +1; paired degrees sum to -1"},
      {"degree_zero_form_sign", -1},
      {"note", "with the printed pairing and sign tables the quadratic form "
               "sigma(delta x, x) is negative definite on the degree-0 part; "
               "curves with a positive-semidefinite velocity form are analyzed "
               "under the negated symplectic form"},
      {"assignment_parity", "the duplicated odd case of the classical assignment "
                            "is read as the even case"},
  };
}

json report_envelope(const RunConfig& cfg) {
  json out;
  out["schema"] = kSchema;
  out["backend"] = "rational+mpfr";
  out["precision_bits"] = cfg.precision_bits;
  out["rank_tolerance"] = Scalar(rank_tolerance()).str();
  if (cfg.convention_audit) out["convention_audit"] = convention_audit_json();
  return out;
}

json regularity_to_json(const RegularityReport& r) {
  json out;
  out["equiregular"] = r.equiregular;
  out["equiregular_certification"] = "sampled points only (probabilistic)";
  json samp = json::array();
  for (const auto& [t, dims] : r.sampled_dims) samp.push_back(json{{"t", t}, {"dims", dims}});
  out["sampled_extension_dims"] = samp;
  out["ample"] = r.ample;
  out["ample_witness_p"] = r.ample_witness_p;
  switch (r.monotone) {
    case Monotone::nondecreasing: out["monotone"] = "nondecreasing"; break;
    case Monotone::nonincreasing: out["monotone"] = "nonincreasing"; break;
    case Monotone::indefinite: out["monotone"] = "indefinite"; break;
    case Monotone::degenerate: out["monotone"] = "degenerate"; break;
  }
  json ev = json::array();
  for (const auto& e : r.velocity_eigenvalues) ev.push_back(e.str());
  out["velocity_eigenvalues"] = ev;
  out["young_diagram_columns"] = r.young_diagram.column_counts;
  if (!r.young_diagram.column_counts.empty())
    out["reduced_diagram"] = diagram_to_json(reduce_diagram(r.young_diagram));
  return out;
}

json symbol_to_json(const SymbolResult& r) {
  json out;
  out["reduced_diagram"] = diagram_to_json(r.diagram);
  out["monotone_sign"] = r.monotone_sign;
  out["conjugation_residual"] = r.conjugation_residual.str();
  out["symplectic_residual"] = r.symplectic_residual.str();
  out["conjugator"] = matrix_to_json(r.Q);
  json pieces;
  for (const auto& [j, blk] : r.delta_t)
    pieces[std::to_string(j)] = matrix_to_json(blk);
  out["graded_pieces"] = pieces;
  return out;
}

json normalization_space_to_json(const NormalizationSpace& N) {
  json out;
  GradedContext& ctx = N.ctx();
  json degs = json::array();
  for (int k = 0; k <= ctx.top_degree(); ++k) {
    degs.push_back(json{{"k", k},
                        {"dim_g", ctx.dim_g(k)},
                        {"dim_u", N.u_space().dim(k)},
                        {"dim_im_ad_delta", N.im_space().dim(k)},
                        {"dim_N", N.dim_n(k)}});
  }
  out["degrees"] = degs;
  json blocks = json::array();
  for (const auto& fb : N.free_blocks()) {
    blocks.push_back(json{{"chain_b", fb.b.str()},
                          {"chain_rho", fb.rho.str()},
                          {"position", fb.pos_b.str() + "x" + fb.pos_a.str()},
                          {"degree", fb.degree},
                          {"left_index", fb.k_index},
                          {"symmetry", fb.same_row ? (fb.k_index % 2 ? "symmetric" : "skew")
                                                   : "full"},
                          {"parameters", fb.param_count}});
  }
  out["free_blocks"] = blocks;
  return out;
}

json complementarity_to_json(const ComplementarityReport& r) {
  json out;
  json degs = json::array();
  for (const auto& row : r.degrees)
    degs.push_back(json{{"k", row.k},
                        {"dim_g", row.dim_g},
                        {"dim_u", row.dim_u},
                        {"dim_im_ad_delta", row.dim_im},
                        {"dim_N", row.dim_n},
                        {"direct_sum", row.direct_sum}});
  out["degrees"] = degs;
  out["dimensions_ok"] = r.dimensions_ok;
  out["ad_invariance_checks"] = r.ad_checks;
  out["ad_invariance_failures"] = r.ad_failures;
  out["ok"] = r.ok();
  return out;
}

json result_to_json(const CanonicalFrameResult& r) {
  json out;
  out["reduced_diagram"] = diagram_to_json(r.model->diagram().reduced());
  out["monotone_sign"] = r.monotone_sign;
  out["result_order"] = r.result_order;
  out["membership_residual"] = r.membership_residual.str();
  json nf;
  for (const auto& [k, jet] : r.n_free)
    if (jet.rows()) nf[std::to_string(k)] = matjet_to_json(jet);
  out["normalized_free_coefficients"] = nf;
  json cms = json::array();
  for (const auto& cm : curvature_maps(r)) {
    // The classical works index this family by (a, m(b)) relative to the
    // labels used here; conversions should map b -> m(b) on the first index.
    cms.push_back(json{{"b", cm.b.str()},
                       {"a", cm.a.str()},
                       {"in_normalization_space", cm.in_normalization_space},
                       {"value", matjet_to_json(cm.value)}});
  }
  out["curvature_maps"] = cms;
  out["curvature_index_note"] =
      "block (b,a) here corresponds to (a, mirror(b)) in the classical indexing";
  json tr = json::array();
  for (const auto& st : r.trace)
    tr.push_back(json{{"k", st.k},
                      {"residual_gauge_dim", st.residual_gauge_dim},
                      {"gauge_magnitude", st.gauge_magnitude.str()},
                      {"ode_magnitude", st.ode_magnitude.str()},
                      {"split_residual", st.split_residual.str()}});
  out["gauge_trace"] = tr;
  out["fingerprint"] = fingerprint_to_json(invariant_fingerprint(r));
  return out;
}

json fingerprint_to_json(const InvariantFingerprint& f) {
  json out;
  out["complete"] = f.complete;
  if (!f.complete) out["flag"] = "partial";
  json entries = json::array();
  for (const auto& [label, jet] : f.entries)
    entries.push_back(json{{"label", label}, {"jet", jet_to_json(jet)}});
  out["entries"] = entries;
  return out;
}

json frenet_to_json(const FrenetResult& f) {
  json out;
  out["reparametrized"] = f.reparametrized;
  json ks = json::array();
  for (const auto& k : f.curvatures) ks.push_back(jet_to_json(k));
  out["curvatures"] = ks;
  out["structure_function"] = matjet_to_json(f.structure);
  out["affine_structure_function"] = matjet_to_json(f.affine_structure);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw BadFormat("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

namespace {
void render_text(const json& j, const std::string& indent, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || value.is_array()) {
        out += indent + key + ":\n";
        render_text(value, indent + "  ", out);
      } else {
        out += indent + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (value.is_object() || value.is_array()) {
        out += indent + "-\n";
        render_text(value, indent + "  ", out);
      } else {
        out += indent + "- " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
      }
    }
  } else {
    out += indent + j.dump() + "\n";
  }
}
}  // namespace

void write_report(const json& report, const RunConfig& cfg) {
  std::string text;
  if (cfg.format == "text") {
    render_text(report, "", text);
  } else {
    text = report.dump(2) + "\n";
  }
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw Error("cannot write file: " + cfg.out_path);
    out << text;
  }
}

}  // namespace symcurve
