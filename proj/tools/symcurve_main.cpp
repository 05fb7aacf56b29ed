#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <thread>

#include "symcurve/io.hpp"

namespace sc = symcurve;
using sc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;
constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;

json load_json_arg(const std::string& arg) {
  // Inline JSON or a file path.
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
  return sc::load_json_file(arg);
}

sc::CurveSpec load_curve_arg(const std::string& arg) {
  return sc::curve_from_json(load_json_arg(arg));
}

int default_order(const sc::ReducedDiagram& red, int requested, int poly_degree) {
  if (requested > 0) {
    int floor = 2 * red.p1() + 2;
    if (requested < floor)
      throw sc::BadFormat("jet order must be at least " + std::to_string(floor) +
                          " for this diagram");
    return requested;
  }
  return sc::recommended_jet_order(red, poly_degree);
}

struct AuditOutcome {
  json report;
  bool ok;
};

AuditOutcome audit_one_diagram(const sc::ReducedDiagram& red, std::uint64_t seed) {
  json rep;
  rep["diagram"] = red.str();
  bool ok = true;
  sc::SymplecticModel model(sc::build_double_diagram(red));
  sc::GradedContext ctx(model);
  sc::Rng rng(seed);

  auto prol = sc::prolongation(ctx);  // throws on closed-form mismatch
  int expected = 0;
  for (const auto& r : red.rows) expected += r.multiplicity * (r.multiplicity - 1) / 2;
  rep["dim_u"] = prol.u.total_dim();
  rep["closed_form_ok"] = prol.closed_form_ok && prol.u.total_dim() == expected;

  // Bracket closure of the prolongation.
  bool closure = true;
  const sc::Mat& U0 = prol.u.coords.at(0);
  for (int i = 0; i < U0.cols() && closure; ++i)
    for (int j = 0; j < U0.cols() && closure; ++j) {
      sc::BlockEndomorphism x(&model, ctx.from_coords(U0.col(i), 0));
      sc::BlockEndomorphism y(&model, ctx.from_coords(U0.col(j), 0));
      sc::Mat br = sc::bracket(x, y).dense();
      if (!U0.cols()) continue;
      if (!U0.solve(ctx.to_coords(br, 0))) closure = false;
    }
  rep["bracket_closure"] = closure;
  ok = ok && closure && rep["closed_form_ok"].get<bool>();

  auto ut = sc::unparametrized_prolongation(ctx);
  rep["dim_unparametrized_minus_dim_u"] = ut.total_dim() - prol.u.total_dim();
  ok = ok && (ut.total_dim() - prol.u.total_dim() == 3);

  // Coboundary roundtrips and the chain-kernel identity.
  bool cob = true;
  for (int t = 0; t < 10 && cob; ++t) {
    auto X0 = ctx.random_g0plus(rng);
    auto split0 = sc::degree_split(X0);
    sc::BlockEndomorphism Xh = sc::BlockEndomorphism::zero(&model);
    for (auto& [k, comp] : split0)
      if (k >= 1) Xh = Xh + comp;
    auto Y = sc::bracket(ctx.delta(), Xh);
    auto cert = sc::coboundary_test(Y, ctx);
    if (!cert.member) cob = false;
    else if (!(sc::bracket(ctx.delta(), cert.X) - Y).dense().is_zero()) cob = false;
  }
  rep["coboundary_roundtrip"] = cob;
  ok = ok && cob;

  // Parity of the chain sums.
  bool parity = true;
  const sc::DoubleDiagram& dd = model.diagram();
  for (int t = 0; t < 20 && parity; ++t) {
    auto Y = ctx.random_g0plus(rng);
    for (int i = 1; i <= red.num_rows() && parity; ++i) {
      sc::Box rho = dd.last_box(i);
      for (const sc::Box& b : dd.boxes()) {
        if (b.row != i || b == rho) continue;
        sc::Mat D = sc::d_operator(Y, b, rho);
        sc::Mat defect = dd.left_index(b) % 2 ? D - D.transpose() : D + D.transpose();
        if (!defect.is_zero()) {
          parity = false;
          break;
        }
      }
    }
  }
  rep["parity_law"] = parity;
  ok = ok && parity;

  // Complementarity for the classical assignment and random ones.
  sc::NormalizationSpace N(ctx, sc::phi0_assignment(dd));
  auto comp = sc::complementarity_audit(N, 3, seed ^ 0x5eedu);
  rep["phi0_complementarity"] = sc::complementarity_to_json(comp);
  ok = ok && comp.ok();
  bool random_ok = true;
  for (int t = 0; t < 3; ++t) {
    try {
      sc::NormalizationSpace Nr(ctx, sc::random_assignment(dd, rng));
      auto c2 = sc::complementarity_audit(Nr, 1, seed ^ (0xabcu + t));
      if (!c2.ok()) random_ok = false;
    } catch (const sc::NotComplementary&) {
      random_ok = false;
    }
  }
  rep["random_assignment_complementarity"] = random_ok;
  ok = ok && random_ok;

  rep["ok"] = ok;
  return {rep, ok};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symcurve: canonical moving frames and curvature-type invariants "
               "for monotone curves in Lagrangian Grassmannians"};
  app.require_subcommand(1);

  sc::RunConfig cfg = sc::config_from_env();
  app.add_option("--precision-bits", cfg.precision_bits, "floating precision in bits")
      ->check(CLI::Range(64u, 4096u));
  int jet_order_opt = 0;
  app.add_option("--jet-order", jet_order_opt, "jet order override");
  double rank_tol = 0.0;
  app.add_option("--rank-tol", rank_tol, "rank tolerance override");
  app.add_option("--seed", cfg.seed, "seed for randomized commands");
  app.add_option("--format", cfg.format, "json|text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", cfg.out_path, "output path (default stdout)");

  std::string curve_arg, curve_arg2, diagram_arg, structure_arg, t_arg = "0";
  std::string phi_arg = "phi0", mode_arg = "jet";
  int poly_degree = 2, max_boxes = 8, steps = 64;
  double t_end = 1.0, budget = 1e-9;

  auto* analyze = app.add_subcommand("analyze", "regularity, monotonicity and diagram");
  analyze->add_option("--curve", curve_arg)->required();
  auto* symbol = app.add_subcommand("symbol", "graded symbol and its conjugator");
  symbol->add_option("--curve", curve_arg)->required();
  symbol->add_option("--t", t_arg, "evaluation parameter");
  auto* prolong = app.add_subcommand("prolongation", "algebraic prolongation dimensions");
  prolong->add_option("--diagram", diagram_arg)->required();
  auto* nspace_cmd = app.add_subcommand("normalization-space", "normalization space report");
  nspace_cmd->add_option("--diagram", diagram_arg)->required();
  nspace_cmd->add_option("--phi", phi_arg, "phi0|random");
  auto* normalize_cmd = app.add_subcommand("normalize", "canonical frame and curvatures");
  normalize_cmd->add_option("--curve", curve_arg)->required();
  auto* invariants = app.add_subcommand("invariants", "invariant fingerprint");
  invariants->add_option("--curve", curve_arg)->required();
  auto* equivalent = app.add_subcommand("equivalent", "decide symplectic equivalence");
  equivalent->add_option("curve_a", curve_arg)->required();
  equivalent->add_option("curve_b", curve_arg2)->required();
  auto* flat = app.add_subcommand("flat", "emit the flat curve of a diagram");
  flat->add_option("--diagram", diagram_arg)->required();
  auto* random_cmd = app.add_subcommand("random-curve", "emit a seeded generated curve");
  random_cmd->add_option("--diagram", diagram_arg)->required();
  random_cmd->add_option("--poly-degree", poly_degree);
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "integrate a structure function");
  reconstruct_cmd->add_option("--structure", structure_arg, "JSON with diagram and matrix jet")
      ->required();
  reconstruct_cmd->add_option("--mode", mode_arg, "jet|sampled");
  reconstruct_cmd->add_option("--t-end", t_end);
  reconstruct_cmd->add_option("--steps", steps);
  reconstruct_cmd->add_option("--defect-budget", budget);
  auto* frenet_cmd = app.add_subcommand("frenet", "orthonormal frame invariants");
  frenet_cmd->add_option("--curve", curve_arg)->required();
  auto* audit_cmd = app.add_subcommand("audit", "exact algebra audit over all diagrams");
  audit_cmd->add_option("--max-boxes", max_boxes)->check(CLI::Range(1, 10));

  // Global options may appear after the subcommand name.
  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.jet_order = jet_order_opt;
  cfg.apply();

  try {
    json report = sc::report_envelope(cfg);

    if (*analyze) {
      sc::CurveSpec c = load_curve_arg(curve_arg);
      std::vector<sc::Scalar> samples;
      sc::Rng rng(cfg.seed);
      for (int i = 0; i < 4; ++i) samples.push_back(rng.rational(1, 8));
      report["command"] = "analyze";
      report["regularity"] = sc::regularity_to_json(sc::regularity_report(c, samples));
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*symbol) {
      sc::CurveSpec c = load_curve_arg(curve_arg);
      report["command"] = "symbol";
      report["symbol"] = sc::symbol_to_json(sc::symbol_at(c, sc::Scalar::parse(t_arg)));
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*prolong) {
      sc::ReducedDiagram red = sc::diagram_from_json(load_json_arg(diagram_arg));
      sc::SymplecticModel model(sc::build_double_diagram(red));
      sc::GradedContext ctx(model);
      auto prol = sc::prolongation(ctx);
      auto ut = sc::unparametrized_prolongation(ctx);
      report["command"] = "prolongation";
      report["diagram"] = sc::diagram_to_json(red);
      json dims;
      for (const auto& [k, b] : prol.u.coords) dims[std::to_string(k)] = b.cols();
      report["dim_u_by_degree"] = dims;
      report["dim_u"] = prol.u.total_dim();
      report["closed_form_ok"] = prol.closed_form_ok;
      json udims;
      for (const auto& [k, b] : ut.coords) udims[std::to_string(k)] = b.cols();
      report["dim_unparametrized_by_degree"] = udims;
      report["dim_unparametrized"] = ut.total_dim();
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*nspace_cmd) {
      sc::ReducedDiagram red = sc::diagram_from_json(load_json_arg(diagram_arg));
      sc::SymplecticModel model(sc::build_double_diagram(red));
      sc::GradedContext ctx(model);
      sc::Assignment phi;
      if (phi_arg == "phi0") {
        phi = sc::phi0_assignment(model.diagram());
      } else if (phi_arg == "random") {
        sc::Rng rng(cfg.seed);
        phi = sc::random_assignment(model.diagram(), rng);
      } else {
        throw sc::BadFormat("unknown assignment: " + phi_arg);
      }
      sc::NormalizationSpace N(ctx, phi);
      report["command"] = "normalization-space";
      report["diagram"] = sc::diagram_to_json(red);
      report["assignment"] = phi_arg;
      report["space"] = sc::normalization_space_to_json(N);
      auto comp = sc::complementarity_audit(N, 5, cfg.seed);
      report["complementarity"] = sc::complementarity_to_json(comp);
      sc::write_report(report, cfg);
      return comp.ok() ? kExitOk : kExitVerdict;
    }
    if (*normalize_cmd) {
      sc::CurveSpec c = load_curve_arg(curve_arg);
      auto res = sc::normalize_curve(c);
      report["command"] = "normalize";
      report["result"] = sc::result_to_json(res);
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*invariants) {
      sc::CurveSpec c = load_curve_arg(curve_arg);
      auto res = sc::normalize_curve(c);
      report["command"] = "invariants";
      report["reduced_diagram"] = sc::diagram_to_json(res.model->diagram().reduced());
      report["fingerprint"] = sc::fingerprint_to_json(sc::invariant_fingerprint(res));
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*equivalent) {
      sc::CurveSpec a = load_curve_arg(curve_arg);
      sc::CurveSpec b = load_curve_arg(curve_arg2);
      auto eq = sc::equivalence_test(a, b);
      report["command"] = "equivalent";
      switch (eq.verdict) {
        case sc::EquivalenceVerdict::equivalent: report["verdict"] = "equivalent"; break;
        case sc::EquivalenceVerdict::inequivalent: report["verdict"] = "inequivalent"; break;
        case sc::EquivalenceVerdict::undecided_partial:
          report["verdict"] = "undecided-partial";
          break;
      }
      report["detail"] = eq.detail;
      report["distance"] = eq.distance.str();
      sc::write_report(report, cfg);
      return eq.verdict == sc::EquivalenceVerdict::inequivalent ? kExitVerdict : kExitOk;
    }
    if (*flat) {
      sc::ReducedDiagram red = sc::diagram_from_json(load_json_arg(diagram_arg));
      auto g = sc::flat_curve(red, default_order(red, cfg.jet_order, 0));
      sc::write_report(sc::curve_to_json(g.curve), cfg);
      return kExitOk;
    }
    if (*random_cmd) {
      sc::ReducedDiagram red = sc::diagram_from_json(load_json_arg(diagram_arg));
      auto g = sc::random_curve(red, cfg.seed, poly_degree,
                                default_order(red, cfg.jet_order, poly_degree));
      sc::write_report(sc::curve_to_json(g.curve), cfg);
      return kExitOk;
    }
    if (*reconstruct_cmd) {
      json sj = load_json_arg(structure_arg);
      sc::ReducedDiagram red = sc::diagram_from_json(sj.at("diagram"));
      sc::SymplecticModel model(sc::build_double_diagram(red));
      const json& mj = sj.at("matrix_jet");
      int order = mj.at("order").get<int>();
      sc::Scalar t0 = sc::scalar_from_json(mj.at("t0"));
      sc::MatrixJet C = sc::MatrixJet::zero(model.dim(), model.dim(), t0, order,
                                            sc::Backend::exact);
      const json& entries = mj.at("entries");
      for (int i = 0; i < model.dim(); ++i)
        for (int j2 = 0; j2 < model.dim(); ++j2) {
          const json& coeffs = entries[static_cast<size_t>(i)][static_cast<size_t>(j2)];
          for (size_t q = 0; q < coeffs.size() && q <= static_cast<size_t>(order); ++q)
            C.coeff(static_cast<int>(q)).at(i, j2) = sc::scalar_from_json(coeffs[q]);
        }
      report["command"] = "reconstruct";
      if (mode_arg == "jet") {
        sc::MatrixJet G = sc::reconstruct_jet(C, sc::Mat::identity(model.dim()));
        report["frame_jet"] = sc::matjet_to_json(G);
        auto sf = sc::structure_function(G, model);
        sc::MatrixJet back = sf.C;
        sc::MatrixJet ct = C.truncated(back.order());
        report["roundtrip_defect"] = (back - ct).max_abs_coeff().str();
      } else {
        auto sampled = sc::reconstruct_sampled(C.to_float(),
                                               sc::Mat::identity(model.dim(), sc::Backend::floating),
                                               model.J(), sc::Scalar::parse(std::to_string(t_end)),
                                               steps, budget);
        report["max_symplectic_defect"] = sampled.max_symplectic_defect.str();
        json frames = json::array();
        for (size_t i = 0; i < sampled.times.size(); ++i)
          frames.push_back(json{{"t", sampled.times[i].str()},
                                {"frame", sc::matrix_to_json(sampled.frames[i])}});
        report["frames"] = frames;
      }
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*frenet_cmd) {
      sc::EuclideanCurve c = sc::euclidean_from_json(load_json_arg(curve_arg));
      auto fr = sc::frenet_frame_auto(c);
      report["command"] = "frenet";
      report["frenet"] = sc::frenet_to_json(fr);
      sc::write_report(report, cfg);
      return kExitOk;
    }
    if (*audit_cmd) {
      auto diagrams = sc::all_reduced_diagrams(max_boxes);
      std::vector<AuditOutcome> outcomes(diagrams.size());
      std::atomic<size_t> next{0};
      unsigned workers = std::max(1u, std::thread::hardware_concurrency());
      workers = std::min<unsigned>(workers, diagrams.size());
      std::vector<std::thread> pool;
      unsigned bits = cfg.precision_bits;
      std::uint64_t seed = cfg.seed;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, bits, seed] {
          sc::set_float_precision_bits(bits);
          for (size_t i = next.fetch_add(1); i < diagrams.size(); i = next.fetch_add(1))
            outcomes[i] = audit_one_diagram(diagrams[i], seed + i);
        });
      for (auto& th : pool) th.join();
      bool all_ok = true;
      json items = json::array();
      for (const auto& o : outcomes) {
        items.push_back(o.report);
        all_ok = all_ok && o.ok;
      }
      report["command"] = "audit";
      report["max_boxes"] = max_boxes;
      report["diagram_count"] = diagrams.size();
      report["all_ok"] = all_ok;
      report["diagrams"] = items;
      sc::write_report(report, cfg);
      return all_ok ? kExitOk : kExitVerdict;
    }
  } catch (const sc::BadFormat& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sc::Error& e) {
    std::string msg = e.what();
    if (msg.rfind("cannot open file", 0) == 0 || msg.rfind("cannot write file", 0) == 0) {
      std::cerr << "file error: " << msg << "\n";
      return kExitFile;
    }
    std::cerr << "error: " << msg << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
