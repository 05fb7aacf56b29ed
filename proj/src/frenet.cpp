#include "symcurve/frenet.hpp"

namespace symcurve {

namespace {

MatrixJet amul(MatrixJet a, MatrixJet b) {
  align(a, b);
  return a * b;
}

Jet dot(const MatrixJet& x, const MatrixJet& y) {
  MatrixJet v = amul(x.transpose(), y);
  return v.entry(0, 0);
}

Scalar float_tol() { return Scalar(rank_tolerance()); }

}  // namespace

FrenetResult frenet_frame(const EuclideanCurve& c0) {
  EuclideanCurve c{c0.n, c0.gamma.to_float(), c0.arc_length};
  const int n = c.n;
  if (c.gamma.rows() != n || c.gamma.cols() != 1) throw BadFormat("gamma must be n x 1");
  const Backend bk = Backend::floating;
  const Scalar t0 = c.gamma.t0();
  Scalar scale = Scalar::one(bk) + c.gamma.max_abs_coeff();
  Scalar tol = float_tol() * scale;

  MatrixJet d = c.gamma.derivative();
  Jet speed2 = dot(d, d);
  {
    Jet dev = speed2;
    dev.coeff(0) -= Scalar::one(bk);
    if (dev.max_abs_coeff() > tol.sqrt())
      throw NotArcLength("|gamma'|^2 - 1 deviates by " + dev.max_abs_coeff().str());
  }

  // Gram-Schmidt over the derivative tuple.
  std::vector<MatrixJet> derivs;
  MatrixJet cur = c.gamma;
  for (int j = 0; j < n; ++j) {
    cur = cur.derivative();
    derivs.push_back(cur);
  }
  std::vector<MatrixJet> frame;
  for (int j = 0; j < n; ++j) {
    MatrixJet v = derivs[static_cast<size_t>(j)];
    for (const auto& e : frame) {
      Jet coef = dot(e, v);
      MatrixJet et = e.truncated(coef.order());
      MatrixJet sub = et.scaled(coef);
      v = v.truncated(sub.order()) - sub;
    }
    Jet norm2 = dot(v, v);
    if (norm2.coeff(0) <= tol * tol * scale)
      throw RegularityFailed("derivative tuple degenerates at order " + std::to_string(j + 1));
    Jet inv_norm = norm2.sqrt().invert();
    v = v.truncated(inv_norm.order()).scaled(inv_norm);
    frame.push_back(v);
  }
  int ord = frame[0].order();
  for (const auto& e : frame) ord = std::min(ord, e.order());
  if (ord < 1) throw PrecisionExhausted("jet order exhausted in the frame construction");
  MatrixJet E = MatrixJet::zero(n, n, t0, ord, bk);
  for (int j = 0; j < n; ++j) E.set_block(0, j, frame[static_cast<size_t>(j)].truncated(ord));

  FrenetResult out;
  out.frame = E;
  out.structure = amul(E.transpose(), E.derivative());
  const MatrixJet& R = out.structure;
  // Structure checks: skew, support on the first subdiagonal, positive there.
  Scalar rtol = tol.sqrt();
  MatrixJet skew_defect = R + R.transpose();
  if (skew_defect.max_abs_coeff() > rtol)
    throw Error("frenet structure function loses skew-symmetry");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i <= j || i == j + 1) continue;
      if (R.entry(i, j).max_abs_coeff() > rtol)
        throw Error("frenet structure function has support off the first subdiagonal");
    }
  for (int j = 0; j + 1 < n; ++j) {
    Jet k = R.entry(j + 1, j);
    if (!(k.coeff(0) > Scalar::zero(bk)))
      throw Error("frenet curvature is not positive at the base point");
    out.curvatures.push_back(k);
  }

  out.affine_structure = MatrixJet::zero(n + 1, n + 1, t0, R.order(), bk);
  out.affine_structure.set_entry(1, 0, Jet::constant(Scalar::one(bk), t0, R.order()));
  out.affine_structure.set_block(1, 1, R);
  return out;
}

EuclideanCurve arc_length_reparametrize(const EuclideanCurve& c0) {
  EuclideanCurve c{c0.n, c0.gamma.to_float(), false};
  MatrixJet d = c.gamma.derivative();
  Jet speed2 = dot(d, d);
  if (!(speed2.coeff(0) > Scalar::zero(Backend::floating)))
    throw RegularityFailed("vanishing speed at the base point");
  Jet s = speed2.sqrt().antiderivative();  // s(t0) = 0
  Jet t_of_s = s.reversion();              // base 0, value offset below
  Jet g = t_of_s;
  g.coeff(0) = c.gamma.t0();
  EuclideanCurve out;
  out.n = c.n;
  out.arc_length = true;
  int K = g.order();
  out.gamma = MatrixJet::zero(c.n, 1, Scalar::zero(Backend::floating).to_float(), K,
                              Backend::floating);
  for (int i = 0; i < c.n; ++i) out.gamma.set_entry(i, 0, c.gamma.entry(i, 0).compose(g));
  return out;
}

FrenetResult frenet_frame_auto(const EuclideanCurve& c) {
  EuclideanCurve cf{c.n, c.gamma.to_float(), c.arc_length};
  MatrixJet d = cf.gamma.derivative();
  Jet speed2 = dot(d, d);
  Jet dev = speed2;
  dev.coeff(0) -= Scalar::one(Backend::floating);
  Scalar tol = float_tol().sqrt() * (Scalar::one(Backend::floating) + cf.gamma.max_abs_coeff());
  if (dev.max_abs_coeff() <= tol) return frenet_frame(cf);
  FrenetResult r = frenet_frame(arc_length_reparametrize(cf));
  r.reparametrized = true;
  return r;
}

EuclideanCurve frenet_reconstruct_jet(const MatrixJet& R, const Mat& initial_frame,
                                      const Mat& initial_point) {
  const int n = R.rows();
  auto rhs = [&R](const MatrixJet& A) {
    MatrixJet At = R;
    MatrixJet Bt = A;
    align(Bt, At);
    return Bt * At;
  };
  MatrixJet E = jet_ode_solve(rhs, initial_frame, R.t0(), R.order() + 1);
  MatrixJet e1 = E.block(0, 0, n, 1);
  EuclideanCurve out;
  out.n = n;
  out.arc_length = true;
  out.gamma = MatrixJet::zero(n, 1, R.t0(), e1.order() + 1, e1.backend());
  for (int i = 0; i < n; ++i) {
    Jet g = e1.entry(i, 0).antiderivative();
    g.coeff(0) = initial_point.at(i, 0);
    out.gamma.set_entry(i, 0, g);
  }
  return out;
}

SampledEuclideanCurve frenet_reconstruct_sampled(const MatrixJet& R0, const Mat& initial_frame,
                                                 const Mat& initial_point, const Scalar& t_end,
                                                 int steps, double defect_budget) {
  SampledEuclideanCurve out;
  MatrixJet R = R0.to_float();
  const int n = R.rows();
  Backend bk = Backend::floating;
  Mat E = initial_frame.to_backend(bk);
  Mat x = initial_point.to_backend(bk);
  Scalar t = R.t0().to_backend(bk);
  Scalar h = (t_end.to_backend(bk) - t) / Scalar::exact(steps).to_backend(bk);
  Scalar budget = Scalar(FloatMP(defect_budget));
  out.max_orthogonality_defect = Scalar::zero(bk);
  Scalar half = Scalar(1, 2).to_backend(bk);
  Scalar sixth = Scalar(1, 6).to_backend(bk);
  Scalar two = Scalar::exact(2).to_backend(bk);
  out.times.push_back(t);
  out.points.push_back(x);
  out.frames.push_back(E);
  auto fE = [&](const Scalar& tt, const Mat& g) { return g * R.evaluate(tt); };
  for (int i = 0; i < steps; ++i) {
    // frame step
    Mat k1 = fE(t, E);
    Mat k2 = fE(t + h * half, E + k1.scaled(h * half));
    Mat k3 = fE(t + h * half, E + k2.scaled(h * half));
    Mat k4 = fE(t + h, E + k3.scaled(h));
    Mat Enew = E + (k1 + k2.scaled(two) + k3.scaled(two) + k4).scaled(h * sixth);
    // base point step with the same tableau on gamma' = e_1
    Mat p1 = E.block(0, 0, n, 1);
    Mat p2 = (E + k1.scaled(h * half)).block(0, 0, n, 1);
    Mat p3 = (E + k2.scaled(h * half)).block(0, 0, n, 1);
    Mat p4 = (E + k3.scaled(h)).block(0, 0, n, 1);
    x = x + (p1 + p2.scaled(two) + p3.scaled(two) + p4).scaled(h * sixth);
    E = Enew;
    t = t + h;
    Mat defect = E.transpose() * E - Mat::identity(n, bk);
    Scalar dmax = defect.max_abs();
    if (dmax > out.max_orthogonality_defect) out.max_orthogonality_defect = dmax;
    if (dmax > budget)
      throw StepSizeTooLarge("orthogonality defect " + dmax.str() + " exceeds the budget");
    out.times.push_back(t);
    out.points.push_back(x);
    out.frames.push_back(E);
  }
  return out;
}

}  // namespace symcurve
