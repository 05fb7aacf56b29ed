#pragma once

#include "symcurve/matjet.hpp"

namespace symcurve {

/// Curve in Euclidean n-space as an n x 1 jet column.
struct EuclideanCurve {
  int n = 0;
  MatrixJet gamma;
  bool arc_length = true;
};

struct FrenetResult {
  MatrixJet frame;       // orthonormal frame jet, columns e_1..e_n
  MatrixJet structure;   // skew structure function, support on the first subdiagonal
  std::vector<Jet> curvatures;  // entries (j+1, j), all positive at the base point
  MatrixJet affine_structure;   // bordered (n+1)x(n+1) structure function of the
                                // rigid-motion lift [[1,0],[gamma, frame]]
  bool reparametrized = false;
};

/// Orthonormal frame from the derivative tuple with positive subdiagonal
/// structure entries. Requires arc length (NotArcLength) and independent
/// derivatives up to order n (RegularityFailed).
FrenetResult frenet_frame(const EuclideanCurve& c);

/// Arc-length reparametrization at the jet level (series reversion of the
/// integrated speed); the result carries base parameter 0.
EuclideanCurve arc_length_reparametrize(const EuclideanCurve& c);

/// frenet_frame after reparametrizing when needed; flags the output.
FrenetResult frenet_frame_auto(const EuclideanCurve& c);

/// Jet-mode frame integration: E' = E R, gamma' = e_1.
EuclideanCurve frenet_reconstruct_jet(const MatrixJet& R, const Mat& initial_frame,
                                      const Mat& initial_point);

struct SampledEuclideanCurve {
  std::vector<Scalar> times;
  std::vector<Mat> points;  // n x 1
  std::vector<Mat> frames;
  Scalar max_orthogonality_defect = Scalar::exact(0);
};

/// Fixed-step fourth-order integration with orthogonality monitoring.
SampledEuclideanCurve frenet_reconstruct_sampled(const MatrixJet& R, const Mat& initial_frame,
                                                 const Mat& initial_point, const Scalar& t_end,
                                                 int steps, double defect_budget);

}  // namespace symcurve
