#pragma once

#include <string>
#include <vector>

#include "ccc/matrix.hpp"
#include "ccc/ratfunc.hpp"
#include "ccc/report.hpp"

namespace ccc {

// Coordinate chart x_1..x_n with a rational base point. Charts of the
// coframe calculus have n >= 3: below that the conformal-closedness
// criterion carries no information.
struct Chart {
  int n = 0;
  std::vector<std::string> variables;
  std::vector<Rational> base_point;
  std::string domain_note;

  Chart() = default;
  Chart(std::vector<std::string> variables, std::vector<Rational> base_point, std::string domain_note = {});
  static Chart standard(int n);
};

// Components c^k_{ij} of a V-valued skew bilinear object, stored for i < j
// only (k-major). value() applies antisymmetry.
template <class T>
class AntisymTensor {
 public:
  AntisymTensor() = default;
  AntisymTensor(int n, const T& zero) : n_(n), zero_(zero), data_(n * pair_count(n), zero) {}

  static int pair_count(int n) { return n * (n - 1) / 2; }
  static int pair_index(int n, int i, int j) { return i * n - i * (i + 1) / 2 + (j - i - 1); }

  int n() const { return n_; }
  const std::vector<T>& coords() const { return data_; }
  std::vector<T>& coords() { return data_; }

  // Requires i < j.
  const T& at(int k, int i, int j) const { return data_[k * pair_count(n_) + pair_index(n_, i, j)]; }
  T& at(int k, int i, int j) { return data_[k * pair_count(n_) + pair_index(n_, i, j)]; }

  T value(int k, int i, int j) const {
    if (i == j) return zero_;
    return i < j ? at(k, i, j) : T(-at(k, j, i));
  }
  // Sets the (i, j) component and its antisymmetric partner.
  void set(int k, int i, int j, const T& v) {
    if (i == j) throw IndexError("diagonal component of an antisymmetric tensor");
    if (i < j) {
      at(k, i, j) = v;
    } else {
      at(k, j, i) = T(-v);
    }
  }

  friend bool operator==(const AntisymTensor& a, const AntisymTensor& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  int n_ = 0;
  T zero_{};
  std::vector<T> data_;
};

// Smooth vector field sum_i comps[i] d/dx_i on a chart.
struct VectorField {
  std::vector<RatFunc> comps;

  int nvars() const { return static_cast<int>(comps.size()); }
  RatFunc apply(const RatFunc& f) const;
  VectorField operator+(const VectorField& other) const;
  VectorField operator-(const VectorField& other) const;
  VectorField scaled(const RatFunc& f) const;
  static VectorField zero(int nvars);
};

// Lie bracket [X, Y] f = X(Y f) - Y(X f).
VectorField bracket(const VectorField& x, const VectorField& y);

// omega^k = sum_j A(k, j) dx_j.
class Coframe {
 public:
  // Throws SingularError if det A vanishes identically or at the base point,
  // DimensionError on shape mismatch.
  Coframe(Chart chart, RatMatrix a);

  const Chart& chart() const { return chart_; }
  int n() const { return chart_.n; }
  const RatMatrix& matrix() const { return a_; }
  const RatFunc& det() const { return det_; }

 private:
  Chart chart_;
  RatMatrix a_;
  RatFunc det_;
};

// Column a of b is the a-th frame vector: D_a = sum_j b(j, a) d/dx_j.
struct FrameField {
  RatMatrix b;
  int count() const { return b.cols(); }
  VectorField vector(int a) const;
};

// Components of d(omega) in the dx basis: d omega^k = sum_{i<j} w^k_ij dx_i ^ dx_j.
struct VValuedForm2 : AntisymTensor<RatFunc> {
  using AntisymTensor<RatFunc>::AntisymTensor;
};

// sigma(e_a, e_b) = sum_k c^k_ab e_k, i.e. d omega^k = sum_{a<b} c^k_ab omega^a ^ omega^b.
// Under the reindexing to delta, [D_a, D_b] = sum_k delta^k_ab D_k with
// delta^k_ab = -c^k_ab (Lie bracket sign convention).
struct StructureFunction : AntisymTensor<RatFunc> {
  using AntisymTensor<RatFunc>::AntisymTensor;
  AntisymTensor<Rational> evaluate(std::span<const Rational> point) const;
  AntisymTensor<Complex> evaluate(std::span<const Complex> point) const;
};

FrameField dual_frame(const Coframe& omega);
VValuedForm2 exterior_derivative(const Coframe& omega);
// d of a V-valued 2-form: components over i < j < l, k-major.
std::vector<RatFunc> exterior_derivative(const VValuedForm2& w);
StructureFunction structure_function(const Coframe& omega);
StructureFunction structure_function(const Coframe& omega, const FrameField& frame);
// sum_{a<b} c^k_ab omega^a ^ omega^b expressed in the dx basis.
VValuedForm2 reconstruct_exterior_derivative(const StructureFunction& sigma, const Coframe& omega);

// Pairwise brackets of the dual frame against sum_k delta^k_ab D_k.
Report frame_bracket_check(const Coframe& omega, const SampleConfig& cfg);

// df = (D_omega f) # omega, componentwise in the dx basis.
CheckResult check_differential_identity(const Coframe& omega, const RatFunc& f, const SampleConfig& cfg);

// --------------------------------------------------------- tangent bundle

// Coordinates (x_1..x_n, y_1..y_n) on T(M); a tangent vector at x is
// sum_j y_j d/dx_j and pi(x, y) = x.
struct TangentChart {
  Chart base;
  Chart total;
  int n() const { return base.n; }
  int x(int i) const { return i; }
  int y(int i) const { return base.n + i; }
};

TangentChart tangent_chart(const Chart& base);

// theta = pi^* omega and lambda = d mu with mu = A(x) y. Rows of theta and
// lambda are 1-forms on the tangent chart (2n columns: dx then dy).
struct InducedCoframe {
  TangentChart chart;
  RatMatrix theta;
  RatMatrix lambda;
  std::vector<RatFunc> mu;

  // The 2n x 2n coframe (theta; lambda).
  Coframe as_coframe() const;
};

struct TangentFrames {
  FrameField d_theta;
  FrameField d_lambda;
};

InducedCoframe induced_coframe(const Coframe& omega);
TangentFrames tangent_dual_frame(const InducedCoframe& big_omega);
// gamma = sum_a mu^a (D_theta)_a.
VectorField geodesic_flow(const InducedCoframe& big_omega, const TangentFrames& frames);
VectorField geodesic_flow(const Coframe& omega);

// Lift of a chart function to the tangent chart.
RatFunc pullback(const RatFunc& f, const TangentChart& chart);

// The six dual relations, d pi(D_theta) = D_omega, and the bracket
// relations of the tangent frames.
Report verify_dual_relations(const Coframe& omega, const SampleConfig& cfg);
// [D_lambda, gamma] = D_theta and d pi(gamma_v) = v.
Report verify_geodesic_flow(const Coframe& omega, const SampleConfig& cfg);
// sigma^Omega vanishes off the (V1 ^ V1 -> V1) block, which equals pi^* sigma^omega.
Report verify_induced_structure(const Coframe& omega, const SampleConfig& cfg);

}  // namespace ccc
