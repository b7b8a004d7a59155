#pragma once

#include <array>
#include <functional>
#include <vector>

#include "radmax/density.hpp"
#include "radmax/log_measure.hpp"
#include "radmax/parallel.hpp"
#include "radmax/quadrature.hpp"
#include "radmax/weights.hpp"

namespace radmax {

/// Nodes 0 = t_0 < t_1 < ... < t_N with the v-mass of every cell
/// [t_i, t_{i+1}]. Masses are stored as exp(log mass - log_scale) so that
/// v(t) = w0(t) t^(n-1) stays representable for n in the thousands.
struct Grid1D {
  std::vector<double> nodes;
  std::vector<double> mass;
  double log_scale = 0.0;

  /// 0 followed by `count` log-spaced nodes on [lo, hi].
  static std::vector<double> default_nodes(int count = 4096, double lo = 1e-4, double hi = 1e2);
  static Grid1D lebesgue(std::vector<double> nodes);
  static Grid1D weighted(const RadialDensity& density, int n, std::vector<double> nodes,
                         const QuadratureConfig& q = {}, Exec exec = Exec::parallel);
  static Grid1D from_masses(std::vector<double> nodes, std::vector<double> masses);

  std::size_t cells() const { return mass.size(); }
  double total_mass() const;
  void validate() const;
};

/// A step function of |x|: one value per grid cell.
struct RadialFunction {
  std::vector<double> values;

  static RadialFunction sample(const Grid1D& grid, const std::function<double(double)>& f0);
  /// Integral of |F| against the grid masses (in the grid's scaled units).
  double l1(const Grid1D& grid) const;
};

/// Non-centered maximal function with respect to v, exact over intervals with
/// grid endpoints. Value per cell: max over cell ranges [i, j] containing it
/// of (sum |F| m) / (sum m). Zero-mass ranges are never candidates.
RadialFunction noncentered_max(const RadialFunction& F, const Grid1D& grid,
                               Exec exec = Exec::parallel);
/// Same quantity through an O(N^3) scan of every range; reference for tests.
RadialFunction noncentered_max_naive(const RadialFunction& F, const Grid1D& grid);
/// Values at the nodes: a node lies in a range iff one of its two cells does.
std::vector<double> cell_max_at_nodes(const RadialFunction& cell_values);

enum class Side { left, right };

/// One-sided Lebesgue maximal function at every node:
/// right: sup_h (1/h) int_t^{t+h} |F|, left: sup_h (1/h) int_{t-h}^t |F|.
std::vector<double> one_sided_max(const RadialFunction& F, Side side, const Grid1D& grid);

/// Origin-centered maximal function sup_{R >= |x|} mu(B_R)^{-1} int_{B_R} |f| dmu
/// over grid radii, for the measure whose radial marginal is the grid's v.
/// Value per node, and per cell (x in (t_k, t_{k+1}] sees the same radii as
/// the node t_{k+1}).
std::vector<double> hardy_operator_nodes(const RadialFunction& f, const Grid1D& grid);
RadialFunction hardy_operator(const RadialFunction& f, const Grid1D& grid);

/// sup_lambda lambda v({Op > lambda}) / norm, for an operator given by cell
/// values. Exact: the sup is attained at one of the attained values.
double weak_type_ratio(const RadialFunction& op, const Grid1D& grid, double norm);

/// (1 + K1) times the non-centered maximal function of f0: a pointwise upper
/// envelope of M_mu f for radial f.
RadialFunction radial_reduction_bound(const RadialFunction& f0, const Grid1D& grid, double K1,
                                      Exec exec = Exec::parallel);

/// M_mu delta_0 at |x| = x_norm, namely 1 / mu(B(x, |x|)); zero when that
/// ball has infinite measure.
LogMeasure delta_maximal(const RadialDensity& density, int n, double x_norm,
                         const QuadratureConfig& q = {});

struct DeltaBound {
  ConstantEstimate estimate;
  /// M_mu delta_0 is nonincreasing on the mesh; otherwise the bound is only heuristic.
  bool monotone = true;
  std::vector<double> mesh;
  std::vector<double> log_ratio;  ///< log mu(B_s) - log mu(B(s e, s)) per mesh point
};

/// max over the mesh of mu(B_s) / mu(B(s e, s)): a lower bound for the
/// weak-(1,1) constant of M_mu whenever the monotonicity check passes.
DeltaBound delta_lower_bound(const RadialDensity& density, int n, const std::vector<double>& mesh,
                             const QuadratureConfig& q = {}, Exec exec = Exec::parallel);

/// Square lattice of points ((i + 1/2) h, ...) centered at the origin, in
/// dimension 1 or 2. The half-step offset keeps every point off the origin.
struct Lattice {
  int dim = 2;
  double h = 1.0;
  std::vector<std::array<double, 2>> points;

  static Lattice centered(int dim, int per_side, double h);
  double norm(std::size_t i) const;
  std::size_t size() const { return points.size(); }
  /// Riemann-sum masses w0(|p|) h^d.
  std::vector<double> masses(const RadialDensity& density) const;
  std::vector<double> lebesgue_masses() const;
};

/// Centered maximal function of the atomic measure sum m_p delta_p: at each
/// lattice point, the best average over every radius that changes the ball.
std::vector<double> grid_maximal_oracle(const Lattice& lattice, const std::vector<double>& f,
                                        const std::vector<double>& mass,
                                        Exec exec = Exec::parallel);
/// Origin-centered analogue: sup over balls B_R with R >= |x|.
std::vector<double> grid_hardy_oracle(const Lattice& lattice, const std::vector<double>& f,
                                      const std::vector<double>& mass);

}  // namespace radmax
