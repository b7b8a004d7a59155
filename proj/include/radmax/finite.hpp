#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radmax/parallel.hpp"
#include "radmax/report.hpp"

namespace radmax {

/// Finite metric space with strictly positive point weights. Balls are open:
/// B(x, r) = {y : d(x, y) < r}.
class FiniteMetricMeasureSpace {
 public:
  /// `distances` is a full symmetric P x P matrix. Validates symmetry, zero
  /// diagonal, positive off-diagonal entries, positive weights, and (for
  /// P <= 300) every triangle inequality.
  FiniteMetricMeasureSpace(std::vector<std::vector<double>> distances, std::vector<double> weights,
                           std::vector<std::string> labels = {});

  static FiniteMetricMeasureSpace from_points(const std::vector<std::vector<double>>& coords,
                                              std::vector<double> weights);
  /// Points {0, ..., side-1}^dim with Euclidean distance and unit weights.
  static FiniteMetricMeasureSpace lattice(int dim, int side);

  static FiniteMetricMeasureSpace from_json(const Json& j);
  static FiniteMetricMeasureSpace load(const std::filesystem::path& path);
  /// {schema_version, points, distances (lower triangle with diagonal), weights}.
  Json to_json() const;

  std::size_t size() const { return weights_.size(); }
  double d(std::size_t x, std::size_t y) const { return dist_[x * size() + y]; }
  double weight(std::size_t x) const { return weights_[x]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double ball_measure(std::size_t x, double r) const;
  std::vector<std::size_t> ball(std::size_t x, double r) const;
  double measure(const std::vector<bool>& set) const;
  /// Sorted distinct off-diagonal distances.
  std::vector<double> distinct_distances() const;

 private:
  void validate() const;

  std::vector<double> dist_;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  // Per center: distances sorted ascending with cumulative weights, for
  // O(log P) ball measures.
  std::vector<std::vector<double>> sorted_d_;
  std::vector<std::vector<double>> cum_w_;
};

/// Sorted radius set with the block parameter n: block k is [n^k, n^(k+1)).
class TimeSet {
 public:
  TimeSet(std::vector<double> radii, double n, std::optional<double> lacunarity = std::nullopt);

  const std::vector<double>& radii() const { return radii_; }
  double n() const { return n_; }
  std::optional<double> lacunarity() const { return lacunarity_; }
  int block(double r) const;
  /// Radii in block k.
  std::vector<double> block_radii(int k) const;
  std::vector<int> blocks() const;

 private:
  std::vector<double> radii_;
  double n_;
  std::optional<double> lacunarity_;
};

/// M_T f(x) = max_{r in T} mu(B(x, r))^{-1} sum_{B(x, r)} |f| mu.
std::vector<double> brute_max(const FiniteMetricMeasureSpace& space, const std::vector<double>& radii,
                              const std::vector<double>& f, Exec exec = Exec::parallel);

struct DiscreteConstants {
  double K0 = 1.0;  ///< mu(B(x,(1+1/n)r)) / mu(B(x,r))
  double K1 = 1.0;  ///< mu(B(y,r)) / mu(B(x,r)), the two balls intersecting
  double K = 1.0;   ///< mu(B(y,(1+1/n)r)) / mu(B(x,r)), y in B(x,r)
};

/// Exact maxima over all centers and every radius at which some ball (or its
/// dilate) changes.
DiscreteConstants discrete_constants(const FiniteMetricMeasureSpace& space, double n);

/// K1 restricted to radius r.
double weak_doubling_at(const FiniteMetricMeasureSpace& space, double r);

struct SingleRadiusNorm {
  double norm = 1.0;  ///< ||M_r||_{L^1 -> L^1}
  std::size_t witness = 0;
  double K1 = 1.0;    ///< weak_doubling_at(space, r)
};

/// Exact L^1 operator norm of f -> M_r f: the largest adjoint column sum.
SingleRadiusNorm single_radius_l1(const FiniteMetricMeasureSpace& space, double r);

struct SelectedBall {
  std::size_t center = 0;
  double R = 0.0;         ///< R_B, a radius of T
  double R_tilde = 0.0;   ///< R_B~ in [R / (1 + 1/n), R)
  int block = 0;
  double mass = 0.0;      ///< mu(B)
  std::vector<bool> ball, tilde, core;  ///< B, B~, B^0 = B(z, R - R~)
  std::vector<bool> D;    ///< disjointified core
  double D_mass = 0.0;
  bool selected = false;
  bool absorbed = false;  ///< mu(B)^{-1} int_{B~} |f| chi_{A_j} <= lambda / 2
  int selection_index = -1;  ///< j with the ball in the j-th selected block
};

struct SelectionState {
  double lambda = 0.0;
  double n = 0.0;
  double K0 = 1.0;
  /// Balls with average in (lambda, 2 lambda], before the parity split.
  std::size_t window_balls = 0;
  /// Parity kept (1 odd, 0 even) and the measures of both halves' cores.
  int parity = 1;
  double odd_core_mass = 0.0, even_core_mass = 0.0;
  /// Kept balls in the fixed enumeration order.
  std::vector<SelectedBall> balls;
  /// Selected blocks k_1 > k_2 > ... and the sets A_j.
  std::vector<int> selected_blocks;
  std::vector<std::vector<bool>> A;

  bool empty() const { return balls.empty(); }
};

/// The covering/selection pipeline: window balls, B~ and B^0, parity split,
/// disjointification, greedy block selection, and the disjoint sets A_j.
SelectionState run_selection(const FiniteMetricMeasureSpace& space, const TimeSet& T,
                             const std::vector<double>& f, double lambda, double K0);

struct LocalizationCertificate {
  bool disjoint = true;          ///< (a)
  double claim_lhs = 0.0;        ///< (b) mu(union D_B)
  double claim_rhs = 0.0;        ///<     (1 + K0) sum over selected of mu(D_B)
  bool claim = true;
  bool level_inclusion = true;   ///< (c)
  double level_threshold = 0.0;  ///<     lambda / (2 K0)
  double headline_lhs = 0.0;     ///< (d) mu(F_lambda)
  double headline_rhs = 0.0;
  bool headline = true;
  bool containment = true;       ///< z in B^0 implies B~ in B(z, R) in B*
  double C1 = 0.0, C2 = 0.0;
  std::vector<std::string> violations;

  bool passed() const { return disjoint && claim && level_inclusion && headline && containment; }
};

/// Checks the selection's guarantees with exact discrete arithmetic. C1 and
/// C2 are assembled from the proof chain: 2 (finite subfamily) x 2 (parity) x
/// (1 + K0) x 2 (absorption) x 2 (level sets), and lambda / (2 K0).
LocalizationCertificate certify_localization(const SelectionState& state,
                                             const FiniteMetricMeasureSpace& space,
                                             const TimeSet& T, const std::vector<double>& f);

struct WeakNormProbe {
  double point_mass_bound = 0.0;  ///< max over delta_x, exact
  std::size_t witness = 0;
  double random_bound = 0.0;      ///< best random f found
  double value() const { return std::max(point_mass_bound, random_bound); }
};

/// sup_lambda lambda mu({M f > lambda}) / ||f||_1 for a maximal function
/// given pointwise: attained at one of its values.
double weak_ratio(const FiniteMetricMeasureSpace& space, const std::vector<double>& Mf, double f_norm);

/// Certified lower bound for ||M_T||_{L^1 -> L^{1,oo}}.
WeakNormProbe weak_norm_probe(const FiniteMetricMeasureSpace& space, const std::vector<double>& radii,
                              int random_trials = 0, std::uint64_t seed = 1);

struct RandomSpaceSpec {
  int max_points = 60;
  int max_radii = 8;
};

struct LocalizationInstance {
  FiniteMetricMeasureSpace space;
  TimeSet T;
  std::vector<double> f;
  double lambda;
};

/// Seeded random instance: Euclidean point clouds in dimension 1 to 3 or
/// cluster-structured spaces, with random weights.
FiniteMetricMeasureSpace random_space(std::uint64_t seed, const RandomSpaceSpec& spec = {});

/// Random space plus radii, a nonnegative f and a level lambda placed below
/// one of the positive values of M_T f.
LocalizationInstance random_localization_instance(std::uint64_t seed, const RandomSpaceSpec& spec = {});

}  // namespace radmax
