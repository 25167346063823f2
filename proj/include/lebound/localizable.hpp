#pragma once

// Localizable entanglement: fixed-setting averages, Pauli enumeration,
// continuous-angle search, and the full bound hierarchy.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense.hpp"
#include "entanglement.hpp"
#include "gd.hpp"
#include "graph.hpp"
#include "pauli.hpp"

namespace lebound {

enum class MeasureKind { LogNegativity, Negativity };

/// Bipartite entanglement of a region state. part_a holds positions inside
/// the region (default: first member against the rest).
struct EntanglementMeasure {
  MeasureKind kind = MeasureKind::LogNegativity;
  std::vector<int> part_a{0};

  double operator()(const DensityMatrix& r) const {
    const double neg = negativity(r, Region(part_a, r.n));
    return kind == MeasureKind::Negativity ? neg : std::log2(neg + 1.0);
  }

  /// The witness bound in the same units.
  double from_negativity(double neg) const { return kind == MeasureKind::Negativity ? neg : std::log2(neg + 1.0); }

  void validate(std::size_t region_size) const {
    if (region_size < 2) throw std::invalid_argument("entanglement needs a region of at least two qubits");
    if (part_a.empty() || part_a.size() >= region_size) throw std::invalid_argument("bipartition must be a proper subset");
    for (int p : part_a)
      if (p < 0 || static_cast<std::size_t>(p) >= region_size) throw std::invalid_argument("bipartition position out of range");
  }
};

/// sum_k p_k E(rho_k) over outcomes with p_k > 1e-12.
inline double avg_entanglement_fixed_setting(const DensityMatrix& r, const Region& omega,
                                             const MeasurementSetting& setting, const EntanglementMeasure& measure) {
  measure.validate(omega.size());
  double acc = 0.0;
  for (const auto& o : measure_all_outcomes(r, omega, setting))
    if (o.valid) acc += o.probability * measure(o.state);
  return acc;
}

inline constexpr int kMaxEnumeratedQubits = 12;
inline constexpr int kMaxOptimizedQubits = 6;

inline long long pow3(int m) {
  long long v = 1;
  for (int i = 0; i < m; ++i) v *= 3;
  return v;
}

struct RleResult {
  double value = 0.0;
  long long l = 0;
  std::vector<double> per_setting;  // indexed by l
};

/// Best fixed Pauli setting; ties go to the smallest l.
inline RleResult restricted_le(const DensityMatrix& r, const Region& omega, const EntanglementMeasure& measure) {
  const int m = r.n - static_cast<int>(omega.size());
  if (m > kMaxEnumeratedQubits)
    throw std::length_error("pauli enumeration over " + std::to_string(m) + " measured qubits exceeds cap of " +
                            std::to_string(kMaxEnumeratedQubits));
  RleResult out;
  out.per_setting.resize(static_cast<std::size_t>(pow3(m)));
  out.value = -1.0;
  for (long long l = 0; l < pow3(m); ++l) {
    const double v = avg_entanglement_fixed_setting(r, omega, MeasurementSetting::pauli(m, l), measure);
    out.per_setting[l] = v;
    if (v > out.value + 1e-12) {
      out.value = v;
      out.l = l;
    }
  }
  return out;
}

struct OptimizerConfig {
  int restarts = 20;        // random pi/4-grid starts
  int pauli_seeds = 3;      // best Pauli settings used as extra starts
  double tolerance = 1e-6;  // simplex size at convergence
  int max_iterations = 2000;
  unsigned long long seed = 7;
};

struct LeResult {
  double value = 0.0;
  std::vector<double> angles;  // theta_1, phi_1, theta_2, phi_2, ...
  int evaluations = 0;
};

namespace detail {

inline MeasurementSetting setting_from_angles(const double* x, std::size_t m) {
  MeasurementSetting s;
  for (std::size_t t = 0; t < m; ++t) s.bases.push_back(QubitBasis::angles(x[2 * t], x[2 * t + 1]));
  return s;
}

struct GslMinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* p) const { gsl_multimin_fminimizer_free(p); }
};
struct GslVectorDeleter {
  void operator()(gsl_vector* p) const { gsl_vector_free(p); }
};
using GslMinimizer = std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerDeleter>;
using GslVector = std::unique_ptr<gsl_vector, GslVectorDeleter>;

class GslQuietErrors {
 public:
  GslQuietErrors() : old_(gsl_set_error_handler_off()) {}
  ~GslQuietErrors() { gsl_set_error_handler(old_); }
  GslQuietErrors(const GslQuietErrors&) = delete;
  GslQuietErrors& operator=(const GslQuietErrors&) = delete;

 private:
  gsl_error_handler_t* old_;
};

struct AngleObjective {
  const DensityMatrix* rho;
  const Region* omega;
  const EntanglementMeasure* measure;
  std::size_t m;
  int evaluations = 0;

  double value(const double* x) {
    ++evaluations;
    return avg_entanglement_fixed_setting(*rho, *omega, setting_from_angles(x, m), *measure);
  }

  static double negated(const gsl_vector* v, void* self) {
    return -static_cast<AngleObjective*>(self)->value(gsl_vector_const_ptr(v, 0));
  }
};

inline std::vector<double> pauli_angles(long long l, int m) {
  std::vector<double> x;
  for (const auto& b : MeasurementSetting::pauli(m, l).bases) {
    x.push_back(b.theta);
    x.push_back(b.phi);
  }
  return x;
}

}  // namespace detail

/// Best-found average entanglement over product rank-1 projective
/// measurements. Starts from the best Pauli settings and from random points
/// of the pi/4 angle grid, each refined by a Nelder-Mead simplex. The result
/// is never below the best Pauli start.
inline LeResult le_optimize(const DensityMatrix& r, const Region& omega, const EntanglementMeasure& measure,
                            const OptimizerConfig& cfg, const RleResult* rle = nullptr) {
  const int m = r.n - static_cast<int>(omega.size());
  if (m > kMaxOptimizedQubits)
    throw std::length_error("angle optimization over " + std::to_string(m) + " measured qubits exceeds cap of " +
                            std::to_string(kMaxOptimizedQubits));
  if (cfg.restarts < 0 || cfg.pauli_seeds < 1 || !(cfg.tolerance > 0))
    throw std::invalid_argument("optimizer needs at least one start and a positive tolerance");
  measure.validate(omega.size());
  if (m == 0) return {measure(r), {}, 1};

  RleResult local;
  if (!rle) {
    local = restricted_le(r, omega, measure);
    rle = &local;
  }
  std::vector<long long> order(rle->per_setting.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<long long>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](long long a, long long b) { return rle->per_setting[a] > rle->per_setting[b]; });

  std::vector<std::vector<double>> starts;
  for (int s = 0; s < cfg.pauli_seeds && s < static_cast<int>(order.size()); ++s)
    starts.push_back(detail::pauli_angles(order[s], m));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> theta_step(0, 4), phi_step(0, 7);
  for (int s = 0; s < cfg.restarts; ++s) {
    std::vector<double> x;
    for (int t = 0; t < m; ++t) {
      x.push_back(theta_step(rng) * std::numbers::pi / 4);
      x.push_back(phi_step(rng) * std::numbers::pi / 4);
    }
    starts.push_back(std::move(x));
  }

  // every start is scored through the angle parametrization, Pauli seeds included
  LeResult best{-std::numeric_limits<double>::infinity(), {}, 0};
  const detail::GslQuietErrors quiet;
  detail::AngleObjective obj{&r, &omega, &measure, static_cast<std::size_t>(m)};
  const std::size_t dim = 2 * static_cast<std::size_t>(m);
  gsl_multimin_function fn{&detail::AngleObjective::negated, dim, &obj};
  detail::GslMinimizer mz(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  detail::GslVector x0(gsl_vector_alloc(dim)), step(gsl_vector_alloc(dim));
  gsl_vector_set_all(step.get(), std::numbers::pi / 8);
  for (const auto& start : starts) {
    for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x0.get(), i, start[i]);
    gsl_multimin_fminimizer_set(mz.get(), &fn, x0.get(), step.get());
    for (int it = 0; it < cfg.max_iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(mz.get()) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(mz.get()), cfg.tolerance) == GSL_SUCCESS) break;
    }
    const double v = -gsl_multimin_fminimizer_minimum(mz.get());
    if (v > best.value) {
      best.value = v;
      best.angles.assign(gsl_vector_const_ptr(mz->x, 0), gsl_vector_const_ptr(mz->x, 0) + dim);
    }
  }
  best.evaluations = obj.evaluations;
  return best;
}

/// All-Z measurement bound.
inline double mlb_zbasis(const DensityMatrix& r, const Region& omega, const EntanglementMeasure& measure) {
  const int m = r.n - static_cast<int>(omega.size());
  return avg_entanglement_fixed_setting(r, omega, MeasurementSetting::all_z(m), measure);
}

/// All-Z bound of a graph-diagonal state, read off the region marginal.
inline double mlb_zbasis(const GDState& s, const Region& omega, const EntanglementMeasure& measure) {
  measure.validate(omega.size());
  const auto marginal = gd_marginal(s, omega);
  if (omega.size() == 2 && s.graph.has_edge(omega[0], omega[1])) {
    const double neg = negativity_from_eigenvalues(gd_pair_ptranspose_eigenvalues(marginal));
    return measure.from_negativity(neg);
  }
  return measure(gd_region_state(s.graph, omega, marginal));
}

struct BoundsReport {
  std::optional<double> e_full;
  std::vector<double> full_angles;
  double e_pauli = 0.0;
  long long pauli_l = 0;
  std::string pauli_setting;
  double e_l = 0.0;  // original-frame setting equivalent to all-Z in the working frame
  long long l = 0;
  std::string l_setting;
  double e_zero = 0.0;
  double e_reduced = 0.0;
  std::optional<double> e_wlb;  // regions of size 2 or 3
  double omega = 0.0;

  struct Flags {
    bool full_ge_pauli = true;
    bool pauli_ge_l = true;
    bool pauli_ge_zero = true;
    bool zero_ge_reduced = true;
    bool reduced_ge_wlb = true;
    bool all() const { return full_ge_pauli && pauli_ge_l && pauli_ge_zero && zero_ge_reduced && reduced_ge_wlb; }
  } flags;
};

struct HierarchyOptions {
  bool full_le = false;
  OptimizerConfig optimizer;
  double tol = 1e-9;
  double full_tol = 1e-4;
};

/// Evaluates every quantity of the bound hierarchy. When the region is not
/// connected in g, `frame` (from connect_region) supplies the graph in which it
/// is, and the Clifford layer mapping the original state into it.
inline BoundsReport hierarchy_report(const DensityMatrix& r, const Graph& g, const Region& omega,
                                     const std::optional<LcFrame>& frame, const EntanglementMeasure& measure,
                                     const HierarchyOptions& opt = {}) {
  require_region_in(g, omega);
  if (g.size() != r.n) throw std::invalid_argument("graph does not match state size");
  measure.validate(omega.size());
  const Graph& work_graph = frame ? frame->graph : g;
  if (!work_graph.induces_connected(omega.mask()))
    throw std::invalid_argument(frame ? "frame graph does not connect the region"
                                      : "region is not connected; supply a connecting frame");
  const DensityMatrix rp = frame ? apply_clifford_layer(r, frame->layer) : r;
  const int m = r.n - static_cast<int>(omega.size());

  BoundsReport rep;
  const RleResult rle = restricted_le(r, omega, measure);
  rep.e_pauli = rle.value;
  rep.pauli_l = rle.l;
  rep.pauli_setting = MeasurementSetting::pauli(m, rle.l).pauli_label();

  std::vector<MeasureAxis> axes;
  for (int q : omega.complement())
    axes.push_back(frame ? to_axis(frame->layer[q].preimage(Pauli1::Z).pauli) : MeasureAxis::Z);
  const auto translated = MeasurementSetting::from_axes(axes);
  rep.l = translated.pauli_index();
  rep.l_setting = translated.pauli_label();
  rep.e_l = rle.per_setting[rep.l];

  rep.e_zero = mlb_zbasis(rp, omega, measure);
  rep.e_reduced = measure(reduced_region_state(rp, work_graph, omega));
  rep.omega = witness_expectation(rp, local_witness(work_graph, omega));
  if (omega.size() == 2 || omega.size() == 3) rep.e_wlb = measure.from_negativity(wlb_certificate(rep.omega, static_cast<int>(omega.size())).bound);

  if (opt.full_le) {
    const LeResult le = le_optimize(r, omega, measure, opt.optimizer, &rle);
    rep.e_full = le.value;
    rep.full_angles = le.angles;
    rep.flags.full_ge_pauli = le.value >= rep.e_pauli - opt.full_tol;
  }
  rep.flags.pauli_ge_l = rep.e_pauli >= rep.e_l - opt.tol;
  rep.flags.pauli_ge_zero = rep.e_pauli >= rep.e_zero - opt.tol;
  rep.flags.zero_ge_reduced = rep.e_zero >= rep.e_reduced - opt.tol;
  rep.flags.reduced_ge_wlb = !rep.e_wlb || rep.e_reduced >= *rep.e_wlb - opt.tol;
  return rep;
}

}  // namespace lebound
