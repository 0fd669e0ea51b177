#include "fdetect/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fdetect/errors.hpp"

namespace fdetect {

namespace {

constexpr double kTieRelTol = 1e-13;
constexpr double kBruteTieTol = 1e-12;

void require_subset(std::span<const std::size_t> s, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (auto i : s) {
    if (i >= n) throw ValidationError("index " + std::to_string(i) + " out of range for frame of size " + std::to_string(n));
    if (seen[i]) throw ValidationError("duplicate index " + std::to_string(i));
    seen[i] = true;
  }
}

/// Smallest and largest eigenvalue of sum_{i in s} u_i u_i^*.
std::pair<double, double> extreme_eigenvalues(const FrameSystem& frame, std::span<const std::size_t> s) {
  const auto m = static_cast<Eigen::Index>(frame.m());
  if (s.empty()) return {0.0, 0.0};
  Matrix cols(m, static_cast<Eigen::Index>(s.size()));
  for (std::size_t c = 0; c < s.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = frame.vectors().col(static_cast<Eigen::Index>(s[c]));
  const Matrix a = cols * cols.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on partial frame sum");
  return {solver.eigenvalues()(0), solver.eigenvalues()(m - 1)};
}

double objective_value(const FrameSystem& frame, std::span<const std::size_t> s, Objective objective) {
  const auto [lo, hi] = extreme_eigenvalues(frame, s);
  if (objective == Objective::OneSided) return hi;
  const double n = static_cast<double>(frame.n());
  const double k = static_cast<double>(s.size());
  return std::max(hi - k / n, (1.0 - lo) - (n - k) / n);
}

double top_eigenvalue(const FrameSystem& frame, std::span<const std::size_t> s) {
  return extreme_eigenvalues(frame, s).second;
}

} // namespace

FrameSystem::FrameSystem(Matrix vectors) : u_(std::move(vectors)) {
  if (u_.rows() == 0 || u_.cols() == 0) throw ValidationError("frame needs m >= 1 and n >= 1");
  epsilon_ = static_cast<double>(u_.rows()) / static_cast<double>(u_.cols());
  for (Eigen::Index i = 0; i < u_.cols(); ++i) {
    const double dev = std::abs(u_.col(i).squaredNorm() - epsilon_);
    if (dev > kNormTol) {
      std::ostringstream os;
      os << "frame vector " << i << " has squared norm off m/n by " << dev;
      throw ValidationError(os.str());
    }
  }
  const Matrix sum = u_ * u_.adjoint();
  const double tight = (sum - Matrix::Identity(u_.rows(), u_.rows())).cwiseAbs().maxCoeff();
  if (tight > kTightTol) {
    std::ostringstream os;
    os << "frame is not tight: max |sum u u^* - I| = " << tight;
    throw ValidationError(os.str());
  }
}

HermitianOperator FrameSystem::partial_sum(std::span<const std::size_t> s) const {
  require_subset(s, n());
  Matrix cols(u_.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t c = 0; c < s.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = u_.col(static_cast<Eigen::Index>(s[c]));
  return gram(cols);
}

FrameSystem build_frame(const FourierSubspace& f) {
  if (f.dim() == 0) throw ValidationError("Fourier subspace is zero-dimensional; the frame is vacuous");
  if (f.dim() == f.ambient_dim()) {
    throw ValidationError(
        "Fourier subspace is the whole space (eps = 1): Q = I, so ||PQ|| = 1 for every non-empty S");
  }
  return FrameSystem(f.rows().conjugate());
}

double barrier_shift(double epsilon, std::size_t n, std::size_t j) {
  const double s = std::sqrt(epsilon);
  return s + static_cast<double>(j) / ((1.0 - s) * static_cast<double>(n));
}

double barrier_condition(const HermitianOperator& a, double shift, double delta, const Vector& v, double phi_gap) {
  if (static_cast<std::size_t>(v.size()) != a.dim()) throw ValidationError("barrier_condition: dimension mismatch");
  if (!(delta > 0.0)) throw ValidationError("barrier_condition: delta must be positive");
  if (!(phi_gap > 0.0)) throw ValidationError("barrier_condition: potential gap must be positive");
  const auto spec = eigen(a, true);
  if (!(shift > spec.max())) throw ValidationError("barrier_condition: needs ||A|| < a");
  const Vector w = spec.vectors->adjoint() * v;
  const double top = shift + delta;
  double first = 0.0;
  double second = 0.0;
  for (Eigen::Index l = 0; l < w.size(); ++l) {
    const double r = 1.0 / (top - spec.values(l));
    const double mass = std::norm(w(l));
    first += mass * r;
    second += mass * r * r;
  }
  return second / phi_gap + first;
}

SelectionResult select_onesided(const FrameSystem& frame, std::size_t k) {
  const std::size_t n = frame.n();
  const std::size_t m = frame.m();
  if (k > n) throw ValidationError("select_onesided: k exceeds n");
  const double eps = frame.epsilon();
  if (!(eps < 1.0)) throw ValidationError("select_onesided: needs eps < 1");
  const double delta = 1.0 / ((1.0 - std::sqrt(eps)) * static_cast<double>(n));

  SelectionResult res;
  res.k = k;
  res.n = n;
  res.m = m;
  res.epsilon = eps;
  res.bound_one_sided = barrier_shift(eps, n, k);
  res.complement_reference = static_cast<double>(n - k) / static_cast<double>(n);
  res.potential_monotone = true;
  res.strictly_dominated = true;

  std::vector<bool> used(n, false);
  HermitianOperator a = HermitianOperator::zero(m);
  Spectrum spec = eigen(a, true);
  {
    const double a0 = barrier_shift(eps, n, 0);
    res.potential_trace.push_back({a0, upper_potential(spec, a0)});
    res.domination_margins.push_back(a0 - spec.max());
  }

  for (std::size_t j = 0; j < k; ++j) {
    const double shift = barrier_shift(eps, n, j);
    const double next = barrier_shift(eps, n, j + 1);

    std::size_t choice = n;
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt == 1) {
        // Rebuild A_j from the chosen vectors to shed accumulated rounding.
        ++res.refactorizations;
        a = frame.partial_sum(res.order);
        spec = eigen(a, true);
      }
      const RealVector& lambda = spec.values;
      // Phi^{a}(A) - Phi^{a+d}(A) = d * sum 1/((a - l)(a + d - l)), summed without cancellation.
      double gap = 0.0;
      for (Eigen::Index l = 0; l < lambda.size(); ++l) gap += 1.0 / ((shift - lambda(l)) * (next - lambda(l)));
      gap *= delta;

      const Matrix w = spec.vectors->adjoint() * frame.vectors();
      std::vector<double> values(n, std::numeric_limits<double>::infinity());
      best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        double first = 0.0;
        double second = 0.0;
        for (Eigen::Index l = 0; l < lambda.size(); ++l) {
          const double r = 1.0 / (next - lambda(l));
          const double mass = std::norm(w(l, static_cast<Eigen::Index>(i)));
          first += mass * r;
          second += mass * r * r;
        }
        values[i] = second / gap + first;
        best = std::min(best, values[i]);
      }
      const double cutoff = best + kTieRelTol * std::max(1.0, std::abs(best));
      for (std::size_t i = 0; i < n; ++i) {
        if (!used[i] && values[i] <= cutoff) {
          choice = i;
          break;
        }
      }
      if (best <= 1.0 + kFeasibilityTol) break;
      if (attempt == 1) throw NoFeasibleCandidate(j, best, shift - spec.max());
    }

    used[choice] = true;
    res.order.push_back(choice);
    res.feasibility_values.push_back(best);
    a = rank_one_update(a, frame.vector(choice));
    spec = eigen(a, true);

    const double margin = next - spec.max();
    res.domination_margins.push_back(margin);
    if (!(margin > 0.0)) {
      res.strictly_dominated = false;
      std::ostringstream os;
      os.precision(17);
      os << "barrier breached at step " << j + 1 << ": ||A|| = " << spec.max() << " >= a = " << next;
      throw NumericalError(os.str());
    }
    const double phi = upper_potential(spec, next);
    if (phi > res.potential_trace.back().potential) res.potential_monotone = false;
    res.potential_trace.push_back({next, phi});
  }

  res.selected = res.order;
  std::sort(res.selected.begin(), res.selected.end());
  const auto eval = evaluate_twosided(frame, res.selected);
  res.achieved_one_sided = eval.qpq_norm;
  res.achieved_complement = eval.complement_norm;
  if (!(res.achieved_one_sided < res.bound_one_sided)) {
    throw NumericalError("selection finished above the barrier bound");
  }
  return res;
}

TwoSidedEvaluation evaluate_twosided(const FrameSystem& frame, std::span<const std::size_t> s) {
  const auto a = frame.partial_sum(s);
  const auto c = HermitianOperator::identity(frame.m()) - a;
  TwoSidedEvaluation out;
  out.k = s.size();
  out.n = frame.n();
  out.qpq_norm = operator_norm(a);
  out.complement_norm = operator_norm(c);
  const double kn = static_cast<double>(out.k) / static_cast<double>(out.n);
  out.excess = out.qpq_norm - kn;
  out.complement_excess = out.complement_norm - (1.0 - kn);
  const auto d = static_cast<Eigen::Index>(frame.m());
  out.identity_residual = (a.matrix() + c.matrix() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return out;
}

const char* to_string(Objective objective) {
  return objective == Objective::OneSided ? "one-sided" : "two-sided-max-excess";
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

BruteForceResult brute_force_best(const FrameSystem& frame, std::size_t k, Objective objective,
                                  std::uint64_t enumeration_cap) {
  const std::size_t n = frame.n();
  if (k > n) throw ValidationError("brute_force_best: k exceeds n");
  const auto count = binomial(n, k);
  if (count > enumeration_cap) {
    throw ValidationError("brute_force_best: C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                          std::to_string(count) + " exceeds enumeration cap " + std::to_string(enumeration_cap));
  }
  BruteForceResult out;
  IndexSet cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  double min_value = std::numeric_limits<double>::infinity();
  double kept_value = std::numeric_limits<double>::infinity();
  while (true) {
    const double v = objective_value(frame, cur, objective);
    ++out.subsets;
    min_value = std::min(min_value, v);
    if (v < kept_value - kBruteTieTol) {
      kept_value = v;
      out.selected = cur;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t t = i; t < k; ++t) cur[t] = cur[t - 1] + 1;
  }
  out.value = min_value;
  return out;
}

IndexSet adjust_cardinality(IndexSet s, std::size_t k, const FrameSystem& frame) {
  const std::size_t n = frame.n();
  if (k > n) throw ValidationError("adjust_cardinality: k exceeds n");
  require_subset(s, n);
  std::sort(s.begin(), s.end());
  while (s.size() > k) {
    // Keep the norm as high as possible: the removal that decreases it least.
    std::vector<double> after(s.size());
    for (std::size_t p = 0; p < s.size(); ++p) {
      IndexSet trial = s;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(p));
      after[p] = top_eigenvalue(frame, trial);
    }
    const double best = *std::max_element(after.begin(), after.end());
    const double cutoff = best - kTieRelTol * std::max(1.0, std::abs(best));
    const auto p = static_cast<std::size_t>(
        std::find_if(after.begin(), after.end(), [&](double v) { return v >= cutoff; }) - after.begin());
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(p));
  }
  while (s.size() < k) {
    std::vector<bool> in(n, false);
    for (auto i : s) in[i] = true;
    std::vector<double> after(n, std::numeric_limits<double>::infinity());
    for (std::size_t g = 0; g < n; ++g) {
      if (in[g]) continue;
      IndexSet trial = s;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), g), g);
      after[g] = top_eigenvalue(frame, trial);
    }
    const double best = *std::min_element(after.begin(), after.end());
    const double cutoff = best + kTieRelTol * std::max(1.0, std::abs(best));
    std::size_t g = 0;
    while (in[g] || after[g] > cutoff) ++g;
    s.insert(std::upper_bound(s.begin(), s.end(), g), g);
  }
  return s;
}

TwoSidedSelection select_twosided(const FrameSystem& frame, std::size_t k, std::uint64_t enumeration_cap) {
  TwoSidedSelection out;
  if (binomial(frame.n(), k) <= enumeration_cap) {
    out.exhaustive = true;
    out.selected = brute_force_best(frame, k, Objective::TwoSidedMaxExcess, enumeration_cap).selected;
  } else {
    out.selected = select_onesided(frame, k).selected;
  }
  out.evaluation = evaluate_twosided(frame, out.selected);
  return out;
}

} // namespace fdetect
