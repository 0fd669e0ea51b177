#include "fdetect/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fdetect/errors.hpp"
#include "fdetect/rng.hpp"

namespace fdetect {

namespace {

struct McTrial {
  std::uint64_t subset_seed = 0;
  double overlap = 0.0;
  bool intersects = false;
};

} // namespace

Report mc_intersection(const McIntersectionConfig& config) {
  if (config.n < 2) throw ValidationError("mc_intersection: n must be >= 2");
  if (config.trials < 1) throw ValidationError("mc_intersection: trial count must be >= 1");
  const Group group({config.n * config.n, config.big_n}, config.order_cap);
  const auto basis = share(fourier_basis(group));
  const std::size_t order = group.order();
  if (order % static_cast<std::size_t>(config.n) != 0) throw ValidationError("mc_intersection: |G'|/n is not an integer");
  const std::size_t k = config.dimension.value_or(order / static_cast<std::size_t>(config.n));
  if (k > order) throw ValidationError("mc_intersection: dimension exceeds |G'|");

  std::vector<std::size_t> chars;
  for (int b = 0; b < config.n; ++b) {
    for (int c = 0; c < config.big_n; ++c) chars.push_back(group.to_index({config.n * b, c}));
  }
  const FourierSubspace f(basis, chars);

  std::vector<McTrial> trials(config.trials);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < trials.size(); t += stride) {
      auto& trial = trials[t];
      trial.subset_seed = derive_seed(config.seed, t);
      const auto e = random_standard(k, trial.subset_seed, basis);
      trial.overlap = overlap_norm(e, f);
      trial.intersects = trial.overlap > 1.0 - config.intersection_tol;
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, trials.size());
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }

  Report report;
  report.command = "mc-intersect";
  report.inputs["group"] = group.spec();
  report.inputs["chars"] = chars;
  report.inputs["set"] = "random:" + std::to_string(k) + ":derive_seed(seed, trial)";
  report.inputs["k"] = k;
  report.inputs["seed"] = config.seed;
  report.inputs["tolerances"] = {{"intersection", config.intersection_tol}};
  report.inputs["n"] = config.n;
  report.inputs["N"] = config.big_n;
  report.inputs["trials"] = config.trials;

  report.columns = {"trial", "subset_seed", "k", "overlap_norm", "intersects"};
  std::size_t hits = 0;
  double min_overlap = 1.0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    report.add_row({t, trials[t].subset_seed, k, trials[t].overlap, trials[t].intersects});
    hits += trials[t].intersects ? 1 : 0;
    min_overlap = std::min(min_overlap, trials[t].overlap);
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials.size());
  report.results["norms"] = {{"min_overlap_norm", min_overlap}};
  report.summary["trials"] = trials.size();
  report.summary["intersections"] = hits;
  report.summary["frequency"] = p;
  report.summary["sigma"] = std::sqrt(p * (1.0 - p) / static_cast<double>(trials.size()));
  report.summary["intersection_rule"] = "overlap_norm > 1 - tol";
  return report;
}

IndexSet structured_chars(std::size_t n, std::size_t m) {
  if (m == 0 || m > n) throw ValidationError("structured_chars: need 1 <= m <= n");
  IndexSet out(m);
  const std::size_t step = n % m == 0 ? n / m : 1;
  for (std::size_t i = 0; i < m; ++i) out[i] = i * step;
  return out;
}

Report sweep_eps_constant(const SweepConfig& config) {
  if (config.instances.empty()) throw ValidationError("sweep_eps_constant: no instances");
  if (!(config.k_fraction >= 0.0 && config.k_fraction <= 1.0)) throw ValidationError("k fraction must lie in [0, 1]");
  Report report;
  report.command = "sweep-eps";
  report.inputs["k_fraction"] = config.k_fraction;
  report.inputs["seed"] = config.seed;
  report.inputs["tolerances"] = {{"feasibility", kFeasibilityTol}};
  Json groups = Json::array();
  Json chars = Json::array();
  report.columns = {"instance", "group", "chars", "m", "n", "epsilon", "k", "achieved", "bound",
                    "excess", "bound_excess", "ratio", "complement_norm"};
  double max_ratio = 0.0;
  double max_excess = -1.0;
  bool all_below = true;
  Json trace = Json::array();
  for (std::size_t i = 0; i < config.instances.size(); ++i) {
    const auto& inst = config.instances[i];
    const Group group(inst.factors, config.order_cap);
    const auto basis = share(fourier_basis(group));
    const FourierSubspace f(basis, inst.chars);
    const auto frame = build_frame(f);
    const std::size_t n = frame.n();
    const auto k = static_cast<std::size_t>(std::floor(config.k_fraction * static_cast<double>(n)));
    const auto sel = select_onesided(frame, k);
    const double kn = static_cast<double>(k) / static_cast<double>(n);
    const double excess = sel.achieved_one_sided - kn;
    const double ratio = excess / std::sqrt(frame.epsilon());
    groups.push_back(group.spec());
    chars.push_back(f.indices());
    report.add_row({i, group.spec(), Json(f.indices()).dump(), frame.m(), n, frame.epsilon(), k,
                    sel.achieved_one_sided, sel.bound_one_sided, excess, sel.bound_one_sided - kn, ratio,
                    sel.achieved_complement});
    max_ratio = std::max(max_ratio, ratio);
    max_excess = std::max(max_excess, excess);
    all_below = all_below && sel.achieved_one_sided < sel.bound_one_sided;
    Json pts = Json::array();
    for (const auto& p : sel.potential_trace) pts.push_back({p.shift, p.potential});
    trace.push_back(std::move(pts));
  }
  report.inputs["group"] = groups;
  report.inputs["chars"] = chars;
  report.results["potential_trace"] = std::move(trace);
  report.summary["instances"] = config.instances.size();
  report.summary["max_excess"] = max_excess;
  report.summary["max_ratio"] = max_ratio;
  report.summary["all_below_bound"] = all_below;
  return report;
}

Report half_split(const HalfSplitConfig& config) {
  if (!config.basis) throw ValidationError("half_split: missing basis");
  const FourierSubspace f(config.basis, config.chars);
  const auto frame = build_frame(f);
  const std::size_t n = frame.n();
  const std::size_t k = n / 2;
  IndexSet s;
  if (config.use_oracle) {
    s = brute_force_best(frame, k, Objective::TwoSidedMaxExcess, config.enumeration_cap).selected;
  } else {
    s = select_onesided(frame, k).selected;
  }
  const auto eval = evaluate_twosided(frame, s);
  const double target = 1.0 / std::sqrt(2.0);
  const double pq = std::sqrt(eval.qpq_norm);
  const double cq = std::sqrt(eval.complement_norm);
  const double dev = pq - target;
  const double cdev = cq - target;
  const double root_eps = std::sqrt(frame.epsilon());

  Report report;
  report.command = "half-split";
  report.inputs["group"] = config.basis->group() ? Json(config.basis->group()->spec()) : Json("loaded:" + std::to_string(n));
  report.inputs["chars"] = f.indices();
  report.inputs["k"] = k;
  report.inputs["seed"] = config.seed;
  report.inputs["tolerances"] = Json::object();
  report.inputs["method"] = config.use_oracle ? "exhaustive" : "barrier-greedy";
  report.results["norms"] = {{"pq", pq}, {"complement_pq", cq}, {"qpq", eval.qpq_norm},
                             {"complement_qpq", eval.complement_norm}};
  report.results["selected"] = s;
  report.columns = {"n", "m", "k", "epsilon", "pq", "complement_pq", "deviation", "complement_deviation",
                    "rounding_term", "measured_c"};
  const double rounding = 0.5 - static_cast<double>(k) / static_cast<double>(n);
  const double c = std::max(std::abs(dev), std::abs(cdev)) / root_eps;
  report.add_row({n, frame.m(), k, frame.epsilon(), pq, cq, dev, cdev, rounding, c});
  report.summary["deviation"] = dev;
  report.summary["complement_deviation"] = cdev;
  report.summary["rounding_term"] = rounding;
  report.summary["measured_c"] = c;
  return report;
}

} // namespace fdetect
