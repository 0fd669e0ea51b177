#include "fdetect/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "fdetect/errors.hpp"
#include "fdetect/experiments.hpp"
#include "fdetect/rng.hpp"
#include "fdetect/sparsifier.hpp"

namespace fdetect::cli {

namespace {

struct Common {
  std::string format = "json";
  std::string output;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t enum_cap = kDefaultEnumerationCap;
  std::size_t order_cap = kDefaultOrderCap;
  double intersect_tol = kIntersectionTol;
};

struct Ambient {
  std::string group;
  std::string basis_file;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output,-o", c.output, "Write the report to this file instead of stdout");
  sub->add_option("--threads", c.threads, "Worker thread cap")->check(CLI::PositiveNumber);
  sub->add_option("--enum-cap", c.enum_cap, "Maximum subsets enumerated by exhaustive oracles")
      ->envname("FDETECT_ENUM_CAP");
  sub->add_option("--order-cap", c.order_cap, "Maximum group order");
  sub->add_option("--intersect-tol", c.intersect_tol, "Declare intersection when ||PQ|| > 1 - tol");
}

void add_ambient(CLI::App* sub, Ambient& a) {
  auto* g = sub->add_option("--group", a.group, "Group spec, e.g. 16 or 4x9");
  auto* f = sub->add_option("--basis-file", a.basis_file, "Flat basis text file");
  g->excludes(f);
}

BasisPtr resolve_basis(const Ambient& a, const Common& c) {
  if (!a.basis_file.empty()) return share(load_flat_basis(a.basis_file));
  if (a.group.empty()) throw ValidationError("one of --group or --basis-file is required");
  return share(fourier_basis(parse_group(a.group, c.order_cap)));
}

Json group_label(const BasisPtr& basis) {
  if (basis->group()) return basis->group()->spec();
  return "loaded:" + std::to_string(basis->dim());
}

Json potential_json(const std::vector<PotentialPoint>& trace) {
  Json out = Json::array();
  for (const auto& p : trace) out.push_back({p.shift, p.potential});
  return out;
}

// ---------------------------------------------------------------- commands

Report cmd_basis_check(const Ambient& amb, const Common& c) {
  const auto basis = resolve_basis(amb, c);
  Report r;
  r.command = "basis-check";
  r.inputs["group"] = group_label(basis);
  r.inputs["tolerances"] = {{"unitarity", FlatBasis::kUnitarityTol}, {"flatness", FlatBasis::kFlatnessTol}};
  const double unit = basis->unitarity();
  const double flat = basis->flatness();
  r.results["norms"] = {{"unitarity_deviation", unit}, {"flatness_deviation", flat}};
  r.results["source"] = to_string(basis->source());
  r.results["dim"] = basis->dim();
  r.columns = {"dim", "source", "unitarity_deviation", "flatness_deviation", "passes"};
  const bool passes = unit <= FlatBasis::kUnitarityTol && flat <= FlatBasis::kFlatnessTol;
  r.add_row({basis->dim(), to_string(basis->source()), unit, flat, passes});
  r.summary["passes"] = passes;
  return r;
}

struct UncertaintyArgs {
  std::string set;
  std::string chars;
  bool exhaustive = false;
  std::optional<std::size_t> max_sum;
  std::size_t samples = 0;
  bool multiplicative = false;
  std::uint64_t seed = 0;
};

Report cmd_uncertainty(const Ambient& amb, const UncertaintyArgs& u, const Common& c) {
  const auto basis = resolve_basis(amb, c);
  const std::size_t n = basis->dim();
  Report r;
  r.command = "uncertainty";
  r.inputs["group"] = group_label(basis);
  r.inputs["seed"] = u.seed;
  r.inputs["tolerances"] = {{"intersection", c.intersect_tol}};
  r.columns = {"pair", "set", "chars", "multiplicative_applies", "additive_applies", "overlap_norm", "intersects"};

  std::size_t pairs = 0;
  std::size_t covered = 0;
  std::size_t violations = 0;
  double max_covered_overlap = 0.0;
  auto record = [&](const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
    const StandardSubspace e(basis, s);
    const FourierSubspace f(basis, t);
    const auto v = check_uncertainty(e, f, c.intersect_tol);
    r.add_row({pairs, Json(e.indices()).dump(), Json(f.indices()).dump(), v.multiplicative_applies, v.additive_applies,
               v.overlap_norm, v.intersects});
    ++pairs;
    if (v.multiplicative_applies || v.additive_applies) {
      ++covered;
      max_covered_overlap = std::max(max_covered_overlap, v.overlap_norm);
    }
    if (!v.consistent()) ++violations;
  };

  const std::size_t max_sum = u.max_sum.value_or(n);
  if (u.exhaustive) {
    if (n > 20) throw ValidationError("exhaustive uncertainty scan supports |G| <= 20");
    std::vector<std::vector<std::size_t>> subsets;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      if (s.size() < max_sum) subsets.push_back(std::move(s));
    }
    std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const auto& s : subsets) {
      for (const auto& t : subsets) {
        if (s.size() + t.size() > max_sum) break;
        record(s, t);
      }
    }
    r.inputs["mode"] = "exhaustive";
    r.inputs["max_sum"] = max_sum;
  } else if (u.samples > 0) {
    Rng rng(u.seed);
    for (std::size_t i = 0; i < u.samples; ++i) {
      std::size_t s_size = 0;
      std::size_t t_size = 0;
      if (u.multiplicative) {
        if (n < 3) throw ValidationError("multiplicative sampling needs |G| >= 3");
        s_size = 1 + static_cast<std::size_t>(rng.below(n - 1));
        const std::size_t t_max = (n - 1) / s_size; // largest t with s t < n
        t_size = 1 + static_cast<std::size_t>(rng.below(t_max));
      } else {
        if (max_sum < 2) throw ValidationError("--max-sum must be >= 2 for sampling");
        s_size = 1 + static_cast<std::size_t>(rng.below(std::min(max_sum - 1, n)));
        t_size = 1 + static_cast<std::size_t>(rng.below(std::min(max_sum - s_size, n)));
      }
      const auto s = random_subset(n, s_size, rng);
      const auto t = random_subset(n, t_size, rng);
      record(s, t);
    }
    r.inputs["mode"] = u.multiplicative ? "sampled-multiplicative" : "sampled";
    r.inputs["samples"] = u.samples;
    r.inputs["max_sum"] = max_sum;
  } else {
    const auto s = parse_index_set(u.set, n);
    const auto t = parse_index_set(u.chars, n);
    r.inputs["set"] = s;
    r.inputs["chars"] = t;
    r.inputs["mode"] = "single";
    record(s, t);
  }
  r.results["norms"] = {{"max_overlap_under_hypothesis", max_covered_overlap}};
  r.summary["pairs"] = pairs;
  r.summary["pairs_under_hypothesis"] = covered;
  r.summary["violations"] = violations;
  r.summary["consistent"] = violations == 0;
  return r;
}

Report cmd_comb(int n, const Common& c) {
  const auto ex = comb_example(n, c.order_cap);
  Report r;
  r.command = "comb";
  r.inputs["group"] = ex.group.spec();
  r.inputs["chars"] = ex.characters.indices();
  r.inputs["set"] = ex.support.indices();
  r.inputs["n"] = n;
  r.columns = {"element", "re", "im", "in_support"};
  double max_err = 0.0;
  std::size_t s_pos = 0;
  for (std::size_t a = 0; a < ex.f.size(); ++a) {
    const bool in = s_pos < ex.support.dim() && ex.support.indices()[s_pos] == a;
    if (in) ++s_pos;
    const double expect = a % static_cast<std::size_t>(n) == 0 ? n : 0.0;
    max_err = std::max(max_err, std::abs(ex.f[a] - Complex(expect, 0.0)));
    r.add_row({a, ex.f[a].real(), ex.f[a].imag(), in});
  }
  const double overlap = overlap_norm(ex.support, ex.characters);
  r.results["norms"] = {{"overlap_norm", overlap}};
  r.results["max_value_error"] = max_err;
  r.summary["support_size"] = ex.support.dim();
  r.summary["chars_size"] = ex.characters.dim();
  r.summary["order"] = ex.group.order();
  r.summary["intersects"] = overlap > 1.0 - c.intersect_tol;
  return r;
}

Report cmd_exchange(const Ambient& amb, const std::string& chars, const Common& c) {
  const auto basis = resolve_basis(amb, c);
  const FourierSubspace f(basis, parse_index_set(chars, basis->dim()));
  const auto ex = exchange_complement(f);
  Report r;
  r.command = "exchange";
  r.inputs["group"] = group_label(basis);
  r.inputs["chars"] = f.indices();
  r.inputs["tolerances"] = {{"sigma_min", 1e-8}};
  r.results["set"] = ex.complement.indices();
  r.results["norms"] = {{"sigma_min", ex.sigma_min}};
  r.columns = {"dim_f", "dim_e", "order", "sigma_min"};
  r.add_row({f.dim(), ex.complement.dim(), basis->dim(), ex.sigma_min});
  r.summary["dim_e"] = ex.complement.dim();
  r.summary["sigma_min"] = ex.sigma_min;
  return r;
}

Report cmd_detect(const Ambient& amb, const std::string& set, std::optional<std::size_t> chi, const std::string& chars,
                  const Common& c) {
  const auto basis = resolve_basis(amb, c);
  const StandardSubspace e(basis, parse_index_set(set, basis->dim()));
  Report r;
  r.command = "detect";
  r.inputs["group"] = group_label(basis);
  r.inputs["set"] = e.indices();
  const double reference = static_cast<double>(e.dim()) / static_cast<double>(basis->dim());
  Json detection = nullptr;
  Json overlap = nullptr;
  if (chi) {
    r.inputs["char"] = *chi;
    detection = single_vector_detection(e, *chi);
  }
  if (!chars.empty()) {
    const FourierSubspace f(basis, parse_index_set(chars, basis->dim()));
    r.inputs["chars"] = f.indices();
    overlap = overlap_norm(e, f);
  }
  if (!chi && chars.empty()) throw ValidationError("detect needs --char and/or --chars");
  r.results["achieved"] = {{"single_vector_detection", detection}, {"overlap_norm", overlap}};
  r.results["bounds"] = {{"dim_ratio", reference}};
  r.columns = {"set_size", "order", "single_vector_detection", "dim_ratio", "overlap_norm"};
  r.add_row({e.dim(), basis->dim(), detection, reference, overlap});
  r.summary["single_vector_detection"] = detection;
  r.summary["overlap_norm"] = overlap;
  return r;
}

Report cmd_select(const Ambient& amb, const std::string& chars, std::size_t k, const Common& c) {
  const auto basis = resolve_basis(amb, c);
  const FourierSubspace f(basis, parse_index_set(chars, basis->dim()));
  const auto frame = build_frame(f);
  const auto sel = select_onesided(frame, k);
  Report r;
  r.command = "select";
  r.inputs["group"] = group_label(basis);
  r.inputs["chars"] = f.indices();
  r.inputs["k"] = k;
  r.inputs["tolerances"] = {{"feasibility", kFeasibilityTol}};
  r.results["achieved"] = {{"one_sided", sel.achieved_one_sided}, {"complement", sel.achieved_complement}};
  r.results["bounds"] = {{"one_sided", sel.bound_one_sided}, {"complement_reference", sel.complement_reference}};
  r.results["norms"] = {{"pq", std::sqrt(sel.achieved_one_sided)}, {"complement_pq", std::sqrt(sel.achieved_complement)}};
  r.results["potential_trace"] = potential_json(sel.potential_trace);
  r.results["margins"] = {{"domination", sel.domination_margins}, {"feasibility", sel.feasibility_values}};
  r.results["selected"] = sel.selected;
  r.results["order"] = sel.order;
  r.results["refactorizations"] = sel.refactorizations;
  r.columns = {"step", "index", "shift", "potential", "domination_margin", "condition_value"};
  for (std::size_t j = 0; j < sel.order.size(); ++j) {
    r.add_row({j + 1, sel.order[j], sel.potential_trace[j + 1].shift, sel.potential_trace[j + 1].potential,
               sel.domination_margins[j + 1], sel.feasibility_values[j]});
  }
  r.summary["epsilon"] = sel.epsilon;
  r.summary["below_bound"] = sel.achieved_one_sided < sel.bound_one_sided;
  r.summary["potential_monotone"] = sel.potential_monotone;
  r.summary["strictly_dominated"] = sel.strictly_dominated;
  r.summary["excess"] = sel.achieved_one_sided - static_cast<double>(k) / static_cast<double>(frame.n());
  return r;
}

Report cmd_twosided(const Ambient& amb, const std::string& chars, std::size_t k, const std::string& method,
                    const Common& c) {
  const auto basis = resolve_basis(amb, c);
  const FourierSubspace f(basis, parse_index_set(chars, basis->dim()));
  const auto frame = build_frame(f);
  TwoSidedSelection sel;
  if (method == "oracle") {
    sel.exhaustive = true;
    sel.selected = brute_force_best(frame, k, Objective::TwoSidedMaxExcess, c.enum_cap).selected;
    sel.evaluation = evaluate_twosided(frame, sel.selected);
  } else if (method == "heuristic") {
    sel.selected = select_onesided(frame, k).selected;
    sel.evaluation = evaluate_twosided(frame, sel.selected);
  } else {
    sel = select_twosided(frame, k, c.enum_cap);
  }
  const auto& ev = sel.evaluation;
  const double kn = static_cast<double>(k) / static_cast<double>(frame.n());
  const double measured_c = std::max(0.0, ev.max_excess()) / std::sqrt(frame.epsilon());
  Report r;
  r.command = "twosided";
  r.inputs["group"] = group_label(basis);
  r.inputs["chars"] = f.indices();
  r.inputs["k"] = k;
  r.inputs["method"] = sel.exhaustive ? "exhaustive" : "heuristic-barrier";
  r.results["achieved"] = {{"qpq", ev.qpq_norm}, {"complement_qpq", ev.complement_norm}};
  r.results["bounds"] = {{"reference", kn}, {"complement_reference", 1.0 - kn}};
  r.results["norms"] = {{"pq", std::sqrt(ev.qpq_norm)}, {"complement_pq", std::sqrt(ev.complement_norm)}};
  r.results["selected"] = sel.selected;
  r.results["identity_residual"] = ev.identity_residual;
  r.columns = {"k", "n", "qpq", "complement_qpq", "excess", "complement_excess", "measured_c"};
  r.add_row({k, frame.n(), ev.qpq_norm, ev.complement_norm, ev.excess, ev.complement_excess, measured_c});
  r.summary["excess"] = ev.excess;
  r.summary["complement_excess"] = ev.complement_excess;
  r.summary["measured_c"] = measured_c;
  r.summary["exhaustive"] = sel.exhaustive;
  return r;
}


} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier/standard subspace overlap and barrier-potential selection toolkit", "fdetect"};
  app.require_subcommand(1);
  Common common;
  Ambient amb;
  std::function<Report()> action;

  auto* basis_check = app.add_subcommand("basis-check", "Unitarity and flatness of a group Fourier basis or basis file");
  add_common(basis_check, common);
  add_ambient(basis_check, amb);
  basis_check->callback([&] { action = [&] { return cmd_basis_check(amb, common); }; });

  UncertaintyArgs ua;
  auto* unc = app.add_subcommand("uncertainty", "Uncertainty-principle intersection verdicts");
  add_common(unc, common);
  add_ambient(unc, amb);
  unc->add_option("--set", ua.set, "Standard index set");
  unc->add_option("--chars", ua.chars, "Fourier index set");
  unc->add_flag("--exhaustive", ua.exhaustive, "Scan every pair with |S| + |T| <= max-sum");
  unc->add_option("--max-sum", ua.max_sum, "Largest |S| + |T| considered");
  unc->add_option("--samples", ua.samples, "Number of random pairs");
  unc->add_flag("--multiplicative", ua.multiplicative, "Sample pairs with |S| |T| < |G|");
  unc->add_option("--seed", ua.seed, "Seed");
  unc->callback([&] { action = [&] { return cmd_uncertainty(amb, ua, common); }; });

  int comb_n = 2;
  auto* comb = app.add_subcommand("comb", "Function on Z/n^2 sparse in both bases");
  add_common(comb, common);
  comb->add_option("--n", comb_n, "Comb parameter")->required();
  comb->callback([&] { action = [&] { return cmd_comb(comb_n, common); }; });

  std::string chars;
  auto* exch = app.add_subcommand("exchange", "Standard complement of a Fourier subspace");
  add_common(exch, common);
  add_ambient(exch, amb);
  exch->add_option("--chars", chars, "Fourier index set")->required();
  exch->callback([&] { action = [&] { return cmd_exchange(amb, chars, common); }; });

  std::string set;
  std::optional<std::size_t> chi;
  auto* detect = app.add_subcommand("detect", "Single-vector detection and overlap norm");
  add_common(detect, common);
  add_ambient(detect, amb);
  detect->add_option("--set", set, "Standard index set")->required();
  detect->add_option("--char", chi, "Fourier basis row");
  detect->add_option("--chars", chars, "Fourier index set");
  detect->callback([&] { action = [&] { return cmd_detect(amb, set, chi, chars, common); }; });

  std::size_t k = 0;
  auto* select = app.add_subcommand("select", "Barrier-potential one-sided selection");
  add_common(select, common);
  add_ambient(select, amb);
  select->add_option("--chars", chars, "Fourier index set")->required();
  select->add_option("--k", k, "Subset size")->required();
  select->callback([&] { action = [&] { return cmd_select(amb, chars, k, common); }; });

  std::string method = "auto";
  auto* twosided = app.add_subcommand("twosided", "Two-sided selection and evaluation");
  add_common(twosided, common);
  add_ambient(twosided, amb);
  twosided->add_option("--chars", chars, "Fourier index set")->required();
  twosided->add_option("--k", k, "Subset size")->required();
  twosided->add_option("--method", method, "auto | oracle | heuristic")
      ->check(CLI::IsMember({"auto", "oracle", "heuristic"}));
  twosided->callback([&] { action = [&] { return cmd_twosided(amb, chars, k, method, common); }; });

  McIntersectionConfig mc;
  std::optional<std::size_t> mc_dim;
  auto* mci = app.add_subcommand("mc-intersect", "Monte Carlo intersection frequency on Z/n^2 x Z/N");
  add_common(mci, common);
  mci->add_option("--n", mc.n, "Comb parameter")->required();
  mci->add_option("--N", mc.big_n, "Second cyclic factor")->required();
  mci->add_option("--trials", mc.trials, "Trial count");
  mci->add_option("--seed", mc.seed, "Seed");
  mci->add_option("--dimension", mc_dim, "Random subspace dimension (default |G'|/n)");
  mci->callback([&] {
    action = [&] {
      mc.dimension = mc_dim;
      mc.intersection_tol = common.intersect_tol;
      mc.order_cap = common.order_cap;
      mc.threads = common.threads;
      return mc_intersection(mc);
    };
  });

  std::vector<std::string> sweep_groups;
  double dim_fraction = 1.0 / 16.0;
  std::optional<std::size_t> sweep_dim;
  std::string chars_mode = "structured";
  SweepConfig sweep;
  auto* swp = app.add_subcommand("sweep-eps", "Barrier selection excess over k/n across instances");
  add_common(swp, common);
  swp->add_option("--groups", sweep_groups, "Group specs")->required()->delimiter(';');
  swp->add_option("--dim-fraction", dim_fraction, "dim(F) / |G|");
  swp->add_option("--dim", sweep_dim, "Fixed dim(F) for every group");
  swp->add_option("--chars-mode", chars_mode, "structured | random")->check(CLI::IsMember({"structured", "random"}));
  swp->add_option("--k-fraction", sweep.k_fraction, "k / |G|");
  swp->add_option("--seed", sweep.seed, "Seed for random character sets");
  swp->callback([&] {
    action = [&] {
      sweep.order_cap = common.order_cap;
      for (std::size_t i = 0; i < sweep_groups.size(); ++i) {
        const Group g = parse_group(sweep_groups[i], common.order_cap);
        const std::size_t n = g.order();
        const std::size_t m = sweep_dim.value_or(
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(dim_fraction * static_cast<double>(n)))));
        if (m == 0 || m >= n) throw ValidationError("sweep-eps: dim(F) must satisfy 1 <= dim < |G|");
        IndexSet t;
        if (chars_mode == "random") {
          Rng rng(derive_seed(sweep.seed, i));
          t = random_subset(n, m, rng);
        } else {
          t = structured_chars(n, m);
        }
        sweep.instances.push_back({g.factors(), t});
      }
      auto r = sweep_eps_constant(sweep);
      r.inputs["chars_mode"] = chars_mode;
      return r;
    };
  });

  HalfSplitConfig hs;
  auto* half = app.add_subcommand("half-split", "Split |S| = floor(n/2) and compare both norms with 1/sqrt(2)");
  add_common(half, common);
  add_ambient(half, amb);
  half->add_option("--chars", chars, "Fourier index set")->required();
  half->add_flag("--oracle", hs.use_oracle, "Use the exhaustive two-sided oracle");
  half->add_option("--seed", hs.seed, "Seed recorded for replay");
  half->callback([&] {
    action = [&] {
      hs.basis = resolve_basis(amb, common);
      hs.chars = parse_index_set(chars, hs.basis->dim());
      hs.enumeration_cap = common.enum_cap;
      return half_split(hs);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fdetect: error: " << e.what() << "\n";
    return kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  auto emit = [&](const Report& report) {
    const std::string text = common.format == "csv" ? dump_csv(report) : dump_json(report, utc_timestamp());
    if (common.output.empty()) {
      out << text;
      return;
    }
    std::ofstream file(common.output, std::ios::binary);
    if (!file) throw ValidationError("cannot write " + common.output);
    file << text;
  };
  auto fail = [&](const Error& e, int code) {
    err << "fdetect: error: " << e.what() << "\n";
    if (!common.output.empty()) {
      Report report;
      report.command = command;
      report.error = {{"kind", e.kind()}, {"message", e.what()}};
      std::ofstream file(common.output, std::ios::binary);
      file << dump_json(report, utc_timestamp());
    }
    return code;
  };

  try {
    emit(action());
    return kExitOk;
  } catch (const NumericalError& e) {
    return fail(e, kExitNumerical);
  } catch (const ValidationError& e) {
    return fail(e, kExitValidation);
  } catch (const std::exception& e) {
    err << "fdetect: error: " << e.what() << "\n";
    return kExitValidation;
  }
}

} // namespace fdetect::cli
