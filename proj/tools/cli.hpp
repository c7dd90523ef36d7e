// Copyright 2026 The curvlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// curvlab command line: analyze, curves, simulate.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 invalid spec or input value,
// 3 unmet precondition, 4 a checked inequality failed.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "curvlab/bounds.hpp"
#include "curvlab/coupling_sim.hpp"
#include "curvlab/entropy.hpp"
#include "curvlab/io/chain_spec.hpp"
#include "curvlab/io/output.hpp"
#include "curvlab/transport.hpp"

namespace curvlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitViolation = 4;

/// Transport-based analyses (curvature, sectional certificate, alpha) are
/// skipped above this many states.
inline constexpr std::size_t kTransportStateLimit = 256;

inline int exit_code(Errc code) {
  switch (code) {
    case Errc::kNotIrreducible:
    case Errc::kNotConnected:
    case Errc::kMonotonicityViolated:
    case Errc::kSingularLaplacian:
    case Errc::kTooLarge:
    case Errc::kDisconnectedSupport:
    case Errc::kAtStationarity:
      return kExitPrecondition;
    case Errc::kInvariantViolation:
      return kExitViolation;
    default:
      return kExitSchema;
  }
}

inline std::vector<double> parse_times(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double t = 0.0;
    try {
      t = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size() && !item.empty(), Errc::kInvalidArgument,
            "bad time '" + item + "'");
    require(std::isfinite(t) && t >= 0.0, Errc::kNonFiniteTime,
            "times must be finite and nonnegative");
    out.push_back(t);
  }
  require(!out.empty(), Errc::kInvalidArgument, "need at least one time");
  return out;
}

/// "dirac:LABEL", "uniform", "pi", or comma-separated weights.
inline ProbabilityVector parse_mu0(const std::string& text,
                                   const io::Materialized& chain) {
  const StateSpace& space = chain.generator.space();
  if (text.rfind("dirac:", 0) == 0) {
    const auto idx = space.index_of(text.substr(6));
    require(idx.has_value(), Errc::kInvalidArgument,
            "unknown state label '" + text.substr(6) + "'");
    return ProbabilityVector::dirac(space, *idx);
  }
  if (text == "uniform") return ProbabilityVector::uniform(space);
  if (text == "pi") return chain.pi;
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size() && !item.empty(), Errc::kInvalidArgument,
            "bad weight '" + item + "' in --mu0");
    w.push_back(v);
  }
  require(w.size() == space.size(), Errc::kDimensionMismatch,
          "--mu0 needs " + std::to_string(space.size()) + " weights");
  return ProbabilityVector(
      space, Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())));
}

struct AnalyzeOptions {
  std::string spec_path;
  int alpha_starts = 64;
  double tol = 1e-6;
  double time = 1.0;
  std::string summary_path;
};

struct CurvesOptions {
  std::string spec_path;
  std::string times;
  std::string mu0;
  std::string out_dir;
};

struct SimulateOptions {
  std::string spec_path;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string times;
  std::string out;
  std::string coupling = "auto";
};

namespace detail {

inline double reversibility_defect(const StochasticMatrix& k,
                                   const ProbabilityVector& pi) {
  const Vector& w = pi.weights();
  const Matrix flux = w.asDiagonal() * k.entries();
  return (flux - flux.transpose()).cwiseAbs().maxCoeff();
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

/// Model-specific checks; appends report lines, summary fields and
/// violations.
inline void model_checks(const io::ChainSpec& spec, const io::Materialized& chain,
                         std::ostream& out, io::Json& summary,
                         std::vector<std::string>& violations) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, models::BirthDeathSpec>) {
          const bool mono = models::bdp_monotone(m);
          out << "monotone rates:     " << (mono ? "yes" : "no") << "\n";
          summary["bdp"] = {{"monotone", mono}};
          if (mono) {
            out << "delta:              " << fmt(models::bdp_delta(m)) << "\n";
            summary["bdp"]["delta"] = models::bdp_delta(m);
          }
        } else if constexpr (std::is_same_v<T, models::CepSpec>) {
          const Matrix neg = -models::cep_laplacian(m);
          Eigen::SelfAdjointEigenSolver<Matrix> es(neg, Eigen::EigenvaluesOnly);
          out << "killed-walk gap:    " << fmt(es.eigenvalues()[0]) << "\n";
          summary["cep"] = {{"lambda1", es.eigenvalues()[0]}};
        } else if constexpr (std::is_same_v<T, models::InterchangeSpec>) {
          const Matrix c = models::single_particle_conductances(m);
          summary["interchange"] = {{"conductances", io::detail::rows(c)}};
        } else if constexpr (std::is_same_v<T, models::GlauberSpec> ||
                             std::is_same_v<T, models::SpinSystem>) {
          models::GlauberSpec g;
          if constexpr (std::is_same_v<T, models::SpinSystem>) {
            const auto inf = models::spin_influences(m);
            out << "influence norm:     " << fmt(inf.norm) << "\n";
            summary["spin"] = {{"norm", inf.norm}};
            g = models::glauber_from_spins(m);
          } else {
            g = m;
          }
          const auto wd = models::glauber_weakdep(g);
          out << "weak dependency:    " << (wd.holds ? "holds" : "fails")
              << ", kappa " << fmt(wd.kappa) << "\n";
          summary["glauber"] = {{"weakdep", wd.holds}, {"kappa", wd.kappa}};
          if (wd.holds && chain.kernel &&
              chain.kernel->size() <= kTransportStateLimit) {
            const double k =
                ollivier_curvature(*chain.kernel, chain.metric, chain.pairs).kappa;
            if (wd.kappa > k + tol::kBound) {
              violations.push_back("weak-dependency kappa " + fmt(wd.kappa) +
                                   " exceeds Ollivier curvature " + fmt(k));
            }
          }
        } else if constexpr (std::is_same_v<T, models::ZrpSpec>) {
          const auto mono = models::zrp_monotone(m);
          out << "monotone rates:     " << (mono.holds ? "yes" : "no")
              << ", delta " << fmt(mono.delta) << ", Delta " << fmt(mono.Delta);
          if (mono.delta_literal) out << ", delta(k+1) " << fmt(*mono.delta_literal);
          out << "\n";
          summary["zrp"] = {{"monotone", mono.holds},
                            {"delta", mono.delta},
                            {"Delta", mono.Delta},
                            {"mean_field", models::zrp_mean_field(m)}};
          if (mono.delta_literal) summary["zrp"]["delta_literal"] = *mono.delta_literal;
        }
      },
      spec.model);
}

/// Model-specific contraction factor at each time; empty where the model
/// gives none.
inline std::vector<std::optional<double>> model_bound(
    const io::ChainSpec& spec, const std::vector<double>& times) {
  std::vector<std::optional<double>> out(times.size());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        std::vector<double> values;
        if constexpr (std::is_same_v<T, models::BirthDeathSpec>) {
          if (models::bdp_monotone(m)) values = models::bdp_m_curve(m, times).m;
        } else if constexpr (std::is_same_v<T, models::CepSpec>) {
          values = models::cep_killed_tail(m, times).values;
        } else if constexpr (std::is_same_v<T, models::InterchangeSpec>) {
          values = models::interchange_meeting_tail(m, times).values;
        } else if constexpr (std::is_same_v<T, models::GlauberSpec> ||
                             std::is_same_v<T, models::SpinSystem>) {
          models::GlauberSpec g;
          if constexpr (std::is_same_v<T, models::SpinSystem>) {
            g = models::glauber_from_spins(m);
          } else {
            g = m;
          }
          const auto wd = models::glauber_weakdep(g);
          if (wd.holds) {
            for (double t : times) values.push_back(std::exp(-wd.kappa * t));
          }
        } else if constexpr (std::is_same_v<T, models::ZrpSpec>) {
          const auto mono = models::zrp_monotone(m);
          if (mono.holds && models::zrp_mean_field(m)) {
            for (double t : times) values.push_back(std::exp(-mono.delta * t));
          }
        }
        for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k];
      },
      spec.model);
  return out;
}

}  // namespace detail

inline int analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const io::ChainSpec spec = io::load_chain_spec(opt.spec_path);
  const io::Materialized chain = io::materialize(spec);
  const std::size_t n = chain.generator.size();
  const bool discrete = chain.kernel.has_value();
  require(opt.time > 0.0 && std::isfinite(opt.time), Errc::kNonFiniteTime,
          "--time must be positive and finite");
  require(chain.generator.irreducible(), Errc::kNotIrreducible,
          "chain is not irreducible");

  io::Json summary;
  summary["spec"] = io::emit_chain_spec(spec);
  summary["states"] = n;
  std::vector<std::string> violations;

  out << "kind:               " << spec.kind << "\n";
  out << "states:             " << n << "\n";
  const StochasticMatrix k =
      discrete ? *chain.kernel : semigroup_at(chain.generator, opt.time);
  out << "analyzed kernel:    "
      << (discrete ? std::string("P") : "P_t at t=" + detail::fmt(opt.time)) << "\n";
  summary["kernel"] = discrete ? "P" : "P_t";
  if (!discrete) summary["time"] = opt.time;
  const double defect = detail::reversibility_defect(k, chain.pi);
  out << "reversible:         " << (defect <= 1e-12 ? "yes" : "no") << "\n";
  summary["reversible"] = defect <= 1e-12;
  summary["pi"] = std::vector<double>(chain.pi.weights().data(),
                                      chain.pi.weights().data() + n);

  detail::model_checks(spec, chain, out, summary, violations);

  if (n > kTransportStateLimit) {
    out << "transport analyses: skipped (more than " << kTransportStateLimit
        << " states)\n";
    summary["transport"] = "skipped";
  } else {
    const CurvatureReport curv = ollivier_curvature(k, chain.metric, chain.pairs);
    const auto& w = curv.worst();
    out << "kappa:              " << detail::fmt(curv.kappa) << "  (worst pair "
        << k.space().label(w.x) << " ~ " << k.space().label(w.y) << ")\n";
    summary["kappa"] = curv.kappa;

    const StochasticMatrix kstar = adjoint(k, chain.pi);
    const SectionalCertificate cert =
        sectional_feasible(kstar, chain.metric, chain.pairs);
    out << "sectional (adjoint): " << (cert.holds ? "holds" : "fails");
    if (!cert.holds && cert.failing_pair) {
      out << " at " << k.space().label(cert.failing_pair->first) << " ~ "
          << k.space().label(cert.failing_pair->second);
    }
    out << "\n";
    summary["sectional"] = cert.holds;

    const AlphaEstimate alpha = estimate_alpha(k, opt.alpha_starts, opt.tol);
    out << "alpha_hat:          " << detail::fmt(alpha.alpha_hat)
        << (alpha.converged ? "" : "  (first-order check not met)") << "\n";
    out << "lambda2(PP*):       " << detail::fmt(alpha.lambda2) << "\n";
    summary["alpha"] = {{"alpha_hat", alpha.alpha_hat},
                        {"best_ratio", alpha.best_ratio},
                        {"lambda2", alpha.lambda2},
                        {"starts", alpha.n_starts},
                        {"converged", alpha.converged},
                        {"first_order_residual", alpha.first_order_residual}};
    if (cert.holds && curv.kappa >= 0.0 &&
        alpha.alpha_hat < curv.kappa - tol::kBound) {
      violations.push_back("entropy contraction " + detail::fmt(alpha.alpha_hat) +
                           " below curvature " + detail::fmt(curv.kappa));
    }

    const double rate =
        generator_curvature_rate(chain.generator, chain.metric, chain.pairs);
    out << "generator rate:     " << detail::fmt(rate) << "\n";
    summary["generator_rate"] = rate;
    if (!discrete && 1.0 - curv.kappa > std::exp(-rate * opt.time) + tol::kBound) {
      violations.push_back("1-kappa(P_t) exceeds exp(-rate t)");
    }
  }

  summary["violations"] = violations;
  out << "violations:         " << violations.size() << "\n";
  for (const auto& v : violations) out << "  - " << v << "\n";
  const int code = violations.empty() ? kExitOk : kExitViolation;
  summary["exit_code"] = code;
  if (!opt.summary_path.empty()) {
    io::write_atomically(opt.summary_path, summary.dump(2) + "\n");
    out << "summary:            " << opt.summary_path << "\n";
  }
  return code;
}

inline int curves(const CurvesOptions& opt, std::ostream& out) {
  const io::ChainSpec spec = io::load_chain_spec(opt.spec_path);
  const io::Materialized chain = io::materialize(spec);
  require(chain.generator.irreducible(), Errc::kNotIrreducible,
          "chain is not irreducible");
  const std::vector<double> times = parse_times(opt.times);
  const ProbabilityVector mu0 =
      parse_mu0(opt.mu0.empty() ? "dirac:" + chain.generator.space().label(0)
                                : opt.mu0,
                chain);
  const BoundTable table =
      compare_bounds(chain.generator, chain.metric, chain.pairs, mu0, times);
  const auto model = detail::model_bound(spec, times);

  std::vector<std::string> violations = table.violations;
  std::string csv = "t,H_exact,bound_kappa_t,bound_mlsi,bound_dbar,bound_model\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    const BoundRow& r = table.rows[k];
    csv += io::format_double(r.t) + "," + io::format_double(r.h_exact) + "," +
           io::format_double(r.kappa_t) + "," + io::format_double(r.mlsi) + "," +
           io::format_double(r.dbar) + ",";
    if (model[k]) {
      csv += io::format_double(*model[k]);
      if (r.h_exact > *model[k] * table.h0 + tol::kBound) {
        violations.push_back("model bound violated at t=" + io::format_double(r.t));
      }
    }
    csv += "\n";
  }
  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path path = std::filesystem::path(opt.out_dir) / "curves.csv";
  io::write_atomically(path, csv);
  out << "wrote " << path.string() << " (" << times.size() << " rows, H0 = "
      << detail::fmt(table.h0) << ", rate " << detail::fmt(table.mlsi_rate) << ")\n";
  out << "violations: " << violations.size() << "\n";
  for (const auto& v : violations) out << "  - " << v << "\n";
  return violations.empty() ? kExitOk : kExitViolation;
}

inline int simulate(const SimulateOptions& opt, std::ostream& out,
                    std::ostream& err) {
  const io::ChainSpec spec = io::load_chain_spec(opt.spec_path);
  const std::vector<double> times = parse_times(opt.times);
  std::optional<CouplingEstimate> est;
  std::string coupling = opt.coupling;
  if (const auto* b = std::get_if<models::BirthDeathSpec>(&spec.model)) {
    if (coupling == "auto") coupling = "order-preserving";
    est = simulate_bdp_worst(*b, times, opt.samples, opt.seed);
  } else if (const auto* c = std::get_if<models::InterchangeSpec>(&spec.model)) {
    if (coupling == "auto") coupling = "synchronized-shuffle";
    est = simulate_interchange_worst(*c, times, opt.samples, opt.seed);
  } else if (const auto* z = std::get_if<models::ZrpSpec>(&spec.model)) {
    if (coupling == "auto") {
      coupling = models::zrp_mean_field(*z) ? "refresh" : "independent";
    }
    require(coupling == "refresh" || coupling == "independent",
            Errc::kInvalidArgument, "unknown coupling '" + coupling + "'");
    est = simulate_zrp_worst(*z, times, opt.samples, opt.seed,
                             coupling == "refresh" ? ZrpCoupling::kRefresh
                                                   : ZrpCoupling::kIndependent);
  } else {
    err << "error: kind '" << spec.kind << "' has no coupling simulator\n";
    return kExitPrecondition;
  }
  std::string csv = "# seed=" + std::to_string(opt.seed) +
                    " samples=" + std::to_string(opt.samples) +
                    " coupling=" + coupling + "\n";
  csv += "t,tail_mean,ci95\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    csv += io::format_double(est->times[k]) + "," + io::format_double(est->mean[k]) +
           "," + io::format_double(est->ci95[k]) + "\n";
  }
  io::write_atomically(opt.out, csv);
  out << "wrote " << opt.out << " (" << times.size() << " rows, seed "
      << opt.seed << ")\n";
  return kExitOk;
}

/// Parses argv and dispatches; all diagnostics go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Curvature and entropy-contraction toolkit for finite Markov chains",
               "curvlab"};
  app.require_subcommand(1);

  AnalyzeOptions a;
  auto* an = app.add_subcommand("analyze", "Curvature, sectional certificate and alpha");
  an->add_option("spec", a.spec_path, "Chain spec (JSON)")->required();
  an->add_option("--alpha-starts", a.alpha_starts, "Random starts for the alpha estimator")
      ->check(CLI::PositiveNumber);
  an->add_option("--tol", a.tol, "First-order tolerance for the alpha estimator")
      ->check(CLI::PositiveNumber);
  an->add_option("--time", a.time, "Time t of P_t for continuous-time chains");
  an->add_option("--summary", a.summary_path, "Write a JSON summary here");

  CurvesOptions c;
  auto* cu = app.add_subcommand("curves", "Exact entropy against bound curves (CSV)");
  cu->add_option("spec", c.spec_path, "Chain spec (JSON)")->required();
  cu->add_option("--times", c.times, "Comma-separated times")->required();
  cu->add_option("--mu0", c.mu0, "dirac:LABEL, uniform, pi or comma-separated weights");
  cu->add_option("--out", c.out_dir, "Output directory")->required();

  SimulateOptions s;
  auto* si = app.add_subcommand("simulate", "Monte-Carlo coalescence tails (CSV)");
  si->add_option("spec", s.spec_path, "Chain spec (JSON)")->required();
  si->add_option("--samples", s.samples, "Trajectories per start")->required();
  si->add_option("--seed", s.seed, "RNG seed")->required();
  si->add_option("--times", s.times, "Comma-separated times")->required();
  si->add_option("--out", s.out, "Output CSV path")->required();
  si->add_option("--model-coupling", s.coupling,
                 "auto, or for zero-range: independent | refresh");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*an) return analyze(a, out);
    if (*cu) return curves(c, out);
    return simulate(s, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace curvlab::cli
