// qms: spectral analysis of quantum Markov semigroups on matrix algebras.
// Subcommands map one-to-one onto the library's analyses; all input and
// output is JSON so runs are reproducible and diffable.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qms/qms.hpp"

namespace {

using qms::Json;

struct Output {
  Json report;
  bool checks_pass = true;

  void add_residual(const std::string& check, double residual, double tolerance) {
    if (!report.contains("residuals")) report["residuals"] = Json::array();
    bool pass = residual <= tolerance;
    report["residuals"].push_back(
        Json{{"check", check}, {"residual", residual}, {"tolerance", tolerance}, {"pass", pass}});
    checks_pass = checks_pass && pass;
  }
};

Json complex_list(const std::vector<qms::Complex>& zs) {
  Json out = Json::array();
  for (auto z : zs) out.push_back(qms::complex_to_json(z));
  return out;
}

Output make_output(const std::string& command, std::uint64_t seed, double tolerance) {
  Output o;
  o.report["tool_version"] = qms::kToolVersion;
  o.report["command"] = command;
  o.report["seed"] = seed;
  o.report["tolerances"] = Json{{"tol", tolerance},
                                {"peripheral", qms::tol::peripheral},
                                {"invariant", qms::tol::invariant}};
  o.report["residuals"] = Json::array();
  return o;
}

void write_report(const Output& o, const std::string& out_path) {
  std::string text = qms::dump_json(o.report);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw qms::ValidationError("cannot open output file: " + out_path);
    f << text;
  }
}

Json classification_json(const qms::Classification& c) {
  Json j;
  j["ergodic"] = c.ergodic;
  j["strong_mixing"] = c.strong_mixing;
  j["kolmogorov"] = c.kolmogorov;
  j["peripheral_eigenvalues"] = complex_list(c.peripheral_eigenvalues);
  j["spectral_gap"] = c.spectral_gap;
  j["fixed_algebra_dim"] = c.fixed_algebra_dim;
  j["G_dim"] = c.G_dim;
  j["support_reduced"] = c.support_reduced;
  if (c.reduced) j["reduced"] = classification_json(*c.reduced);
  return j;
}

qms::DensityState resolve_state(const qms::CPMap& map, const std::string& state_path,
                                Output& out) {
  if (!state_path.empty()) {
    qms::DensityState s = qms::state_from_json(qms::load_json_file(state_path), state_path);
    out.report["state_source"] = state_path;
    return s;
  }
  qms::InvariantStates inv = qms::invariant_states(map);
  out.report["state_source"] = "computed invariant state";
  out.report["invariant_state_faithful"] = inv.faithful_exists;
  out.report["invariant_fixed_dim"] = inv.fixed_dim;
  return inv.maximal;
}

// ---------------------------------------------------------------------------

int run_analyze(const std::string& channel_path, const std::string& state_path, double tolerance,
                std::uint64_t seed, const std::string& out_path) {
  Output out = make_output("analyze", seed, tolerance);
  qms::CPMap map = qms::channel_from_json(qms::load_json_file(channel_path), channel_path);
  out.add_residual("unitality", map.unitality_defect().norm(), qms::tol::unital);
  qms::DensityState state = resolve_state(map, state_path, out);
  out.add_residual("state_invariance", (map.predual_apply(state.rho) - state.rho).norm(),
                   qms::tol::invariant);
  qms::Classification c =
      qms::classify(map, state, tolerance > 0 ? tolerance : qms::tol::peripheral);
  Json cj = classification_json(c);
  for (auto it = cj.begin(); it != cj.end(); ++it) out.report[it.key()] = it.value();
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_dual(const std::string& channel_path, const std::string& state_path, double tolerance,
             std::uint64_t seed, const std::string& out_path) {
  Output out = make_output("dual", seed, tolerance);
  qms::CPMap map = qms::channel_from_json(qms::load_json_file(channel_path), channel_path);
  qms::DensityState state = resolve_state(map, state_path, out);
  qms::CPMap dual = qms::kms_dual(map, state, tolerance > 0 ? tolerance : 1e-8);
  out.add_residual("kms_adjoint_relation", qms::kms_adjoint_residual(map, dual, state), 1e-9);
  qms::CPMap back = qms::kms_dual(dual, state);
  out.add_residual("duality_involution",
                   (qms::superop_of(back).mat - qms::superop_of(map).mat).norm(), 1e-9);
  out.add_residual("dual_unitality", dual.unitality_defect().norm(), 1e-10);
  out.report["dual_channel"] = qms::channel_to_json(dual);
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_spectrum(const std::string& channel_path, const std::string& lindblad_path,
                 double tolerance, std::uint64_t seed, const std::string& out_path) {
  Output out = make_output("spectrum", seed, tolerance);
  if (!channel_path.empty()) {
    qms::CPMap map = qms::channel_from_json(qms::load_json_file(channel_path), channel_path);
    out.report["source"] = "channel";
    qms::SpectralData sd = qms::spectral_data(qms::superop_of(map).mat);
    out.report["eigenvalues"] = complex_list(sd.eigenvalues);
    out.report["peripheral_eigenvalues"] = complex_list(sd.peripheral);
    out.report["spectral_gap"] = sd.gap;
    out.report["fixed_dim"] = sd.fixed_dim;
  } else if (!lindblad_path.empty()) {
    qms::LindbladGenerator gen =
        qms::lindblad_from_json(qms::load_json_file(lindblad_path), lindblad_path);
    out.report["source"] = "lindblad";
    qms::Matrix m = qms::generator_superop(gen).mat;
    Eigen::ComplexEigenSolver<qms::Matrix> es(m);
    std::vector<qms::Complex> evs(es.eigenvalues().data(),
                                  es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(evs.begin(), evs.end(), [](qms::Complex a, qms::Complex b) {
      if (std::abs(a.real() - b.real()) > 1e-14) return a.real() > b.real();
      return a.imag() < b.imag();
    });
    out.report["eigenvalues"] = complex_list(evs);
    // generator convention: gap = -max{Re(ev) : ev != 0}, fixed space = ker L
    double max_re = -std::numeric_limits<double>::infinity();
    std::vector<qms::Complex> imaginary_axis;
    for (auto ev : evs) {
      if (std::abs(ev) <= 1e-10) continue;
      if (std::abs(ev.real()) <= 1e-10) imaginary_axis.push_back(ev);
      max_re = std::max(max_re, ev.real());
    }
    out.report["imaginary_axis_eigenvalues"] = complex_list(imaginary_axis);
    out.report["spectral_gap"] = std::isfinite(max_re) ? -max_re : 0.0;
    out.report["fixed_dim"] = qms::kernel_dim(m);
  } else {
    throw qms::ValidationError("spectrum: provide --channel or --lindblad");
  }
  write_report(out, out_path);
  return 0;
}

int run_dilate(const std::string& channel_path, const std::string& state_path, int horizon,
               const std::string& checks_csv, double tolerance, std::uint64_t seed,
               const std::string& out_path) {
  Output out = make_output("dilate", seed, tolerance);
  double eps = tolerance > 0 ? tolerance : 1e-10;
  qms::CPMap map = qms::channel_from_json(qms::load_json_file(channel_path), channel_path);
  qms::DensityState state = resolve_state(map, state_path, out);
  qms::DilationSpace d = qms::build_dilation(map, state, horizon);
  out.report["total_dim"] = d.total_dim;
  out.report["base_dim"] = d.base_dim;
  out.report["noise_dim"] = d.noise_dim;
  out.report["horizon"] = d.horizon;
  out.report["support_reduced"] = d.support_reduced;
  Json ranks = Json::array();
  for (int t = 0; t <= d.horizon; ++t)
    ranks.push_back(std::lround(d.filtration(t).trace().real()));
  out.report["filtration_ranks"] = ranks;

  double iso = 0.0, mono = 0.0;
  for (int t = 0; t <= d.horizon; ++t) {
    qms::Matrix it = d.iota(t);
    iso = std::max(iso,
                   (it.adjoint() * it - qms::Matrix::Identity(it.cols(), it.cols())).norm());
    if (t > 0) {
      qms::Matrix fs = d.filtration(t - 1), ft = d.filtration(t);
      mono = std::max(mono, (fs * ft - fs).norm());
    }
  }
  out.add_residual("isometry", iso, eps);
  out.add_residual("filtration_monotone", mono, eps);

  for (const auto& name : {"markov", "compression", "cyclicity"}) {
    if (checks_csv.find(name) == std::string::npos) continue;
    if (std::string(name) == "markov") {
      qms::CheckReport r = qms::markov_property_check(d, eps);
      out.add_residual("markov", r.max_residual, eps);
    } else if (std::string(name) == "compression") {
      qms::CheckReport r = qms::compression_check(d, eps);
      out.add_residual("compression", r.max_residual, eps);
    } else {
      qms::CyclicityReport r = qms::cyclicity_check(d);
      out.report["cyclicity"] = Json{{"reached_dim", r.reached_dim}, {"cyclic", r.cyclic}};
    }
  }
  out.report["pass"] = out.checks_pass;
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_chain_purity(const std::string& tensor_path, double tolerance, std::uint64_t seed,
                     const std::string& out_path) {
  Output out = make_output("chain-purity", seed, tolerance);
  qms::PopescuTensor t = qms::tensor_from_json(qms::load_json_file(tensor_path), tensor_path);
  out.add_residual("row_isometry", qms::row_isometry_defect(t), qms::tol::unital);
  qms::ChainReport r = qms::purity_check(t, tolerance > 0 ? tolerance : qms::tol::peripheral);
  out.report["pure"] = r.pure;
  out.report["extremal"] = r.extremal;
  out.report["factor"] = r.factor;
  out.report["ergodic"] = r.ergodic;
  out.report["peripheral_eigenvalues"] = complex_list(r.peripheral_eigenvalues);
  out.report["gap"] = r.gap;
  out.report["support_reduced"] = r.support_reduced;
  out.report["fixed_algebra_dim"] = r.fixed_algebra_dim;
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_chain_marginal(const std::string& tensor_path, int sites, double tolerance,
                       std::uint64_t seed, const std::string& out_path) {
  Output out = make_output("chain-marginal", seed, tolerance);
  qms::PopescuTensor t = qms::tensor_from_json(qms::load_json_file(tensor_path), tensor_path);
  qms::SupportReduction sr = qms::support_reduce(t);
  out.report["support_reduced"] = sr.reduced;
  qms::DensityState marg = qms::marginal_density(sr.tensor, sr.state, sites);
  out.add_residual("marginal_trace", std::abs(marg.rho.trace().real() - 1.0), 1e-10);
  out.add_residual("marginal_psd", std::max(0.0, -qms::min_eigenvalue(marg.rho)), 1e-10);
  out.report["sites"] = sites;
  out.report["marginal"] = qms::state_to_json(marg);
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_chain_words(const std::string& tensor_path, int max_len, double tolerance,
                    std::uint64_t seed, const std::string& out_path) {
  Output out = make_output("chain-words", seed, tolerance);
  qms::PopescuTensor t = qms::tensor_from_json(qms::load_json_file(tensor_path), tensor_path);
  qms::SupportReduction sr = qms::support_reduce(t);
  out.report["support_reduced"] = sr.reduced;
  out.report["max_len"] = max_len;
  Json table = Json::array();
  double compat = 0.0;
  std::vector<qms::Word> all;
  for (int len = 0; len <= max_len; ++len)
    for (const auto& w : qms::words_of_length(sr.tensor.d, len)) all.push_back(w);
  for (const auto& wi : all)
    for (const auto& wj : all) {
      qms::Complex c = qms::word_function(sr.tensor, sr.state, wi, wj);
      table.push_back(Json{{"I", wi}, {"J", wj}, {"value", qms::complex_to_json(c)}});
      qms::Complex sum = 0;
      for (int a = 0; a < sr.tensor.d; ++a) {
        qms::Word ia = wi, ja = wj;
        ia.push_back(a);
        ja.push_back(a);
        sum += qms::word_function(sr.tensor, sr.state, ia, ja);
      }
      compat = std::max(compat, std::abs(sum - c));
    }
  out.add_residual("word_compatibility", compat, 1e-12);
  out.report["words"] = std::move(table);
  write_report(out, out_path);
  return out.checks_pass ? 0 : 1;
}

int run_sweep(const std::string& kind, int count, int dim, double tolerance, std::uint64_t seed,
              const std::string& out_path) {
  Output out = make_output("sweep", seed, tolerance);
  out.report["kind"] = kind;
  out.report["count"] = count;
  out.report["dim"] = dim;
  if (kind == "lindblad") {
    // continuous time: an ergodic generator must mix at every sampled time
    int counterexamples = 0, ergodic_count = 0;
    Json failures = Json::array();
    for (int i = 0; i < count; ++i) {
      std::uint64_t si = qms::instance_seed(seed, static_cast<std::uint64_t>(i));
      qms::LindbladGenerator gen = qms::random_lindblad_faithful(dim, 1, si);
      if (qms::kernel_dim(qms::generator_superop(gen).mat) != 1) continue;
      ++ergodic_count;
      qms::DensityState st = qms::stationary_state(gen);
      for (double t : {1.0, 5.0, 20.0}) {
        qms::Classification c = qms::classify_superop(qms::lindblad_exponential(gen, t), st);
        if (!c.strong_mixing) {
          ++counterexamples;
          failures.push_back(Json{{"instance", i}, {"t", t}});
        }
      }
    }
    out.report["check"] = "ergodic_implies_strong_mixing";
    out.report["ergodic_instances"] = ergodic_count;
    out.report["counterexamples"] = counterexamples;
    if (!failures.empty()) out.report["failures"] = failures;
    out.report["pass"] = counterexamples == 0;
    write_report(out, out_path);
    return counterexamples == 0 ? 0 : 1;
  }
  if (kind == "kms") {
    double worst_rel = 0.0, worst_inv = 0.0;
    for (int i = 0; i < count; ++i) {
      std::uint64_t si = qms::instance_seed(seed, static_cast<std::uint64_t>(i));
      qms::Index n = 2 + static_cast<qms::Index>(i % std::max(dim - 1, 1));
      auto cw = qms::random_channel_with_faithful_state(n, 2, si);
      qms::CPMap dual = qms::kms_dual(cw.map, cw.state);
      worst_rel = std::max(worst_rel, qms::kms_adjoint_residual(cw.map, dual, cw.state));
      qms::CPMap back = qms::kms_dual(dual, cw.state);
      worst_inv =
          std::max(worst_inv, (qms::superop_of(back).mat - qms::superop_of(cw.map).mat).norm());
    }
    out.add_residual("kms_adjoint_relation", worst_rel, 1e-9);
    out.add_residual("duality_involution", worst_inv, 1e-9);
    out.report["pass"] = out.checks_pass;
    write_report(out, out_path);
    return out.checks_pass ? 0 : 1;
  }
  throw qms::ValidationError("sweep: unknown kind '" + kind + "' (expected lindblad or kms)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis of quantum Markov semigroups on matrix algebras"};
  app.require_subcommand(1);

  std::string channel_path, state_path, lindblad_path, tensor_path, out_path, format = "json";
  std::string checks = "markov,compression,cyclicity";
  std::string sweep_kind = "lindblad";
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int horizon = 3, sites = 2, max_len = 4, count = 100, dim = 2;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tolerance, "tolerance override");
    cmd->add_option("--seed", seed, "seed for randomized parts");
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    cmd->add_option("--format", format)->check(CLI::IsMember({"json"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "classify a channel");
  analyze->add_option("--channel", channel_path)->required();
  analyze->add_option("--state", state_path);
  add_common(analyze);

  CLI::App* dual = app.add_subcommand("dual", "KMS-adjoint channel");
  dual->add_option("--channel", channel_path)->required();
  dual->add_option("--state", state_path);
  add_common(dual);

  CLI::App* spectrum = app.add_subcommand("spectrum", "superoperator spectrum");
  spectrum->add_option("--channel", channel_path);
  spectrum->add_option("--lindblad", lindblad_path);
  add_common(spectrum);

  CLI::App* dilate = app.add_subcommand("dilate", "finite-horizon weak Markov dilation");
  dilate->add_option("--channel", channel_path)->required();
  dilate->add_option("--state", state_path);
  dilate->add_option("--horizon", horizon);
  dilate->add_option("--checks", checks, "comma list: markov,compression,cyclicity");
  add_common(dilate);

  CLI::App* chain = app.add_subcommand("chain", "spin-chain analyses");
  chain->require_subcommand(1);
  CLI::App* purity = chain->add_subcommand("purity", "purity of the chain state");
  purity->add_option("--tensor", tensor_path)->required();
  add_common(purity);
  CLI::App* marginal = chain->add_subcommand("marginal", "finite marginal density");
  marginal->add_option("--tensor", tensor_path)->required();
  marginal->add_option("--sites", sites);
  add_common(marginal);
  CLI::App* words = chain->add_subcommand("words", "word-function table");
  words->add_option("--tensor", tensor_path)->required();
  words->add_option("--max-len", max_len);
  add_common(words);

  CLI::App* sweep = app.add_subcommand("sweep", "randomized property sweeps");
  sweep->add_option("--kind", sweep_kind, "lindblad or kms");
  sweep->add_option("--count", count);
  sweep->add_option("--dim", dim);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(channel_path, state_path, tolerance, seed, out_path);
    if (app.got_subcommand(dual))
      return run_dual(channel_path, state_path, tolerance, seed, out_path);
    if (app.got_subcommand(spectrum))
      return run_spectrum(channel_path, lindblad_path, tolerance, seed, out_path);
    if (app.got_subcommand(dilate))
      return run_dilate(channel_path, state_path, horizon, checks, tolerance, seed, out_path);
    if (app.got_subcommand(chain)) {
      if (chain->got_subcommand(purity))
        return run_chain_purity(tensor_path, tolerance, seed, out_path);
      if (chain->got_subcommand(marginal))
        return run_chain_marginal(tensor_path, sites, tolerance, seed, out_path);
      return run_chain_words(tensor_path, max_len, tolerance, seed, out_path);
    }
    if (app.got_subcommand(sweep))
      return run_sweep(sweep_kind, count, dim, tolerance, seed, out_path);
  } catch (const qms::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qms::DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qms::CheckError& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
