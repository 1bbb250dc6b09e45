#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsrm/holdout.hpp"
#include "lsrm/io.hpp"
#include "lsrm/posterior.hpp"
#include "lsrm/sampler.hpp"
#include "lsrm/simulate.hpp"

namespace {

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok =
        comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0' || tok.empty())
      throw lsrm::ParseError("bad value in " + what + ": '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void print_acceptance(const lsrm::PosteriorChain& chain) {
  auto line = [](const char* name, const lsrm::AcceptanceSummary& a) {
    if (a.attempts == 0) return;
    std::printf("%-10s attempts %8ld  accept rate %.3f  conjugate-form %.3f\n",
                name, a.attempts, a.rate(),
                a.attempts ? double(a.gibbs_proposals) / a.attempts : 0.0);
  };
  std::printf("acceptance:\n");
  line("phi_sr", chain.acc_phi_sr);
  line("phi_gg", chain.acc_phi_gg);
  line("gamma_sr", chain.acc_gamma_sr);
  line("gamma_gg", chain.acc_gamma_gg);
  line("rho_gg", chain.acc_rho);
}

int run(int argc, char** argv) {
  CLI::App app{"longitudinal social relations model"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a synthetic panel");
  int sim_actors = 10, sim_times = 5, sim_normal = 1;
  std::string sim_family = "gaussian", sim_out = "panel.csv", sim_truth;
  std::string sim_beta = "1,-0.5", sim_phi_sr = "0.6,0,0,0.4";
  std::string sim_gamma_sr = "1,0.3,1";
  double sim_phi_g = 0.5, sim_phi_gg = 0.1, sim_gamma_g2 = 1.0;
  double sim_lambda = 0.3, sim_rho = 0.5, sim_missing = 0.0;
  std::uint64_t sim_seed = 1;
  bool sim_no_intercept = false;
  sim->add_option("--actors", sim_actors, "number of actors");
  sim->add_option("--times", sim_times, "number of waves");
  sim->add_option("--family", sim_family, "gaussian or binary");
  sim->add_option("--normal-covariates", sim_normal,
                  "standard normal covariates after the intercept");
  sim->add_flag("--no-intercept", sim_no_intercept,
                "drop the constant-one covariate");
  sim->add_option("--beta", sim_beta, "coefficients, comma list (pooled)");
  sim->add_option("--phi-sr", sim_phi_sr,
                  "sender/receiver AR matrix, row-major 4 values");
  sim->add_option("--phi-g", sim_phi_g, "dyad AR diagonal");
  sim->add_option("--phi-gg", sim_phi_gg, "dyad AR off-diagonal");
  sim->add_option("--gamma-sr", sim_gamma_sr,
                  "sender/receiver innovation: s2,off,r2");
  sim->add_option("--gamma-g2", sim_gamma_g2, "dyad innovation variance");
  sim->add_option("--lambda", sim_lambda, "dyad innovation correlation");
  sim->add_option("--rho", sim_rho, "stationary dyad correlation (binary)");
  sim->add_option("--missing-fraction", sim_missing, "fraction masked");
  sim->add_option("--seed", sim_seed, "rng seed");
  sim->add_option("--out", sim_out, "panel csv path");
  sim->add_option("--truth", sim_truth, "truth sidecar json path");

  // fit
  auto* fit = app.add_subcommand("fit", "run the sampler on a panel");
  std::string fit_panel, fit_family = "gaussian", fit_config;
  std::string fit_submodel = "M1", fit_out, fit_summary_csv;
  long fit_scans = -1, fit_burn = -1, fit_thin = -1;
  std::int64_t fit_seed = -1;
  bool fit_pooled = false, fit_save_theta = false, fit_m3_iid = false;
  fit->add_option("--panel", fit_panel, "panel csv")->required();
  fit->add_option("--family", fit_family, "gaussian or binary");
  fit->add_option("--config", fit_config, "key=value settings file");
  fit->add_option("--submodel", fit_submodel, "M1..M5");
  fit->add_option("--scans", fit_scans, "total scans");
  fit->add_option("--burn", fit_burn, "burn-in scans");
  fit->add_option("--thin", fit_thin, "thinning interval");
  fit->add_option("--seed", fit_seed, "rng seed");
  fit->add_flag("--pooled-beta", fit_pooled, "share beta across waves");
  fit->add_flag("--save-theta", fit_save_theta, "store the latent scale");
  fit->add_flag("--m3-iid-effects", fit_m3_iid,
                "wave-iid instead of constant effects in M3");
  fit->add_option("--out", fit_out, "chain output path");
  fit->add_option("--summary-csv", fit_summary_csv, "summary table csv");

  // predict
  auto* pred = app.add_subcommand("predict", "holdout model comparison");
  std::string pred_panel, pred_models = "M1,M4,M5", pred_config, pred_csv;
  double pred_fraction = 0.25;
  std::uint64_t pred_mask_seed = 17;
  std::int64_t pred_seed = -1;
  long pred_scans = -1, pred_burn = -1, pred_thin = -1;
  pred->add_option("--panel", pred_panel, "panel csv")->required();
  pred->add_option("--models", pred_models, "comma list of submodels");
  pred->add_option("--config", pred_config, "key=value settings file");
  pred->add_option("--fraction", pred_fraction, "held-out fraction");
  pred->add_option("--mask-seed", pred_mask_seed, "holdout mask seed");
  pred->add_option("--seed", pred_seed, "chain seed base");
  pred->add_option("--scans", pred_scans, "total scans");
  pred->add_option("--burn", pred_burn, "burn-in scans");
  pred->add_option("--thin", pred_thin, "thinning interval");
  pred->add_option("--csv", pred_csv, "results csv path");

  // summarize
  auto* summ = app.add_subcommand("summarize", "tables from a stored chain");
  std::string summ_chain, summ_csv, summ_derived_csv;
  summ->add_option("--chain", summ_chain, "chain file")->required();
  summ->add_option("--csv", summ_csv, "parameter summary csv");
  summ->add_option("--derived-csv", summ_derived_csv,
                   "derived covariance summary csv");

  // convert
  auto* conv = app.add_subcommand("convert", "chain file to csv");
  std::string conv_chain, conv_out;
  conv->add_option("--chain", conv_chain, "chain file")->required();
  conv->add_option("--out", conv_out, "csv path")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    lsrm::SimulationDesign design;
    design.n_actors = sim_actors;
    design.n_times = sim_times;
    design.family = lsrm::family_from_string(sim_family);
    design.missing_fraction = sim_missing;
    if (!sim_no_intercept)
      design.covariates.push_back(lsrm::CovariateKind::kConstantOne);
    for (int k = 0; k < sim_normal; ++k)
      design.covariates.push_back(lsrm::CovariateKind::kStandardNormal);
    auto beta = parse_list(sim_beta, "--beta");
    if (beta.size() != design.covariates.size())
      throw lsrm::ConfigInvalid("--beta needs one value per covariate");
    design.beta.resize(static_cast<Eigen::Index>(beta.size()), 1);
    for (std::size_t k = 0; k < beta.size(); ++k) design.beta(k, 0) = beta[k];
    auto phisr = parse_list(sim_phi_sr, "--phi-sr");
    if (phisr.size() != 4)
      throw lsrm::ConfigInvalid("--phi-sr needs 4 values");
    design.ar.phi_sr << phisr[0], phisr[1], phisr[2], phisr[3];
    design.ar.phi_gg = lsrm::exchangeable2(sim_phi_g, sim_phi_gg);
    auto gsr = parse_list(sim_gamma_sr, "--gamma-sr");
    if (gsr.size() != 3)
      throw lsrm::ConfigInvalid("--gamma-sr needs s2,off,r2");
    design.gamma_sr << gsr[0], gsr[1], gsr[1], gsr[2];
    design.gamma_g2 = sim_gamma_g2;
    design.lambda_gg = sim_lambda;
    design.rho_gg = sim_rho;

    lsrm::RngStream rng(sim_seed, 0);
    lsrm::SimulatedPanel out = lsrm::simulate_panel(design, rng);
    lsrm::write_panel_csv(out.panel, sim_out);
    std::printf("wrote %s: %d actors, %d waves, %d covariates, %d missing\n",
                sim_out.c_str(), out.panel.n_actors(), out.panel.n_times(),
                out.panel.n_covariates(), out.panel.n_missing());
    if (!sim_truth.empty()) {
      lsrm::write_truth_json(out.truth, sim_truth);
      std::printf("wrote %s\n", sim_truth.c_str());
    }
    return 0;
  }

  if (fit->parsed()) {
    lsrm::FitSettings fs;
    if (!fit_config.empty()) fs = lsrm::read_fit_settings(fit_config);
    if (fit->count("--submodel"))
      fs.submodel = lsrm::submodel_from_string(fit_submodel);
    if (fit_scans >= 0) fs.sampler.total_scans = fit_scans;
    if (fit_burn >= 0) fs.sampler.burn_in = fit_burn;
    if (fit_thin >= 0) fs.sampler.thin = fit_thin;
    if (fit_seed >= 0) fs.sampler.seed = static_cast<std::uint64_t>(fit_seed);
    if (fit_pooled) fs.sampler.pooled_beta = true;
    if (fit_save_theta) fs.sampler.save_theta = true;
    if (fit_m3_iid) fs.m3_iid_effects = true;

    lsrm::DyadPanel panel =
        lsrm::read_panel_csv(fit_panel, lsrm::family_from_string(fit_family));
    lsrm::PosteriorChain chain = lsrm::run_chain(
        panel, fs.priors, fs.structure(), fs.sampler, fs.submodel);
    std::printf("%s fit of %s: %zu draws kept\n",
                lsrm::submodel_name(chain.submodel).c_str(), fit_panel.c_str(),
                chain.draws.size());
    if (!chain.draws.empty()) {
      auto rows = lsrm::summarize_chain(chain);
      std::fputs(lsrm::format_summary_table(rows).c_str(), stdout);
      std::printf("derived covariances:\n");
      std::fputs(
          lsrm::format_summary_table(lsrm::summarize_derived(chain)).c_str(),
          stdout);
      if (!fit_summary_csv.empty()) lsrm::write_summary_csv(rows, fit_summary_csv);
    }
    print_acceptance(chain);
    if (!fit_out.empty()) {
      lsrm::write_chain(chain, fit_out);
      std::printf("wrote %s\n", fit_out.c_str());
    }
    return 0;
  }

  if (pred->parsed()) {
    lsrm::FitSettings fs;
    if (!pred_config.empty()) fs = lsrm::read_fit_settings(pred_config);
    if (pred_scans >= 0) fs.sampler.total_scans = pred_scans;
    if (pred_burn >= 0) fs.sampler.burn_in = pred_burn;
    if (pred_thin >= 0) fs.sampler.thin = pred_thin;
    if (pred_seed >= 0) fs.sampler.seed = static_cast<std::uint64_t>(pred_seed);

    std::vector<lsrm::Submodel> models;
    for (std::size_t pos = 0; pos <= pred_models.size();) {
      std::size_t comma = pred_models.find(',', pos);
      std::string tok = comma == std::string::npos
                            ? pred_models.substr(pos)
                            : pred_models.substr(pos, comma - pos);
      models.push_back(lsrm::submodel_from_string(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    lsrm::DyadPanel panel =
        lsrm::read_panel_csv(pred_panel, lsrm::ResponseFamily::kGaussian);
    auto results = lsrm::holdout_mse(panel, fs.priors, fs.sampler, models,
                                     pred_fraction, pred_mask_seed);
    std::fputs(lsrm::format_holdout_table(results).c_str(), stdout);
    if (!pred_csv.empty()) {
      std::ofstream os(pred_csv);
      if (!os) throw lsrm::IoFailure("cannot open for writing: " + pred_csv);
      os << "submodel,n_heldout,mse\n";
      for (const auto& r : results)
        os << lsrm::submodel_name(r.submodel) << ',' << r.n_heldout << ','
           << r.mse << '\n';
    }
    return 0;
  }

  if (summ->parsed()) {
    lsrm::PosteriorChain chain = lsrm::read_chain(summ_chain);
    if (chain.draws.empty()) throw lsrm::EmptyChain("chain holds no draws");
    auto rows = lsrm::summarize_chain(chain);
    std::fputs(lsrm::format_summary_table(rows).c_str(), stdout);
    std::printf("derived covariances:\n");
    auto derived = lsrm::summarize_derived(chain);
    std::fputs(lsrm::format_summary_table(derived).c_str(), stdout);
    print_acceptance(chain);
    if (!summ_csv.empty()) lsrm::write_summary_csv(rows, summ_csv);
    if (!summ_derived_csv.empty())
      lsrm::write_summary_csv(derived, summ_derived_csv);
    return 0;
  }

  if (conv->parsed()) {
    lsrm::write_chain_csv(lsrm::read_chain(conv_chain), conv_out);
    std::printf("wrote %s\n", conv_out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
