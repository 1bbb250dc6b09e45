#include "lsrm/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lsrm/errors.hpp"

namespace lsrm {

namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
  double h = (static_cast<double>(v.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
}

// "k3" -> 3; throws on anything else.
int parse_tagged(const std::string& tok, char tag) {
  if (tok.size() < 2 || tok[0] != tag)
    throw ParseError("bad scalar name component: " + tok);
  char* end = nullptr;
  long v = std::strtol(tok.c_str() + 1, &end, 10);
  if (end == nullptr || *end != '\0' || v < 0)
    throw ParseError("bad scalar name component: " + tok);
  return static_cast<int>(v);
}

std::vector<std::string> split_name(const std::string& name) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= name.size()) {
    std::size_t dot = name.find('.', pos);
    if (dot == std::string::npos) {
      out.push_back(name.substr(pos));
      break;
    }
    out.push_back(name.substr(pos, dot - pos));
    pos = dot + 1;
  }
  return out;
}

}  // namespace

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyChain("quantile of an empty sequence");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigInvalid("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, p);
}

double effective_sample_size(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) throw EmptyChain("effective sample size of an empty sequence");
  if (n == 1) return 1.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  auto acov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
      s += (x[i] - mean) * (x[i + lag] - mean);
    return s / static_cast<double>(n);
  };
  double c0 = acov(0);
  if (!(c0 > 0.0)) return 1.0;
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double g = (acov(2 * m) + acov(2 * m + 1)) / c0;
    if (g <= 0.0) break;
    tau += 2.0 * g;
  }
  if (tau < 1e-12) return static_cast<double>(n);
  double ess = static_cast<double>(n) / tau;
  return std::min(std::max(ess, 1.0), static_cast<double>(n));
}

ScalarSummary summarize_scalar(const std::string& name,
                               const std::vector<double>& values) {
  if (values.empty()) throw EmptyChain("no draws to summarize for " + name);
  ScalarSummary s;
  s.name = name;
  s.n = static_cast<long>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.sd = values.size() > 1 ? std::sqrt(ss / (values.size() - 1.0)) : 0.0;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile_sorted(sorted, 0.5);
  s.q025 = quantile_sorted(sorted, 0.025);
  s.q975 = quantile_sorted(sorted, 0.975);
  s.ess = effective_sample_size(values);
  return s;
}

std::vector<double> extract_scalar(const PosteriorChain& chain,
                                   const std::string& name) {
  auto toks = split_name(name);
  if (toks.empty()) throw ParseError("empty scalar name");

  using Getter = double (*)(const ChainDraw&, int, int);
  int a1 = 0, a2 = 0;
  Getter get = nullptr;

  const std::string& head = toks[0];
  if (head == "beta") {
    if (chain.config.pooled_beta) {
      if (toks.size() != 2)
        throw ParseError("pooled chains store beta.k{k}: " + name);
      a1 = 0;
      a2 = parse_tagged(toks[1], 'k');
    } else {
      if (toks.size() != 3)
        throw ParseError("per-wave chains store beta.t{t}.k{k}: " + name);
      a1 = parse_tagged(toks[1], 't') - 1;
      a2 = parse_tagged(toks[2], 'k');
    }
    if (a1 < 0 || a1 >= chain.beta_cols() || a2 < 0 || a2 >= chain.p)
      throw ParseError("coefficient index out of range: " + name);
    get = [](const ChainDraw& d, int c, int k) { return d.params.beta(k, c); };
  } else if (head == "sr") {
    if (toks.size() != 4) throw ParseError("expected sr.a{i}.t{t}.s|r: " + name);
    a1 = parse_tagged(toks[1], 'a');
    a2 = parse_tagged(toks[2], 't') - 1;
    if (a1 < 0 || a1 >= chain.A || a2 < 0 || a2 >= chain.T)
      throw ParseError("effect index out of range: " + name);
    if (toks[3] == "s") {
      get = [](const ChainDraw& d, int i, int t) { return d.params.sr[i](0, t); };
    } else if (toks[3] == "r") {
      get = [](const ChainDraw& d, int i, int t) { return d.params.sr[i](1, t); };
    } else {
      throw ParseError("effect component must be s or r: " + name);
    }
  } else if (head == "imputed") {
    if (toks.size() != 2) throw ParseError("expected imputed.{idx}: " + name);
    char* end = nullptr;
    long idx = std::strtol(toks[1].c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || idx < 0 ||
        idx >= static_cast<long>(chain.missing_slots.size()))
      throw ParseError("imputed index out of range: " + name);
    a1 = static_cast<int>(idx);
    get = [](const ChainDraw& d, int i, int) { return d.imputed[i]; };
  } else if (toks.size() == 1) {
    if (head == "phi_s") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_sr(0, 0); };
    } else if (head == "phi_sr") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_sr(0, 1); };
    } else if (head == "phi_rs") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_sr(1, 0); };
    } else if (head == "phi_r") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_sr(1, 1); };
    } else if (head == "phi_g") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_gg(0, 0); };
    } else if (head == "phi_gg") {
      get = [](const ChainDraw& d, int, int) { return d.params.ar.phi_gg(0, 1); };
    } else if (head == "gamma_s2") {
      get = [](const ChainDraw& d, int, int) { return d.params.gamma_sr(0, 0); };
    } else if (head == "gamma_sr_off") {
      get = [](const ChainDraw& d, int, int) { return d.params.gamma_sr(0, 1); };
    } else if (head == "gamma_r2") {
      get = [](const ChainDraw& d, int, int) { return d.params.gamma_sr(1, 1); };
    } else if (head == "gamma_g2") {
      get = [](const ChainDraw& d, int, int) { return d.params.gamma_g2; };
    } else if (head == "lambda_gg") {
      get = [](const ChainDraw& d, int, int) { return d.params.lambda_gg; };
    } else if (head == "rho_gg") {
      get = [](const ChainDraw& d, int, int) { return d.params.rho_gg; };
    }
  }
  if (get == nullptr) throw ParseError("unknown scalar name: " + name);

  std::vector<double> out;
  out.reserve(chain.draws.size());
  for (const auto& d : chain.draws) out.push_back(get(d, a1, a2));
  return out;
}

std::vector<std::string> default_scalar_names(const PosteriorChain& chain) {
  std::vector<std::string> names;
  for (int c = 0; c < chain.beta_cols(); ++c)
    for (int k = 0; k < chain.p; ++k) {
      if (chain.config.pooled_beta) {
        names.push_back("beta.k" + std::to_string(k));
      } else {
        names.push_back("beta.t" + std::to_string(c + 1) + ".k" +
                        std::to_string(k));
      }
    }
  const ModelStructure& st = chain.structure;
  if (st.phi_sr_free())
    for (const char* n : {"phi_s", "phi_sr", "phi_rs", "phi_r"})
      names.push_back(n);
  if (st.sr_present())
    for (const char* n : {"gamma_s2", "gamma_sr_off", "gamma_r2"})
      names.push_back(n);
  if (st.phi_gg_free()) {
    names.push_back("phi_g");
    if (st.phi_gg_offdiag_free()) names.push_back("phi_gg");
  }
  if (chain.family == ResponseFamily::kBinary) {
    names.push_back("rho_gg");
  } else {
    names.push_back("gamma_g2");
    if (st.lambda_free()) names.push_back("lambda_gg");
  }
  return names;
}

std::vector<ScalarSummary> summarize_chain(const PosteriorChain& chain) {
  std::vector<ScalarSummary> out;
  for (const auto& name : default_scalar_names(chain))
    out.push_back(summarize_scalar(name, extract_scalar(chain, name)));
  return out;
}

std::vector<std::string> derived_scalar_names() {
  return {"sigma_s2",  "sigma_sr0", "rho_sr",     "sigma_r2",
          "sigma_g2",  "sigma_gg0", "rho_gg_stat"};
}

namespace {

struct DerivedRow {
  double sigma_s2, sigma_sr0, rho_sr, sigma_r2, sigma_g2, sigma_gg0, rho_stat;
};

DerivedRow derived_row(const PosteriorChain& chain, const ChainDraw& d) {
  Eigen::Matrix2d gamma_gg = d.params.innovations().gamma_gg();
  bool has_sr = chain.structure.sr_present();
  DerivedCovariances dc = derived_covariances(
      d.params.ar,
      has_sr ? d.params.gamma_sr : Eigen::Matrix2d::Identity(), gamma_gg, 0);
  DerivedRow r{};
  if (has_sr) {
    r.sigma_s2 = dc.sigma_s;
    r.sigma_sr0 = dc.sigma_sr;
    r.sigma_r2 = dc.sigma_r;
    double denom = std::sqrt(dc.sigma_s * dc.sigma_r);
    r.rho_sr = denom > 0.0 ? dc.sigma_sr / denom : 0.0;
  }
  r.sigma_g2 = dc.sigma_g;
  r.sigma_gg0 = dc.sigma_gg;
  r.rho_stat = dc.sigma_g > 0.0 ? dc.sigma_gg / dc.sigma_g : 0.0;
  return r;
}

}  // namespace

std::vector<double> derived_scalar(const PosteriorChain& chain,
                                   const std::string& name) {
  std::vector<double> out;
  out.reserve(chain.draws.size());
  for (const auto& d : chain.draws) {
    DerivedRow r = derived_row(chain, d);
    double v;
    if (name == "sigma_s2") {
      v = r.sigma_s2;
    } else if (name == "sigma_sr0") {
      v = r.sigma_sr0;
    } else if (name == "rho_sr") {
      v = r.rho_sr;
    } else if (name == "sigma_r2") {
      v = r.sigma_r2;
    } else if (name == "sigma_g2") {
      v = r.sigma_g2;
    } else if (name == "sigma_gg0") {
      v = r.sigma_gg0;
    } else if (name == "rho_gg_stat") {
      v = r.rho_stat;
    } else {
      throw ParseError("unknown derived scalar: " + name);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<ScalarSummary> summarize_derived(const PosteriorChain& chain) {
  std::vector<ScalarSummary> out;
  for (const auto& name : derived_scalar_names())
    out.push_back(summarize_scalar(name, derived_scalar(chain, name)));
  return out;
}

}  // namespace lsrm
