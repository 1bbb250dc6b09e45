#include "lsrm/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace lsrm {

namespace {

using nlohmann::json;

constexpr char kChainMagic[] = "LSRMCHN1\n";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == nullptr || *end != '\0' || s.empty())
    throw ParseError("bad numeric value for " + what + ": '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == nullptr || *end != '\0' || s.empty())
    throw ParseError("bad integer value for " + what + ": '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ParseError("bad boolean value for " + what + ": '" + s + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  for (auto& f : out) f = trim(f);
  return out;
}

void check_label(const std::string& s) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos)
    throw IoFailure("label not representable in the panel format: '" + s + "'");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a matrix");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ParseError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

void wr_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xffu;
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t rd_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw ParseError("truncated chain file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

class RecordWriter {
 public:
  void d(double v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(double));
  }
  void i64(std::int64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back((v >> (8 * i)) & 0xffu);
  }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void flush(std::ostream& os) {
    wr_u64(os, buf_.size());
    os.write(reinterpret_cast<const char*>(buf_.data()),
             static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

 private:
  std::vector<unsigned char> buf_;
};

class RecordReader {
 public:
  explicit RecordReader(std::vector<unsigned char> buf) : buf_(std::move(buf)) {}
  double d() {
    need(sizeof(double));
    double v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(double));
    pos_ += sizeof(double);
    return v;
  }
  std::int64_t i64() {
    need(8);
    std::int64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::int64_t(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }
  void done() const {
    if (pos_ != buf_.size()) throw ParseError("chain record length mismatch");
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw ParseError("chain record truncated");
  }
  std::vector<unsigned char> buf_;
  std::size_t pos_ = 0;
};

void outcome_to(RecordWriter& w, const StepOutcome& o) {
  w.u8(o.attempted);
  w.u8(o.used_gibbs);
  w.u8(o.accepted);
}

StepOutcome outcome_from(RecordReader& r) {
  StepOutcome o;
  o.attempted = r.u8() != 0;
  o.used_gibbs = r.u8() != 0;
  o.accepted = r.u8() != 0;
  return o;
}

}  // namespace

std::string family_name(ResponseFamily f) {
  return f == ResponseFamily::kBinary ? "binary" : "gaussian";
}

ResponseFamily family_from_string(const std::string& s) {
  if (s == "gaussian") return ResponseFamily::kGaussian;
  if (s == "binary") return ResponseFamily::kBinary;
  throw ParseError("unknown response family: '" + s + "'");
}

std::string sr_kind_name(ModelStructure::Sr s) {
  switch (s) {
    case ModelStructure::Sr::kAr1: return "ar1";
    case ModelStructure::Sr::kConstant: return "constant";
    case ModelStructure::Sr::kIid: return "iid";
    case ModelStructure::Sr::kNone: return "none";
  }
  throw ConfigInvalid("bad sr kind");
}

ModelStructure::Sr sr_kind_from_string(const std::string& s) {
  if (s == "ar1") return ModelStructure::Sr::kAr1;
  if (s == "constant") return ModelStructure::Sr::kConstant;
  if (s == "iid") return ModelStructure::Sr::kIid;
  if (s == "none") return ModelStructure::Sr::kNone;
  throw ParseError("unknown sender/receiver structure: '" + s + "'");
}

std::string gg_kind_name(ModelStructure::Gg g) {
  switch (g) {
    case ModelStructure::Gg::kAr1: return "ar1";
    case ModelStructure::Gg::kIid: return "iid";
    case ModelStructure::Gg::kScalarAr1: return "scalar_ar1";
    case ModelStructure::Gg::kScalarIid: return "scalar_iid";
  }
  throw ConfigInvalid("bad gg kind");
}

ModelStructure::Gg gg_kind_from_string(const std::string& s) {
  if (s == "ar1") return ModelStructure::Gg::kAr1;
  if (s == "iid") return ModelStructure::Gg::kIid;
  if (s == "scalar_ar1") return ModelStructure::Gg::kScalarAr1;
  if (s == "scalar_iid") return ModelStructure::Gg::kScalarIid;
  throw ParseError("unknown dyad structure: '" + s + "'");
}

void write_panel_csv(const DyadPanel& panel, const std::string& path) {
  for (const auto& s : panel.actor_labels()) check_label(s);
  for (const auto& s : panel.covariate_names()) check_label(s);
  std::ofstream os(path);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  os << "sender,receiver,time,response";
  for (const auto& s : panel.covariate_names()) os << ',' << s;
  os << '\n';
  for (int i = 0; i < panel.n_actors(); ++i)
    for (int j = 0; j < panel.n_actors(); ++j) {
      if (i == j) continue;
      for (int t = 1; t <= panel.n_times(); ++t) {
        os << panel.actor_labels()[i] << ',' << panel.actor_labels()[j] << ','
           << t << ',';
        if (panel.is_missing(i, j, t)) {
          os << "NA";
        } else {
          os << fmt_double(panel.response(i, j, t));
        }
        for (int k = 0; k < panel.n_covariates(); ++k)
          os << ',' << fmt_double(panel.covariate(i, j, t, k));
        os << '\n';
      }
    }
  if (!os) throw IoFailure("write failed: " + path);
}

DyadPanel read_panel_csv(const std::string& path, ResponseFamily family) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty panel file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "sender" || header[1] != "receiver" ||
      header[2] != "time" || header[3] != "response")
    throw ParseError("panel header must start sender,receiver,time,response");
  std::vector<std::string> cov_names(header.begin() + 4, header.end());
  const int p = static_cast<int>(cov_names.size());

  struct Row {
    int i, j;
    long t;
    bool missing;
    double y;
    std::vector<double> x;
  };
  std::vector<Row> rows;
  std::vector<std::string> labels;
  std::map<std::string, int> label_index;
  auto intern = [&](const std::string& s) {
    auto it = label_index.find(s);
    if (it != label_index.end()) return it->second;
    int idx = static_cast<int>(labels.size());
    labels.push_back(s);
    label_index.emplace(s, idx);
    return idx;
  };

  long max_t = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (static_cast<int>(f.size()) != 4 + p)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(4 + p) + " fields");
    Row r;
    r.i = intern(f[0]);
    r.j = intern(f[1]);
    r.t = parse_long(f[2], "time");
    if (r.t < 1) throw ParseError("line " + std::to_string(line_no) +
                                  ": time must be >= 1");
    r.missing = f[3] == "NA";
    r.y = r.missing ? 0.0 : parse_double(f[3], "response");
    r.x.reserve(p);
    for (int k = 0; k < p; ++k)
      r.x.push_back(parse_double(f[4 + k], cov_names[k]));
    if (r.i == r.j)
      throw ParseError("line " + std::to_string(line_no) +
                       ": self-relation rows are not allowed");
    max_t = std::max(max_t, r.t);
    rows.push_back(std::move(r));
  }
  const int A = static_cast<int>(labels.size());
  if (A < 2) throw PanelInvalid("panel needs at least two actors");
  const int T = static_cast<int>(max_t);

  DyadPanel panel(A, T, p, family);
  panel.actor_labels() = labels;
  if (p > 0) panel.covariate_names() = cov_names;
  std::vector<std::uint8_t> seen(
      static_cast<std::size_t>(A) * A * T, 0);
  for (const auto& r : rows) {
    int t = static_cast<int>(r.t);
    std::size_t idx = (static_cast<std::size_t>(r.i) * A + r.j) * T + (t - 1);
    if (seen[idx]) throw ParseError("duplicate cell in panel file");
    seen[idx] = 1;
    panel.set_missing(r.i, r.j, t, r.missing);
    if (!r.missing) panel.set_response(r.i, r.j, t, r.y);
    for (int k = 0; k < p; ++k) panel.set_covariate(r.i, r.j, t, k, r.x[k]);
  }
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T; ++t) {
        std::size_t idx = (static_cast<std::size_t>(i) * A + j) * T + (t - 1);
        if (!seen[idx])
          throw PanelInvalid("panel file misses cell " + labels[i] + "->" +
                             labels[j] + " at time " + std::to_string(t));
      }
    }
  panel.validate();
  return panel;
}

void write_truth_json(const ModelParameters& truth, const std::string& path) {
  json j;
  j["family"] = family_name(truth.family);
  j["beta"] = matrix_to_json(truth.beta);
  j["phi_sr"] = matrix_to_json(truth.ar.phi_sr);
  j["phi_gg"] = matrix_to_json(truth.ar.phi_gg);
  j["gamma_sr"] = matrix_to_json(truth.gamma_sr);
  j["gamma_g2"] = truth.gamma_g2;
  j["lambda_gg"] = truth.lambda_gg;
  j["rho_gg"] = truth.rho_gg;
  json sr = json::array();
  for (const auto& m : truth.sr) sr.push_back(matrix_to_json(m));
  j["sr"] = sr;
  std::ofstream os(path);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
  if (!os) throw IoFailure("write failed: " + path);
}

ModelParameters read_truth_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot open: " + path);
  json j;
  try {
    is >> j;
    ModelParameters p;
    p.family = family_from_string(j.at("family").get<std::string>());
    p.beta = matrix_from_json(j.at("beta"));
    p.ar.phi_sr = matrix_from_json(j.at("phi_sr"));
    p.ar.phi_gg = matrix_from_json(j.at("phi_gg"));
    p.gamma_sr = matrix_from_json(j.at("gamma_sr"));
    p.gamma_g2 = j.at("gamma_g2").get<double>();
    p.lambda_gg = j.at("lambda_gg").get<double>();
    p.rho_gg = j.at("rho_gg").get<double>();
    for (const auto& m : j.at("sr")) p.sr.push_back(matrix_from_json(m));
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad truth file: ") + e.what());
  }
}

FitSettings parse_fit_settings(const std::string& text) {
  FitSettings fs;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected key=value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key == "total_scans") {
      fs.sampler.total_scans = parse_long(val, key);
    } else if (key == "burn_in") {
      fs.sampler.burn_in = parse_long(val, key);
    } else if (key == "thin") {
      fs.sampler.thin = parse_long(val, key);
    } else if (key == "gibbs_probability") {
      fs.sampler.gibbs_probability = parse_double(val, key);
    } else if (key == "rw_step_phi") {
      fs.sampler.rw_step_phi = parse_double(val, key);
    } else if (key == "rw_step_gamma") {
      fs.sampler.rw_step_gamma = parse_double(val, key);
    } else if (key == "rho_halfwidth") {
      fs.sampler.rho_halfwidth = parse_double(val, key);
    } else if (key == "pooled_beta") {
      fs.sampler.pooled_beta = parse_bool(val, key);
    } else if (key == "save_theta") {
      fs.sampler.save_theta = parse_bool(val, key);
    } else if (key == "seed") {
      fs.sampler.seed = static_cast<std::uint64_t>(parse_long(val, key));
    } else if (key == "submodel") {
      try {
        fs.submodel = submodel_from_string(val);
      } catch (const Error& e) {
        throw ParseError(std::string("fit settings: ") + e.what());
      }
    } else if (key == "m3_iid_effects") {
      fs.m3_iid_effects = parse_bool(val, key);
    } else if (key == "beta_mean") {
      fs.priors.beta_mean = parse_double(val, key);
    } else if (key == "beta_var") {
      fs.priors.beta_var = parse_double(val, key);
    } else if (key == "phi_sr_mean") {
      fs.priors.phi_sr_mean.setConstant(parse_double(val, key));
    } else if (key == "phi_sr_var") {
      fs.priors.phi_sr_var = parse_double(val, key);
    } else if (key == "phi_gg_mean") {
      fs.priors.phi_gg_mean.setConstant(parse_double(val, key));
    } else if (key == "phi_gg_var") {
      fs.priors.phi_gg_var = parse_double(val, key);
    } else if (key == "v_sr") {
      fs.priors.v_sr = parse_double(val, key);
    } else if (key == "s_sr_diag") {
      double d = parse_double(val, key);
      fs.priors.s_sr(0, 0) = fs.priors.s_sr(1, 1) = d;
    } else if (key == "s_sr_off") {
      double d = parse_double(val, key);
      fs.priors.s_sr(0, 1) = fs.priors.s_sr(1, 0) = d;
    } else if (key == "alpha_a") {
      fs.priors.alpha_a = parse_double(val, key);
    } else if (key == "delta_a") {
      fs.priors.delta_a = parse_double(val, key);
    } else if (key == "alpha_b") {
      fs.priors.alpha_b = parse_double(val, key);
    } else if (key == "delta_b") {
      fs.priors.delta_b = parse_double(val, key);
    } else if (key == "rho_mean") {
      fs.priors.rho_mean = parse_double(val, key);
    } else if (key == "rho_var") {
      fs.priors.rho_var = parse_double(val, key);
    } else {
      throw ParseError("unknown setting: '" + key + "'");
    }
  }
  fs.sampler.validate();
  fs.priors.validate();
  return fs;
}

FitSettings read_fit_settings(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_fit_settings(ss.str());
}

namespace {

json config_to_json(const SamplerConfig& c) {
  json j;
  j["total_scans"] = c.total_scans;
  j["burn_in"] = c.burn_in;
  j["thin"] = c.thin;
  j["gibbs_probability"] = c.gibbs_probability;
  j["rw_step_phi"] = c.rw_step_phi;
  j["rw_step_gamma"] = c.rw_step_gamma;
  j["rho_halfwidth"] = c.rho_halfwidth;
  j["pooled_beta"] = c.pooled_beta;
  j["save_theta"] = c.save_theta;
  j["seed"] = c.seed;
  return j;
}

SamplerConfig config_from_json(const json& j) {
  SamplerConfig c;
  c.total_scans = j.at("total_scans").get<long>();
  c.burn_in = j.at("burn_in").get<long>();
  c.thin = j.at("thin").get<long>();
  c.gibbs_probability = j.at("gibbs_probability").get<double>();
  c.rw_step_phi = j.at("rw_step_phi").get<double>();
  c.rw_step_gamma = j.at("rw_step_gamma").get<double>();
  c.rho_halfwidth = j.at("rho_halfwidth").get<double>();
  c.pooled_beta = j.at("pooled_beta").get<bool>();
  c.save_theta = j.at("save_theta").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json acc_to_json(const AcceptanceSummary& a) {
  return json::array({a.attempts, a.accepts, a.gibbs_proposals});
}

AcceptanceSummary acc_from_json(const json& j) {
  AcceptanceSummary a;
  a.attempts = j.at(0).get<long>();
  a.accepts = j.at(1).get<long>();
  a.gibbs_proposals = j.at(2).get<long>();
  return a;
}

}  // namespace

void write_chain(const PosteriorChain& chain, const std::string& path) {
  json meta;
  meta["family"] = family_name(chain.family);
  meta["submodel"] = submodel_name(chain.submodel);
  meta["intercept_only"] = chain.structure.intercept_only;
  meta["sr"] = sr_kind_name(chain.structure.sr);
  meta["gg"] = gg_kind_name(chain.structure.gg);
  meta["config"] = config_to_json(chain.config);
  meta["A"] = chain.A;
  meta["T"] = chain.T;
  meta["p"] = chain.p;
  meta["fingerprint"] = chain.panel_fingerprint;
  json slots = json::array();
  for (const auto& s : chain.missing_slots) {
    slots.push_back(s.i);
    slots.push_back(s.j);
    slots.push_back(s.t);
  }
  meta["missing_slots"] = slots;
  meta["actor_labels"] = chain.actor_labels;
  meta["covariate_names"] = chain.covariate_names;
  meta["n_draws"] = chain.draws.size();
  std::size_t theta_len = 0;
  if (!chain.draws.empty()) theta_len = chain.draws.front().theta.size();
  meta["theta_len"] = theta_len;
  meta["acc_phi_sr"] = acc_to_json(chain.acc_phi_sr);
  meta["acc_phi_gg"] = acc_to_json(chain.acc_phi_gg);
  meta["acc_gamma_sr"] = acc_to_json(chain.acc_gamma_sr);
  meta["acc_gamma_gg"] = acc_to_json(chain.acc_gamma_gg);
  meta["acc_rho"] = acc_to_json(chain.acc_rho);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  os.write(kChainMagic, sizeof(kChainMagic) - 1);
  std::string header = meta.dump();
  wr_u64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));

  RecordWriter w;
  for (const auto& d : chain.draws) {
    w.i64(d.scan);
    outcome_to(w, d.out_phi_sr);
    outcome_to(w, d.out_phi_gg);
    outcome_to(w, d.out_gamma_sr);
    outcome_to(w, d.out_gamma_gg);
    outcome_to(w, d.out_rho);
    for (Eigen::Index c = 0; c < d.params.beta.cols(); ++c)
      for (Eigen::Index k = 0; k < d.params.beta.rows(); ++k)
        w.d(d.params.beta(k, c));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) w.d(d.params.ar.phi_sr(r, c));
    w.d(d.params.ar.phi_gg(0, 0));
    w.d(d.params.ar.phi_gg(0, 1));
    w.d(d.params.gamma_sr(0, 0));
    w.d(d.params.gamma_sr(0, 1));
    w.d(d.params.gamma_sr(1, 1));
    w.d(d.params.gamma_g2);
    w.d(d.params.lambda_gg);
    w.d(d.params.rho_gg);
    for (const auto& m : d.params.sr)
      for (Eigen::Index t = 0; t < m.cols(); ++t) {
        w.d(m(0, t));
        w.d(m(1, t));
      }
    if (d.imputed.size() != chain.missing_slots.size())
      throw IoFailure("draw imputation length does not match missing slots");
    for (double v : d.imputed) w.d(v);
    if (d.theta.size() != theta_len)
      throw IoFailure("draw theta length varies across draws");
    for (double v : d.theta) w.d(v);
    w.flush(os);
  }
  if (!os) throw IoFailure("write failed: " + path);
}

PosteriorChain read_chain(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoFailure("cannot open: " + path);
  char magic[sizeof(kChainMagic) - 1];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kChainMagic, sizeof(magic)) != 0)
    throw ParseError("not a chain file: " + path);
  std::uint64_t hlen = rd_u64(is);
  std::string header(hlen, '\0');
  is.read(header.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw ParseError("truncated chain header");

  PosteriorChain chain;
  std::size_t n_draws = 0, theta_len = 0;
  try {
    json meta = json::parse(header);
    chain.family = family_from_string(meta.at("family").get<std::string>());
    chain.submodel = submodel_from_string(meta.at("submodel").get<std::string>());
    chain.structure.intercept_only = meta.at("intercept_only").get<bool>();
    chain.structure.sr = sr_kind_from_string(meta.at("sr").get<std::string>());
    chain.structure.gg = gg_kind_from_string(meta.at("gg").get<std::string>());
    chain.config = config_from_json(meta.at("config"));
    chain.A = meta.at("A").get<int>();
    chain.T = meta.at("T").get<int>();
    chain.p = meta.at("p").get<int>();
    chain.panel_fingerprint = meta.at("fingerprint").get<std::uint64_t>();
    const json& slots = meta.at("missing_slots");
    if (slots.size() % 3 != 0) throw ParseError("bad missing slot list");
    for (std::size_t s = 0; s < slots.size(); s += 3)
      chain.missing_slots.push_back({slots[s].get<int>(),
                                     slots[s + 1].get<int>(),
                                     slots[s + 2].get<int>()});
    chain.actor_labels =
        meta.at("actor_labels").get<std::vector<std::string>>();
    chain.covariate_names =
        meta.at("covariate_names").get<std::vector<std::string>>();
    n_draws = meta.at("n_draws").get<std::size_t>();
    theta_len = meta.at("theta_len").get<std::size_t>();
    chain.acc_phi_sr = acc_from_json(meta.at("acc_phi_sr"));
    chain.acc_phi_gg = acc_from_json(meta.at("acc_phi_gg"));
    chain.acc_gamma_sr = acc_from_json(meta.at("acc_gamma_sr"));
    chain.acc_gamma_gg = acc_from_json(meta.at("acc_gamma_gg"));
    chain.acc_rho = acc_from_json(meta.at("acc_rho"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad chain header: ") + e.what());
  }

  chain.draws.reserve(n_draws);
  for (std::size_t n = 0; n < n_draws; ++n) {
    std::uint64_t rlen = rd_u64(is);
    std::vector<unsigned char> buf(rlen);
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(rlen));
    if (!is) throw ParseError("truncated chain record");
    RecordReader r(std::move(buf));
    ChainDraw d;
    d.scan = r.i64();
    d.out_phi_sr = outcome_from(r);
    d.out_phi_gg = outcome_from(r);
    d.out_gamma_sr = outcome_from(r);
    d.out_gamma_gg = outcome_from(r);
    d.out_rho = outcome_from(r);
    d.params.family = chain.family;
    d.params.beta.resize(chain.p, chain.beta_cols());
    for (Eigen::Index c = 0; c < d.params.beta.cols(); ++c)
      for (Eigen::Index k = 0; k < d.params.beta.rows(); ++k)
        d.params.beta(k, c) = r.d();
    for (int rr = 0; rr < 2; ++rr)
      for (int cc = 0; cc < 2; ++cc) d.params.ar.phi_sr(rr, cc) = r.d();
    double pg = r.d(), pgg = r.d();
    d.params.ar.phi_gg = exchangeable2(pg, pgg);
    double gs2 = r.d(), goff = r.d(), gr2 = r.d();
    d.params.gamma_sr << gs2, goff, goff, gr2;
    d.params.gamma_g2 = r.d();
    d.params.lambda_gg = r.d();
    d.params.rho_gg = r.d();
    d.params.sr.assign(chain.A, Eigen::Matrix2Xd::Zero(2, chain.T));
    for (int i = 0; i < chain.A; ++i)
      for (int t = 0; t < chain.T; ++t) {
        d.params.sr[i](0, t) = r.d();
        d.params.sr[i](1, t) = r.d();
      }
    d.imputed.resize(chain.missing_slots.size());
    for (double& v : d.imputed) v = r.d();
    d.theta.resize(theta_len);
    for (double& v : d.theta) v = r.d();
    r.done();
    chain.draws.push_back(std::move(d));
  }
  return chain;
}

void write_chain_csv(const PosteriorChain& chain, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  os << "scan";
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
  for (const char* n : {"phi_s", "phi_sr", "phi_rs", "phi_r", "phi_g", "phi_gg",
                        "gamma_s2", "gamma_sr_off", "gamma_r2", "gamma_g2",
                        "lambda_gg", "rho_gg"})
    names.push_back(n);
  for (int i = 0; i < chain.A; ++i)
    for (int t = 1; t <= chain.T; ++t) {
      names.push_back("sr.a" + std::to_string(i) + ".t" + std::to_string(t) +
                      ".s");
      names.push_back("sr.a" + std::to_string(i) + ".t" + std::to_string(t) +
                      ".r");
    }
  for (std::size_t s = 0; s < chain.missing_slots.size(); ++s)
    names.push_back("imputed." + std::to_string(s));
  std::size_t theta_len =
      chain.draws.empty() ? 0 : chain.draws.front().theta.size();
  for (std::size_t s = 0; s < theta_len; ++s)
    names.push_back("theta." + std::to_string(s));
  for (const auto& n : names) os << ',' << n;
  os << '\n';

  for (const auto& d : chain.draws) {
    os << d.scan;
    for (Eigen::Index c = 0; c < d.params.beta.cols(); ++c)
      for (Eigen::Index k = 0; k < d.params.beta.rows(); ++k)
        os << ',' << fmt_double(d.params.beta(k, c));
    os << ',' << fmt_double(d.params.ar.phi_sr(0, 0)) << ','
       << fmt_double(d.params.ar.phi_sr(0, 1)) << ','
       << fmt_double(d.params.ar.phi_sr(1, 0)) << ','
       << fmt_double(d.params.ar.phi_sr(1, 1)) << ','
       << fmt_double(d.params.ar.phi_gg(0, 0)) << ','
       << fmt_double(d.params.ar.phi_gg(0, 1)) << ','
       << fmt_double(d.params.gamma_sr(0, 0)) << ','
       << fmt_double(d.params.gamma_sr(0, 1)) << ','
       << fmt_double(d.params.gamma_sr(1, 1)) << ','
       << fmt_double(d.params.gamma_g2) << ','
       << fmt_double(d.params.lambda_gg) << ','
       << fmt_double(d.params.rho_gg);
    for (const auto& m : d.params.sr)
      for (Eigen::Index t = 0; t < m.cols(); ++t)
        os << ',' << fmt_double(m(0, t)) << ',' << fmt_double(m(1, t));
    for (double v : d.imputed) os << ',' << fmt_double(v);
    for (double v : d.theta) os << ',' << fmt_double(v);
    os << '\n';
  }
  if (!os) throw IoFailure("write failed: " + path);
}

std::string format_summary_table(const std::vector<ScalarSummary>& rows) {
  std::size_t name_w = 9;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %12s %12s %12s %9s\n",
                static_cast<int>(name_w), "parameter", "mean", "sd", "median",
                "q2.5", "q97.5", "ess");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-*s %12.5g %12.5g %12.5g %12.5g %12.5g %9.1f\n",
                  static_cast<int>(name_w), r.name.c_str(), r.mean, r.sd,
                  r.median, r.q025, r.q975, r.ess);
    os << buf;
  }
  return os.str();
}

void write_summary_csv(const std::vector<ScalarSummary>& rows,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  os << "parameter,n,mean,sd,median,q025,q975,ess\n";
  for (const auto& r : rows) {
    os << r.name << ',' << r.n << ',' << fmt_double(r.mean) << ','
       << fmt_double(r.sd) << ',' << fmt_double(r.median) << ','
       << fmt_double(r.q025) << ',' << fmt_double(r.q975) << ','
       << fmt_double(r.ess) << '\n';
  }
  if (!os) throw IoFailure("write failed: " + path);
}

std::string format_holdout_table(const std::vector<HoldoutResult>& rows) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-9s %10s %14s\n", "submodel", "heldout",
                "mse");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-9s %10ld %14.6g\n",
                  submodel_name(r.submodel).c_str(), r.n_heldout, r.mse);
    os << buf;
  }
  return os.str();
}

}  // namespace lsrm
