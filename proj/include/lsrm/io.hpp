#pragma once

#include <string>
#include <vector>

#include "lsrm/holdout.hpp"
#include "lsrm/posterior.hpp"
#include "lsrm/sampler.hpp"

namespace lsrm {

std::string family_name(ResponseFamily f);
ResponseFamily family_from_string(const std::string& s);

std::string sr_kind_name(ModelStructure::Sr s);
ModelStructure::Sr sr_kind_from_string(const std::string& s);
std::string gg_kind_name(ModelStructure::Gg g);
ModelStructure::Gg gg_kind_from_string(const std::string& s);

// Long format, one row per directed cell: sender,receiver,time,response then
// one column per covariate. Missing responses read and write as NA. Actor
// identity is the label; reading assigns indices by first appearance and
// requires every directed cell of the implied panel exactly once.
void write_panel_csv(const DyadPanel& panel, const std::string& path);
DyadPanel read_panel_csv(const std::string& path, ResponseFamily family);

// Generating parameters of a synthetic panel (including the realized
// sender/receiver paths) as a JSON sidecar.
void write_truth_json(const ModelParameters& truth, const std::string& path);
ModelParameters read_truth_json(const std::string& path);

// Fit settings as flat key=value lines; '#' starts a comment. Unknown keys
// are rejected rather than ignored.
struct FitSettings {
  SamplerConfig sampler;
  Submodel submodel = Submodel::kM1;
  bool m3_iid_effects = false;
  PriorSpec priors = PriorSpec::default_diffuse();

  ModelStructure structure() const {
    return ModelStructure::for_submodel(submodel, m3_iid_effects);
  }
};
FitSettings parse_fit_settings(const std::string& text);
FitSettings read_fit_settings(const std::string& path);

// Chain container: magic line, length-prefixed JSON header, then one
// length-prefixed binary record per draw (doubles stored as raw bytes, so a
// round trip is exact on one platform).
void write_chain(const PosteriorChain& chain, const std::string& path);
PosteriorChain read_chain(const std::string& path);

// Flat text export of every stored draw (full precision, one row per draw).
void write_chain_csv(const PosteriorChain& chain, const std::string& path);

std::string format_summary_table(const std::vector<ScalarSummary>& rows);
void write_summary_csv(const std::vector<ScalarSummary>& rows,
                       const std::string& path);

std::string format_holdout_table(const std::vector<HoldoutResult>& rows);

}  // namespace lsrm
