#pragma once

#include <string>

#include "lsrm/errors.hpp"

namespace lsrm {

enum class Submodel { kM1, kM2, kM3, kM4, kM5 };

Submodel submodel_from_string(const std::string& s);
std::string submodel_name(Submodel m);

// Which pieces of the full model a fit carries, and which coefficients stay
// frozen at zero. The five canonical submodels map onto this as:
//   M1  covariates + AR sender/receiver effects + AR dyad effects
//   M2  intercept-only mean, full covariance structure
//   M3  covariates + time-constant sender/receiver effects + wave-iid dyad
//       effects (or wave-iid sender/receiver effects with the m3_iid toggle)
//   M4  covariates + one scalar AR(1) residual per directed dyad
//   M5  covariates + independent noise
struct ModelStructure {
  enum class Sr { kAr1, kConstant, kIid, kNone };
  enum class Gg { kAr1, kIid, kScalarAr1, kScalarIid };

  bool intercept_only = false;
  Sr sr = Sr::kAr1;
  Gg gg = Gg::kAr1;

  bool sr_present() const { return sr != Sr::kNone; }
  bool phi_sr_free() const { return sr == Sr::kAr1; }
  bool phi_gg_free() const {
    return gg == Gg::kAr1 || gg == Gg::kScalarAr1;
  }
  bool phi_gg_offdiag_free() const { return gg == Gg::kAr1; }
  bool lambda_free() const { return gg == Gg::kAr1 || gg == Gg::kIid; }
  bool gg_has_ar() const { return phi_gg_free(); }

  static ModelStructure full() { return {}; }
  static ModelStructure for_submodel(Submodel m, bool m3_iid_effects = false);
};

}  // namespace lsrm
