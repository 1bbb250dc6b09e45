#include "lsrm/panel.hpp"

#include <cmath>
#include <set>

namespace lsrm {

DyadPanel::DyadPanel(int n_actors, int n_times, int n_covariates,
                     ResponseFamily family)
    : A_(n_actors), T_(n_times), p_(n_covariates), family_(family) {
  if (A_ < 1 || T_ < 1 || p_ < 0)
    throw PanelInvalid("DyadPanel: need A >= 1, T >= 1, p >= 0");
  const std::size_t cells = static_cast<std::size_t>(A_) * A_ * T_;
  y_.assign(cells, 0.0);
  missing_.assign(cells, 0);
  x_.assign(cells * std::max(p_, 1), 0.0);
  actor_labels_.resize(A_);
  for (int i = 0; i < A_; ++i)
    actor_labels_[i] = "a" + std::to_string(i + 1);
  covariate_names_.resize(p_);
  for (int k = 0; k < p_; ++k)
    covariate_names_[k] = "x" + std::to_string(k + 1);
}

std::size_t DyadPanel::yidx(int i, int j, int t) const {
  return (static_cast<std::size_t>(i) * A_ + j) * T_ + (t - 1);
}

int DyadPanel::n_missing() const {
  int n = 0;
  for (int i = 0; i < A_; ++i)
    for (int j = 0; j < A_; ++j)
      if (i != j)
        for (int t = 1; t <= T_; ++t)
          if (is_missing(i, j, t)) ++n;
  return n;
}

std::vector<DyadPanel::Slot> DyadPanel::missing_slots() const {
  std::vector<Slot> out;
  for (int i = 0; i < A_; ++i)
    for (int j = 0; j < A_; ++j)
      if (i != j)
        for (int t = 1; t <= T_; ++t)
          if (is_missing(i, j, t)) out.push_back({i, j, t});
  return out;
}

void DyadPanel::validate() const {
  if (static_cast<int>(actor_labels_.size()) != A_)
    throw PanelInvalid("DyadPanel: actor label count != A");
  if (static_cast<int>(covariate_names_.size()) != p_)
    throw PanelInvalid("DyadPanel: covariate name count != p");
  std::set<std::string> seen(actor_labels_.begin(), actor_labels_.end());
  if (static_cast<int>(seen.size()) != A_)
    throw PanelInvalid("DyadPanel: duplicate actor labels");
  for (int i = 0; i < A_; ++i)
    for (int j = 0; j < A_; ++j) {
      if (i == j) continue;
      for (int t = 1; t <= T_; ++t) {
        if (!is_missing(i, j, t)) {
          const double yv = response(i, j, t);
          if (!std::isfinite(yv))
            throw PanelInvalid("DyadPanel: non-finite observed response");
          if (family_ == ResponseFamily::kBinary && yv != 0.0 && yv != 1.0)
            throw PanelInvalid("DyadPanel: binary response outside {0,1}");
        }
        for (int k = 0; k < p_; ++k)
          if (!std::isfinite(covariate(i, j, t, k)))
            throw PanelInvalid("DyadPanel: non-finite covariate");
      }
    }
}

}  // namespace lsrm
