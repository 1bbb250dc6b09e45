#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsrm/errors.hpp"

namespace lsrm {

enum class ResponseFamily { kGaussian, kBinary };

// Directed dyadic panel: A actors observed over T equally spaced waves, one
// response and p covariates per ordered pair (i, j), i != j. Responses may be
// missing (tracked by a mask, never by sentinel values); covariates must be
// fully observed. Diagonal (i == i) slots exist in storage but are invalid to
// touch.
class DyadPanel {
 public:
  DyadPanel(int n_actors, int n_times, int n_covariates, ResponseFamily family);

  int n_actors() const { return A_; }
  int n_times() const { return T_; }
  int n_covariates() const { return p_; }
  int n_dyads() const { return A_ * (A_ - 1); }
  ResponseFamily family() const { return family_; }

  std::vector<std::string>& actor_labels() { return actor_labels_; }
  const std::vector<std::string>& actor_labels() const { return actor_labels_; }
  std::vector<std::string>& covariate_names() { return covariate_names_; }
  const std::vector<std::string>& covariate_names() const {
    return covariate_names_;
  }

  // t is 1-based (1..T); k is 0-based (0..p-1).
  double response(int i, int j, int t) const { return y_[yidx(i, j, t)]; }
  bool is_missing(int i, int j, int t) const {
    return missing_[yidx(i, j, t)] != 0;
  }
  double covariate(int i, int j, int t, int k) const {
    return x_[yidx(i, j, t) * std::max(p_, 1) + k];
  }

  void set_response(int i, int j, int t, double v) { y_[yidx(i, j, t)] = v; }
  void set_missing(int i, int j, int t, bool m) {
    missing_[yidx(i, j, t)] = m ? 1 : 0;
  }
  void set_covariate(int i, int j, int t, int k, double v) {
    x_[yidx(i, j, t) * std::max(p_, 1) + k] = v;
  }

  int n_missing() const;
  int n_observed() const { return n_dyads() * T_ - n_missing(); }

  // Missing slots in the fixed sweep order (i ascending, j ascending, t
  // ascending); the chain serialization relies on this order being stable.
  struct Slot {
    int i, j, t;
  };
  std::vector<Slot> missing_slots() const;

  // Throws PanelInvalid when any invariant fails (binary responses outside
  // {0,1}, non-finite values, bad labels).
  void validate() const;

 private:
  std::size_t yidx(int i, int j, int t) const;

  int A_, T_, p_;
  ResponseFamily family_;
  std::vector<std::string> actor_labels_;
  std::vector<std::string> covariate_names_;
  std::vector<double> y_;
  std::vector<std::uint8_t> missing_;
  std::vector<double> x_;
};

// Scalar field over (sender, receiver, time); workspace for responses under
// imputation, linear predictors, residuals.
struct DirectedField {
  int A = 0, T = 0;
  std::vector<double> v;

  DirectedField() = default;
  DirectedField(int n_actors, int n_times)
      : A(n_actors), T(n_times),
        v(static_cast<std::size_t>(n_actors) * n_actors * n_times, 0.0) {}

  double& at(int i, int j, int t) {
    return v[(static_cast<std::size_t>(i) * A + j) * T + (t - 1)];
  }
  double at(int i, int j, int t) const {
    return v[(static_cast<std::size_t>(i) * A + j) * T + (t - 1)];
  }
};

}  // namespace lsrm
