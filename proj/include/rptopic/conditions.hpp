#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace rptopic {

inline constexpr double kSupportTol = 1e-12;

// Min distance from a row of B to the convex hull of the other rows.
// +inf for a single row.
double simplicial_constant(const Eigen::MatrixXd& b);

// Min of ||l^T B|| / ||l|| over nonzero zero-sum l.
double affine_constant(const Eigen::MatrixXd& b);

// Smallest eigenvalue. A matrix asymmetric beyond 1e-9 is symmetrized first
// and *symmetrized is set.
double min_eigenvalue(const Eigen::MatrixXd& b, bool* symmetrized = nullptr);

// min over i != j of B_ii - B_ij.
double diag_dominance_constant(const Eigen::MatrixXd& b);

struct SeparabilityResult {
  bool separable = false;
  // novel_sets[k]: rows whose only entry above tol is in column k.
  std::vector<std::vector<std::size_t>> novel_sets;
};

SeparabilityResult separability_check(const Eigen::MatrixXd& beta, double tol = kSupportTol);

// True when no c with sum 1 and beta c >= 0 has a negative coordinate.
bool irreducibility_check(const Eigen::MatrixXd& beta, double tol = 1e-9);

struct ConditionReport {
  double gamma_s = 0.0;
  double gamma_a = 0.0;
  std::optional<double> gamma_r;  // square input only
  std::optional<double> gamma_d;
  bool separable = false;
  bool irreducible = false;
  bool symmetrized = false;
  std::vector<std::vector<std::size_t>> novel_sets;
};

ConditionReport condition_report(const Eigen::MatrixXd& b, double support_tol = kSupportTol);

}  // namespace rptopic
