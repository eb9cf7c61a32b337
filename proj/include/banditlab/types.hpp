#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>
#include <Eigen/Dense>

namespace banditlab {

using ActionId = int;

// Malformed model or distribution parameters.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed its configured size budget. Carries the size
// the caller would have to allow for the call to succeed.
struct BudgetError : std::runtime_error {
  BudgetError(const std::string& what, std::int64_t required_)
      : std::runtime_error(what), required(required_) {}
  std::int64_t required;
};

// A runtime contract was violated (e.g. a policy returned an invalid
// distribution, or an observation had zero likelihood).
struct ContractViolation : std::runtime_error {
  explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

// Size limits for the exact enumeration machinery. Enumerations fail loudly
// with a BudgetError instead of truncating.
struct Budget {
  std::int64_t maxOutcomes = std::int64_t(1) << 24;  // joint reward-tensor outcomes
  std::int64_t maxTreeNodes = std::int64_t(1) << 20; // history-tree nodes
  std::int64_t maxAtoms = std::int64_t(1) << 22;     // (outcome, action-path) atoms
};

// Finite distribution over a strictly increasing real support.
struct FiniteDist {
  Eigen::VectorXd support;
  Eigen::VectorXd probs;

  FiniteDist() = default;
  FiniteDist(Eigen::VectorXd support_, Eigen::VectorXd probs_)
      : support(std::move(support_)), probs(std::move(probs_)) {}

  static FiniteDist uniformOver(const std::vector<double>& points);
  static FiniteDist pointMass(double x);

  int size() const { return static_cast<int>(support.size()); }
  double mean() const { return support.dot(probs); }

  // Throws SpecError unless probs are non-negative, sum to 1 within tol and
  // the support is strictly increasing.
  void validate(double tol = 1e-12) const;
};

inline FiniteDist FiniteDist::uniformOver(const std::vector<double>& points) {
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(points.data(), points.size());
  Eigen::VectorXd p = Eigen::VectorXd::Constant(points.size(), 1.0 / double(points.size()));
  return FiniteDist(std::move(s), std::move(p));
}

inline FiniteDist FiniteDist::pointMass(double x) {
  Eigen::VectorXd s(1), p(1);
  s << x;
  p << 1.0;
  return FiniteDist(std::move(s), std::move(p));
}

inline void FiniteDist::validate(double tol) const {
  if (support.size() != probs.size() || support.size() == 0)
    throw SpecError("FiniteDist: support and probs must be non-empty and equal-sized");
  if ((probs.array() < 0).any())
    throw SpecError("FiniteDist: negative probability");
  if (std::abs(probs.sum() - 1.0) > tol)
    throw SpecError("FiniteDist: probs sum to " + std::to_string(probs.sum()) + ", expected 1");
  for (int i = 1; i < support.size(); ++i)
    if (!(support[i] > support[i - 1]))
      throw SpecError("FiniteDist: support must be strictly increasing");
}

}  // namespace banditlab
