#pragma once

#include <map>
#include <string>
#include <vector>

#include "banditlab/types.hpp"

namespace banditlab {

// Exact joint probability table over named discrete variables. Values are
// integer codes; callers keep their own code dictionaries when the codes
// stand for structured values. The table is kept in a sorted map so that
// iteration order, and hence every serialized artifact, is deterministic.
class JointDist {
 public:
  explicit JointDist(std::vector<std::string> names) : names_(std::move(names)) {}

  void add(std::vector<int> key, double p);
  int numVars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::map<std::vector<int>, double>& table() const { return table_; }
  double totalMass() const;

  // Exact marginal over a subset of variable indices (in the given order).
  JointDist marginal(const std::vector<int>& vars) const;

  // Conditional distribution given variable `var` == code, renormalized.
  JointDist condition(int var, int code) const;

  // Pushforward by a deterministic map of full assignments to new codes.
  JointDist pushforward(const std::string& name,
                        const std::function<int(const std::vector<int>&)>& f) const;

  void validate(double tol = 1e-9) const;

 private:
  std::vector<std::string> names_;
  std::map<std::vector<int>, double> table_;
};

// Shannon entropy in nats, with 0 log 0 = 0.
double entropy(const FiniteDist& dist);
double entropy(const JointDist& joint);

// Conditional mutual information I(X; Y | Z) in nats over the exact joint,
// by direct summation. Negative totals within -1e-9 (floating-point noise)
// are clamped to zero and recorded; anything more negative throws.
double mutualInfo(const JointDist& joint, const std::vector<int>& X, const std::vector<int>& Y,
                  const std::vector<int>& Z = {});

struct MiClampStats {
  long long count = 0;
  double maxMagnitude = 0.0;
};
MiClampStats miClampStats();
void resetMiClampStats();

// Assigns dense integer codes to structured values as they appear.
template <typename Key>
class Codebook {
 public:
  int code(const Key& k) {
    auto [it, inserted] = map_.emplace(k, static_cast<int>(map_.size()));
    return it->second;
  }
  int size() const { return static_cast<int>(map_.size()); }

 private:
  std::map<Key, int> map_;
};

}  // namespace banditlab
