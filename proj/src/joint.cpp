#include "banditlab/joint.hpp"

#include <atomic>
#include <cmath>
#include <functional>

namespace banditlab {

namespace {
std::atomic<long long> g_clampCount{0};
std::atomic<double> g_clampMax{0.0};

void recordClamp(double magnitude) {
  g_clampCount.fetch_add(1, std::memory_order_relaxed);
  double prev = g_clampMax.load(std::memory_order_relaxed);
  while (magnitude > prev &&
         !g_clampMax.compare_exchange_weak(prev, magnitude, std::memory_order_relaxed)) {
  }
}
}  // namespace

MiClampStats miClampStats() { return {g_clampCount.load(), g_clampMax.load()}; }
void resetMiClampStats() {
  g_clampCount = 0;
  g_clampMax = 0.0;
}

void JointDist::add(std::vector<int> key, double p) {
  if (static_cast<int>(key.size()) != numVars())
    throw SpecError("JointDist::add: key arity mismatch");
  if (p == 0.0) return;
  table_[std::move(key)] += p;
}

double JointDist::totalMass() const {
  double m = 0.0;
  for (const auto& [k, p] : table_) m += p;
  return m;
}

void JointDist::validate(double tol) const {
  for (const auto& [k, p] : table_)
    if (p < -tol) throw SpecError("JointDist: negative probability");
  if (std::abs(totalMass() - 1.0) > tol)
    throw SpecError("JointDist: mass sums to " + std::to_string(totalMass()));
}

JointDist JointDist::marginal(const std::vector<int>& vars) const {
  std::vector<std::string> names;
  for (int v : vars) {
    if (v < 0 || v >= numVars()) throw SpecError("JointDist::marginal: bad variable index");
    names.push_back(names_[v]);
  }
  JointDist out(std::move(names));
  for (const auto& [key, p] : table_) {
    std::vector<int> sub(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) sub[i] = key[vars[i]];
    out.add(std::move(sub), p);
  }
  return out;
}

JointDist JointDist::condition(int var, int code) const {
  if (var < 0 || var >= numVars()) throw SpecError("JointDist::condition: bad variable index");
  JointDist out(names_);
  double mass = 0.0;
  for (const auto& [key, p] : table_)
    if (key[var] == code) mass += p;
  if (mass <= 0.0) throw ContractViolation("JointDist::condition: conditioning event has mass 0");
  for (const auto& [key, p] : table_)
    if (key[var] == code) out.add(key, p / mass);
  return out;
}

JointDist JointDist::pushforward(const std::string& name,
                                 const std::function<int(const std::vector<int>&)>& f) const {
  JointDist out({name});
  for (const auto& [key, p] : table_) out.add({f(key)}, p);
  return out;
}

double entropy(const FiniteDist& dist) {
  double h = 0.0;
  for (int i = 0; i < dist.size(); ++i) {
    const double p = dist.probs[i];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double entropy(const JointDist& joint) {
  double h = 0.0;
  for (const auto& [k, p] : joint.table())
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double mutualInfo(const JointDist& joint, const std::vector<int>& X, const std::vector<int>& Y,
                  const std::vector<int>& Z) {
  for (const auto& vars : {X, Y, Z})
    for (int v : vars)
      if (v < 0 || v >= joint.numVars()) throw SpecError("mutualInfo: missing variable");

  auto subKey = [](const std::vector<int>& key, const std::vector<int>& vars) {
    std::vector<int> sub(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) sub[i] = key[vars[i]];
    return sub;
  };

  std::map<std::vector<int>, double> pxyz, pxz, pyz, pz;
  for (const auto& [key, p] : joint.table()) {
    if (p <= 0.0) continue;
    auto x = subKey(key, X), y = subKey(key, Y), z = subKey(key, Z);
    std::vector<int> xz = x, yz = y, xyz = x;
    xz.insert(xz.end(), z.begin(), z.end());
    yz.insert(yz.end(), z.begin(), z.end());
    xyz.insert(xyz.end(), y.begin(), y.end());
    xyz.insert(xyz.end(), z.begin(), z.end());
    pxyz[std::move(xyz)] += p;
    pxz[std::move(xz)] += p;
    pyz[std::move(yz)] += p;
    pz[std::move(z)] += p;
  }

  const size_t nx = X.size(), ny = Y.size();
  double info = 0.0;
  for (const auto& [key, p] : pxyz) {
    std::vector<int> x(key.begin(), key.begin() + nx);
    std::vector<int> y(key.begin() + nx, key.begin() + nx + ny);
    std::vector<int> z(key.begin() + nx + ny, key.end());
    std::vector<int> xz = x, yz = y;
    xz.insert(xz.end(), z.begin(), z.end());
    yz.insert(yz.end(), z.begin(), z.end());
    info += p * std::log(p * pz.at(z) / (pxz.at(xz) * pyz.at(yz)));
  }

  if (info < 0.0) {
    if (info < -1e-9)
      throw ContractViolation("mutualInfo: negative value " + std::to_string(info));
    recordClamp(-info);
    info = 0.0;
  }
  return info;
}

}  // namespace banditlab
