#include "jtmc/priors.hpp"

#include <cmath>
#include <utility>

#include "jtmc/errors.hpp"

namespace jtmc {

CliqueSeparatorLaw CliqueSeparatorLaw::uniform() { return CliqueSeparatorLaw(); }

CliqueSeparatorLaw CliqueSeparatorLaw::exp_family(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("exp_family: alpha and beta must be finite");
  }
  CliqueSeparatorLaw law;
  law.kind_ = Kind::ExpFamily;
  law.alpha_ = alpha;
  law.beta_ = beta;
  return law;
}

CliqueSeparatorLaw CliqueSeparatorLaw::plain_exp_family(double alpha, double beta) {
  auto law = custom([alpha](const VertexSet& c) { return alpha * static_cast<double>(c.count()); },
                    [beta](const VertexSet& s) { return beta * static_cast<double>(s.count()); });
  law.alpha_ = alpha;
  law.beta_ = beta;
  return law;
}

CliqueSeparatorLaw CliqueSeparatorLaw::custom(LogFactor log_phi, LogFactor log_psi) {
  if (!log_phi || !log_psi) throw DomainError("custom law: both factors are required");
  CliqueSeparatorLaw law;
  law.kind_ = Kind::Custom;
  law.custom_phi_ = std::move(log_phi);
  law.custom_psi_ = std::move(log_psi);
  return law;
}

namespace {

double checked(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string("custom law: non-finite ") + what);
  return x;
}

}  // namespace

double CliqueSeparatorLaw::log_phi(const VertexSet& c) const {
  if (c.empty()) return 0.0;
  switch (kind_) {
    case Kind::Uniform:
      return 0.0;
    case Kind::ExpFamily:
      return alpha_ * static_cast<double>(c.count() - 1);
    case Kind::Custom:
      return checked(custom_phi_(c), "log phi");
  }
  return 0.0;
}

double CliqueSeparatorLaw::log_psi(const VertexSet& s) const {
  if (s.empty()) return 0.0;
  switch (kind_) {
    case Kind::Uniform:
      return 0.0;
    case Kind::ExpFamily:
      return beta_ * static_cast<double>(s.count());
    case Kind::Custom:
      return checked(custom_psi_(s), "log psi");
  }
  return 0.0;
}

double log_prior_ratio(const CliqueSeparatorLaw& law, const MoveProposal& move) {
  if (law.kind() == CliqueSeparatorLaw::Kind::Uniform) return 0.0;
  return law.log_phi(move.result) + law.log_psi(move.separator_before) -
         law.log_psi(move.separator_after) - law.log_phi(move.clique);
}

double log_prior(const CliqueSeparatorLaw& law, const JunctionTree& tree) {
  double total = 0.0;
  for (const auto& c : tree.cliques()) total += law.log_phi(c);
  for (const auto& e : tree.tree_edges()) total -= law.log_psi(tree.separator(e.a, e.b));
  return total;
}

double log_skeleton_prior(std::size_t n) {
  if (n <= 1) return 0.0;
  const double x = static_cast<double>(n);
  return -(x - 2.0) * std::log(x);
}

}  // namespace jtmc
