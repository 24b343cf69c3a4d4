#pragma once

#include <cstddef>
#include <functional>

#include "jtmc/junction_tree.hpp"
#include "jtmc/perturbation.hpp"
#include "jtmc/vertex_set.hpp"

namespace jtmc {

/// Clique-separator factorisation law: pi(T) proportional to
/// prod phi(C) / prod psi(S). Empty cliques and separators always contribute
/// a factor of 1.
class CliqueSeparatorLaw {
 public:
  enum class Kind { Uniform, ExpFamily, Custom };
  using LogFactor = std::function<double(const VertexSet&)>;

  /// phi = psi = 1.
  static CliqueSeparatorLaw uniform();
  /// phi(C) = exp(alpha (|C| - 1)), psi(S) = exp(beta |S|).
  static CliqueSeparatorLaw exp_family(double alpha, double beta);
  /// phi(C) = exp(alpha |C|), psi(S) = exp(beta |S|), as a Custom law.
  static CliqueSeparatorLaw plain_exp_family(double alpha, double beta);
  /// Both functions must be pure and finite on every non-empty set.
  static CliqueSeparatorLaw custom(LogFactor log_phi, LogFactor log_psi);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// Throws DomainError if a custom factor is not finite.
  double log_phi(const VertexSet& c) const;
  double log_psi(const VertexSet& s) const;

 private:
  CliqueSeparatorLaw() = default;

  Kind kind_ = Kind::Uniform;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  LogFactor custom_phi_;
  LogFactor custom_psi_;
};

/// log phi(C') + log psi(C & C_adj) - log psi(C' & C_adj) - log phi(C).
double log_prior_ratio(const CliqueSeparatorLaw& law, const MoveProposal& move);

/// Unnormalised log pi(T): sum over nodes of log phi minus sum over tree
/// edges of log psi of the separator.
double log_prior(const CliqueSeparatorLaw& law, const JunctionTree& tree);

/// Uniform prior over labelled trees on n nodes: -(n - 2) log n, and 0 for
/// n = 1. Constant along a chain.
double log_skeleton_prior(std::size_t n);

}  // namespace jtmc
