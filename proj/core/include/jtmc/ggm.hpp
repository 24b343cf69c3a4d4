#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "jtmc/graph.hpp"
#include "jtmc/junction_tree.hpp"
#include "jtmc/perturbation.hpp"
#include "jtmc/priors.hpp"
#include "jtmc/random.hpp"
#include "jtmc/vertex_set.hpp"

namespace jtmc {

/// log Gamma_k(a) = k(k-1)/4 log(pi) + sum_{j=1..k} log Gamma(a + (1-j)/2).
/// Throws DomainError unless a > (k-1)/2.
double log_multigamma(std::size_t k, double a);

/// Zero-mean Gaussian data summarised for hyper-Wishart clique marginals.
///
/// With S = sum_i y_i y_i^T (the unscaled scatter), b_C = (delta + |C| - 1)/2
/// and a_C = (delta + n + |C| - 1)/2:
///
///   log rho(C) = -(n|C|/2) log(pi) + b_C log|Q_C| - a_C log|Q_C + S_C|
///                + log Gamma_{|C|}(a_C) - log Gamma_{|C|}(b_C)
///
/// and log rho(empty) = 0. Copies share one score cache; the data never
/// change after construction, so cached values stay valid.
class GaussianEvidence {
 public:
  /// `data` is n x p. Q defaults to the identity. Throws DomainError for
  /// delta <= 0 or a Q that is not symmetric of matching size.
  explicit GaussianEvidence(const Eigen::MatrixXd& data, double delta = 5.0);
  GaussianEvidence(const Eigen::MatrixXd& data, double delta, const Eigen::MatrixXd& scale);

  /// From sufficient statistics directly.
  static GaussianEvidence from_scatter(std::size_t n, const Eigen::MatrixXd& scatter, double delta,
                                       const Eigen::MatrixXd& scale);
  /// n = 0: every log rho is 0, so only the prior drives a chain.
  static GaussianEvidence prior_only(std::size_t p, double delta = 5.0);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return static_cast<std::size_t>(scatter_.rows()); }
  double delta() const noexcept { return delta_; }
  const Eigen::MatrixXd& scatter() const noexcept { return scatter_; }
  const Eigen::MatrixXd& scale() const noexcept { return scale_; }

  /// Cached; safe to call concurrently. Throws NumericalError when a
  /// submatrix is not positive definite.
  double log_rho(const VertexSet& c) const;
  /// Same value, bypassing the cache.
  double log_rho_uncached(const VertexSet& c) const;

  std::size_t cache_size() const;

 private:
  GaussianEvidence(std::size_t n, Eigen::MatrixXd scatter, double delta, Eigen::MatrixXd scale);

  struct Cache;
  std::size_t n_ = 0;
  Eigen::MatrixXd scatter_;
  Eigen::MatrixXd scale_;
  double delta_ = 5.0;
  std::shared_ptr<Cache> cache_;
};

inline double log_rho(const GaussianEvidence& ev, const VertexSet& c) { return ev.log_rho(c); }

/// log rho(C') + log rho(C & C_adj) - log rho(C' & C_adj) - log rho(C).
double log_likelihood_ratio(const GaussianEvidence& ev, const MoveProposal& move);

/// Sum over nodes of [log phi + log rho] minus the same over tree-edge
/// separators with log psi.
double total_log_score(const GaussianEvidence& ev, const CliqueSeparatorLaw& law,
                       const JunctionTree& tree);

/// Unit-free intraclass model: variance sigma2, correlation rho on edges.
struct IntraclassSpec {
  double sigma2 = 1.0;
  double rho = 0.9;
};

/// Precision of the unique completion whose clique marginals are intraclass
/// and whose precision vanishes off g. Throws NotChordal, RhoOutOfRange.
Eigen::MatrixXd intraclass_precision(const Graph& g, const IntraclassSpec& spec);

/// n draws (rows) from N(0, intraclass_precision(g, spec)^-1).
template <class URBG>
Eigen::MatrixXd simulate_intraclass(const Graph& g, const IntraclassSpec& spec, std::size_t n,
                                    URBG& rng);

/// Decimal CSV, n rows x p columns. Throws ParseError.
Eigen::MatrixXd read_data_csv(const std::string& text, bool skip_header = false);
std::string to_data_csv(const Eigen::MatrixXd& data);

namespace detail {
/// Lower Cholesky factor of the completed covariance.
Eigen::MatrixXd intraclass_covariance_factor(const Graph& g, const IntraclassSpec& spec);
}  // namespace detail

template <class URBG>
Eigen::MatrixXd simulate_intraclass(const Graph& g, const IntraclassSpec& spec, std::size_t n,
                                    URBG& rng) {
  const Eigen::MatrixXd l = detail::intraclass_covariance_factor(g, spec);
  const auto p = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(p);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = standard_normal(rng);
    data.row(i) = (l * z).transpose();
  }
  return data;
}

}  // namespace jtmc
