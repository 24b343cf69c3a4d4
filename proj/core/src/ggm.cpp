#include "jtmc/ggm.hpp"

#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <Eigen/Cholesky>

#include "jtmc/errors.hpp"

namespace jtmc {

double log_multigamma(std::size_t k, double a) {
  const double kd = static_cast<double>(k);
  if (!(a > (kd - 1.0) / 2.0)) {
    throw DomainError("log_multigamma: need a > (k-1)/2");
  }
  double total = kd * (kd - 1.0) / 4.0 * std::log(std::numbers::pi);
  for (std::size_t j = 1; j <= k; ++j) {
    total += std::lgamma(a + (1.0 - static_cast<double>(j)) / 2.0);
  }
  return total;
}

struct GaussianEvidence::Cache {
  mutable std::shared_mutex mutex;
  std::unordered_map<VertexSet, double> values;
};

namespace {

void check_scale(const Eigen::MatrixXd& scale, Eigen::Index p) {
  if (scale.rows() != p || scale.cols() != p) {
    throw DomainError("prior scale matrix must be p x p");
  }
  if (!scale.isApprox(scale.transpose(), 1e-12)) {
    throw DomainError("prior scale matrix must be symmetric");
  }
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Vertex>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

double log_det_pd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string("log_rho: ") + what + " is not positive definite");
  }
  const auto& l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

}  // namespace

GaussianEvidence::GaussianEvidence(std::size_t n, Eigen::MatrixXd scatter, double delta,
                                   Eigen::MatrixXd scale)
    : n_(n),
      scatter_(std::move(scatter)),
      scale_(std::move(scale)),
      delta_(delta),
      cache_(std::make_shared<Cache>()) {
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
    throw DomainError("delta must be a positive finite number");
  }
  if (scatter_.rows() != scatter_.cols()) throw DomainError("scatter matrix must be square");
  check_scale(scale_, scatter_.rows());
}

GaussianEvidence::GaussianEvidence(const Eigen::MatrixXd& data, double delta)
    : GaussianEvidence(data, delta, Eigen::MatrixXd::Identity(data.cols(), data.cols())) {}

GaussianEvidence::GaussianEvidence(const Eigen::MatrixXd& data, double delta,
                                   const Eigen::MatrixXd& scale)
    : GaussianEvidence(static_cast<std::size_t>(data.rows()), data.transpose() * data, delta,
                       scale) {}

GaussianEvidence GaussianEvidence::from_scatter(std::size_t n, const Eigen::MatrixXd& scatter,
                                                double delta, const Eigen::MatrixXd& scale) {
  return GaussianEvidence(n, scatter, delta, scale);
}

GaussianEvidence GaussianEvidence::prior_only(std::size_t p, double delta) {
  const auto pi = static_cast<Eigen::Index>(p);
  return GaussianEvidence(0, Eigen::MatrixXd::Zero(pi, pi), delta,
                          Eigen::MatrixXd::Identity(pi, pi));
}

double GaussianEvidence::log_rho_uncached(const VertexSet& c) const {
  if (c.empty() || n_ == 0) return 0.0;
  const auto idx = c.members();
  const double k = static_cast<double>(idx.size());
  const double n = static_cast<double>(n_);
  const double b = (delta_ + k - 1.0) / 2.0;
  const double a = (delta_ + n + k - 1.0) / 2.0;
  const Eigen::MatrixXd q = submatrix(scale_, idx);
  const Eigen::MatrixXd post = q + submatrix(scatter_, idx);
  return -(n * k / 2.0) * std::log(std::numbers::pi) + b * log_det_pd(q, "Q_C") -
         a * log_det_pd(post, "Q_C + S_C") + log_multigamma(idx.size(), a) -
         log_multigamma(idx.size(), b);
}

double GaussianEvidence::log_rho(const VertexSet& c) const {
  if (c.empty() || n_ == 0) return 0.0;
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->values.find(c);
    if (it != cache_->values.end()) return it->second;
  }
  const double value = log_rho_uncached(c);
  std::unique_lock lock(cache_->mutex);
  cache_->values.emplace(c, value);
  return value;
}

std::size_t GaussianEvidence::cache_size() const {
  std::shared_lock lock(cache_->mutex);
  return cache_->values.size();
}

double log_likelihood_ratio(const GaussianEvidence& ev, const MoveProposal& move) {
  return ev.log_rho(move.result) + ev.log_rho(move.separator_before) -
         ev.log_rho(move.separator_after) - ev.log_rho(move.clique);
}

double total_log_score(const GaussianEvidence& ev, const CliqueSeparatorLaw& law,
                       const JunctionTree& tree) {
  double total = 0.0;
  for (const auto& c : tree.cliques()) total += law.log_phi(c) + ev.log_rho(c);
  for (const auto& e : tree.tree_edges()) {
    const VertexSet s = tree.separator(e.a, e.b);
    total -= law.log_psi(s) + ev.log_rho(s);
  }
  return total;
}

namespace {

Eigen::MatrixXd intraclass_block(std::size_t k, const IntraclassSpec& spec) {
  const auto ki = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(ki, ki, spec.sigma2 * spec.rho);
  m.diagonal().setConstant(spec.sigma2);
  return m;
}

void add_padded_inverse(Eigen::MatrixXd& theta, const VertexSet& c, const IntraclassSpec& spec,
                        double sign) {
  const auto idx = c.members();
  const Eigen::MatrixXd inv = intraclass_block(idx.size(), spec).llt().solve(
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(idx.size()),
                                static_cast<Eigen::Index>(idx.size())));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      theta(idx[a], idx[b]) += sign * inv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
}

}  // namespace

Eigen::MatrixXd intraclass_precision(const Graph& g, const IntraclassSpec& spec) {
  if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
    throw DomainError("intraclass: sigma2 must be positive");
  }
  const JunctionTree j = mcs_clique_tree(g);
  std::size_t m = 1;
  for (const auto& c : j.cliques()) m = std::max(m, c.count());
  if (m >= 2) {
    const double lo = -1.0 / static_cast<double>(m - 1);
    if (!(spec.rho > lo && spec.rho < 1.0)) {
      std::ostringstream msg;
      msg << "intraclass: rho must lie in (" << lo << ", 1) for maximal clique size " << m;
      throw RhoOutOfRange(msg.str());
    }
  }
  const auto p = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
  for (const auto& c : j.cliques()) add_padded_inverse(theta, c, spec, 1.0);
  for (const auto& e : j.tree_edges()) {
    const VertexSet s = j.separator(e.a, e.b);
    if (!s.empty()) add_padded_inverse(theta, s, spec, -1.0);
  }
  return theta;
}

namespace detail {

Eigen::MatrixXd intraclass_covariance_factor(const Graph& g, const IntraclassSpec& spec) {
  const Eigen::MatrixXd theta = intraclass_precision(g, spec);
  const auto p = theta.rows();
  const Eigen::MatrixXd sigma = theta.llt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (sigma + sigma.transpose()));
  if (llt.info() != Eigen::Success) throw NumericalError("intraclass: completion is not positive definite");
  return llt.matrixL();
}

}  // namespace detail

Eigen::MatrixXd read_data_csv(const std::string& text, bool skip_header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_header && line_no == 1) continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("data CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
        throw ParseError("data CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("data CSV line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw ParseError("data CSV: no data");
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return data;
}

std::string to_data_csv(const Eigen::MatrixXd& data) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j > 0) out << ',';
      out << data(i, j);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace jtmc
