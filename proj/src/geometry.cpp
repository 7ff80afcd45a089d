#include "cpca/geometry.hpp"

#include <cmath>
#include <string>

namespace cpca {

PolyhedralSet::PolyhedralSet(Eigen::MatrixXd a_matrix, Eigen::VectorXd b_vector)
    : a_(std::move(a_matrix)), b_(std::move(b_vector)) {
  if (a_.rows() != b_.size()) {
    throw std::invalid_argument("PolyhedralSet: A has " + std::to_string(a_.rows()) +
                                " rows but b has " + std::to_string(b_.size()) + " entries");
  }
  if (a_.cols() < 1) {
    throw std::invalid_argument("PolyhedralSet: ambient dimension must be >= 1");
  }
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    if (a_.row(i).cwiseAbs().maxCoeff() == 0.0) {
      throw std::invalid_argument("PolyhedralSet: constraint row " + std::to_string(i) +
                                  " is the zero vector");
    }
  }
}

Eigen::VectorXd PolyhedralSet::residual(const Eigen::VectorXd& x) const {
  if (x.size() != a_.cols()) {
    throw std::invalid_argument("PolyhedralSet::residual: point has wrong dimension");
  }
  return a_ * x - b_;
}

bool PolyhedralSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (a_.rows() == 0) return true;
  return residual(x).minCoeff() >= -tol;
}

PolyhedralSet PolyhedralSet::box(int dim, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("PolyhedralSet::box: need lo < hi");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * dim, dim);
  Eigen::VectorXd b(2 * dim);
  for (int i = 0; i < dim; ++i) {
    a(i, i) = 1.0;        // x_i >= lo
    b(i) = lo;
    a(dim + i, i) = -1.0; // -x_i >= -hi
    b(dim + i) = -hi;
  }
  return PolyhedralSet(std::move(a), std::move(b));
}

Direction::Direction(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() < 1) throw std::invalid_argument("Direction: empty vector");
  const double norm = p_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("Direction: vector norm " + std::to_string(norm) +
                                " is not 1 within 1e-12");
  }
}

Direction Direction::normalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("Direction::normalized: vector has zero or non-finite norm");
  }
  return Direction(v / norm);
}

SphericalAngles::SphericalAngles(Eigen::VectorXd theta) : theta_(std::move(theta)) {
  if (theta_.size() < 1) throw std::invalid_argument("SphericalAngles: need length >= 1");
  if (!theta_.allFinite()) throw std::invalid_argument("SphericalAngles: non-finite entry");
}

OrthonormalBasis::OrthonormalBasis(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.cols() > columns_.rows()) {
    throw std::invalid_argument("OrthonormalBasis: more columns than rows");
  }
  if (columns_.cols() > 0) {
    Eigen::MatrixXd gram = columns_.transpose() * columns_;
    gram -= Eigen::MatrixXd::Identity(columns_.cols(), columns_.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("OrthonormalBasis: columns not orthonormal within 1e-10");
    }
  }
}

OrthonormalBasis OrthonormalBasis::empty(int dim) {
  return OrthonormalBasis(Eigen::MatrixXd(dim, 0));
}

Direction omega(const SphericalAngles& theta) {
  const int q = theta.size();
  Eigen::VectorXd w(q + 1);
  double sin_prod = 1.0;
  for (int i = 0; i < q; ++i) {
    w[i] = sin_prod * std::cos(theta[i]);
    sin_prod *= std::sin(theta[i]);
  }
  w[q] = sin_prod;
  return Direction::normalized(w);
}

SphericalAngles angles_of(const Direction& p) {
  const int n = p.dim();
  if (n < 2) throw std::invalid_argument("angles_of: dimension must be >= 2");
  const int q = n - 1;
  const Eigen::VectorXd& v = p.vector();
  Eigen::VectorXd theta(q);
  // Tail norms computed back to front so each angle sees an exact remainder.
  Eigen::VectorXd tail(n);
  tail[n - 1] = std::abs(v[n - 1]);
  for (int i = n - 2; i >= 0; --i) {
    tail[i] = std::hypot(v[i], tail[i + 1]);
  }
  for (int i = 0; i + 1 < q; ++i) {
    theta[i] = std::atan2(tail[i + 1], v[i]);
  }
  theta[q - 1] = std::atan2(v[n - 1], v[n - 2]);
  return SphericalAngles(std::move(theta));
}

Eigen::MatrixXd omega_jacobian(const SphericalAngles& theta) {
  const int q = theta.size();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(q + 1, q);
  Eigen::VectorXd sin_t(q), cos_t(q);
  for (int i = 0; i < q; ++i) {
    sin_t[i] = std::sin(theta[i]);
    cos_t[i] = std::cos(theta[i]);
  }
  for (int j = 0; j < q; ++j) {
    double prefix = 1.0;  // sin(t_0)...sin(t_{j-1})
    for (int l = 0; l < j; ++l) prefix *= sin_t[l];
    jac(j, j) = -prefix * sin_t[j];
    double running = prefix * cos_t[j];
    for (int i = j + 1; i <= q; ++i) {
      if (i < q) {
        jac(i, j) = running * cos_t[i];
        running *= sin_t[i];
      } else {
        jac(q, j) = running;
      }
    }
  }
  return jac;
}

OrthonormalBasis orthonormal_complement(const OrthonormalBasis& previous) {
  const int d = previous.dim();
  const int r = previous.count();
  if (r >= d) {
    throw std::invalid_argument("orthonormal_complement: previous basis already spans R^d");
  }
  if (r == 0) {
    return OrthonormalBasis(Eigen::MatrixXd::Identity(d, d));
  }
  const Eigen::MatrixXd& prev = previous.columns();
  Eigen::MatrixXd out(d, d - r);
  int found = 0;
  for (int j = 0; j < d && found < d - r; ++j) {
    // Column j of the complement projector I - P P^T.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v[j] = 1.0;
    v -= prev * (prev.transpose() * v);
    // Two Gram-Schmidt passes against previous and the accepted columns.
    for (int pass = 0; pass < 2; ++pass) {
      v -= prev * (prev.transpose() * v);
      for (int l = 0; l < found; ++l) {
        v -= out.col(l).dot(v) * out.col(l);
      }
    }
    const double norm = v.norm();
    if (norm > 1e-8) {
      out.col(found++) = v / norm;
    }
  }
  if (found < d - r) {
    throw std::runtime_error("orthonormal_complement: failed to build full complement basis");
  }
  return OrthonormalBasis(std::move(out));
}

}  // namespace cpca
