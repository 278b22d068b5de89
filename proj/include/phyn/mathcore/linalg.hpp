#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "phyn/errors.hpp"

namespace phyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct CovarianceSpec {
    std::vector<double> volatilities;
    Matrix correlations;
};

inline std::string format_vector(const Vector& v) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

/// M = D R D with D = diag(volatilities).
inline Matrix covariance(const CovarianceSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.volatilities.size());
    if (spec.correlations.rows() != n || spec.correlations.cols() != n)
        throw parameter_error("covariance: correlation matrix must be " + std::to_string(n) + "x" +
                              std::to_string(n));
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(spec.volatilities[i] >= 0.0))
            throw parameter_error("covariance: volatility " + std::to_string(i) + " is negative");
        if (std::abs(spec.correlations(i, i) - 1.0) > 1e-12)
            throw parameter_error("covariance: correlation diagonal must be 1");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double c = spec.correlations(i, j);
            if (!(c >= -1.0 && c <= 1.0))
                throw parameter_error("covariance: correlation entry outside [-1, 1]");
            if (std::abs(c - spec.correlations(j, i)) > 1e-12)
                throw parameter_error("covariance: correlation matrix is not symmetric");
            m(i, j) = spec.volatilities[i] * c * spec.volatilities[j];
        }
    }
    return m;
}

/// Lower-triangular Λ with ΛΛᵀ = M for positive semidefinite M. Pivots below
/// tol·max(diag M) are treated as zero, which covers the singular boundary.
inline Matrix cholesky_psd(const Matrix& m, double tol = 1e-12) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw parameter_error("cholesky_psd: matrix must be square");
    const double scale = std::max(1e-300, m.diagonal().cwiseAbs().maxCoeff());
    const double zero = tol * scale;
    Matrix a = m;
    Matrix l = Matrix::Zero(n, n);
    auto indefinite = [&]() -> parameter_error {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        std::ostringstream os;
        os << "matrix is not positive semidefinite: eigenvalue " << es.eigenvalues()[0]
           << " along direction " << format_vector(es.eigenvectors().col(0));
        return parameter_error(os.str());
    };
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d = a(k, k);
        if (d < -zero) throw indefinite();
        if (d <= zero) {
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (std::abs(a(i, k)) > 10.0 * std::sqrt(zero * std::max(a(i, i), zero))) throw indefinite();
            continue;
        }
        const double s = std::sqrt(d);
        l(k, k) = s;
        for (Eigen::Index i = k + 1; i < n; ++i) l(i, k) = a(i, k) / s;
        for (Eigen::Index j = k + 1; j < n; ++j)
            for (Eigen::Index i = j; i < n; ++i) {
                a(i, j) -= l(i, k) * l(j, k);
                a(j, i) = a(i, j);
            }
    }
    return l;
}

inline Matrix factor_covariance(const CovarianceSpec& spec) { return cholesky_psd(covariance(spec)); }

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

} // namespace phyn
